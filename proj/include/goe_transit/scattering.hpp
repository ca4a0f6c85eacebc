#pragma once

#include <complex>

#include "goe_transit/spectral.hpp"

namespace goe_transit {

// Channel solves use the gauge with negative hopping, tau = -|t|, in which
// e^{ikn} with k = arccos(E / 2 tau) in (0, pi) is right-moving. The sign of a
// hopping is a gauge choice, so only |t| enters any observable. Reported site and
// bridge amplitudes refer to that gauge.

/// Transport amplitudes at E = 0 from the explicit inversion of the 3x3 channel problem.
struct TransportAmplitudes {
  std::complex<double> R;  ///< entrance-channel reflection
  std::complex<double> A;  ///< right-moving bridge amplitude
  std::complex<double> B;  ///< left-moving bridge amplitude
  std::complex<double> D;  ///< w22 w33 w44 - w22 t2^2 - w23^2 w44
};

/// Full solution of the effective channel problem for one realization.
struct ScatteringSolution {
  std::complex<double> phi1, phi2, phi3, phi4;
  std::complex<double> R, A, B;
  double T = 0;    ///< 1 - |R|^2, total absorbed fraction of the incident flux
  double T_a = 0;  ///< absorbed by reservoir a
  double T_b = 0;  ///< carried across the bridge into reservoir b
  double Phi12 = 0;
  double Phi34 = 0;
  double B_r = 0;  ///< Phi34 / (Phi12 - Phi34)
};

/// Closed-form R, A, B (E = 0). Throws SingularRealizationError when D = 0.
TransportAmplitudes amplitudes_closed_form(const SelfEnergySet& w, double t1, double t2);

/// Direct solve of the effective-Hamiltonian equations for (R, phi3, phi4) with
/// phi1 = 1 - R, phi2 = i(1 + R) eliminated, followed by bridge amplitudes and fluxes.
ScatteringSolution matrix_solve(const SelfEnergySet& w, double t1, double t2);

/// B_r = T_b / T_a from amplitudes, T_b = (|t2|/|t1|)(|A|^2 - |B|^2), T = 1 - |R|^2.
double branching_ratio_amplitudes(const TransportAmplitudes& amp, double t1, double t2);

/// B_r = Phi34 / (Phi12 - Phi34).
double branching_ratio_flux(const ScatteringSolution& sol);

/// B_r in terms of the self-energies only, with s = w33 w44 - t2^2:
/// t2^2 |w23|^2 Im w44 / (Im w22 |s|^2 - Im(w23^2 w44 s*) - t2^2 |w23|^2 Im w44).
/// Depends on neither t1 nor the scale of v2.
double branching_ratio_full(const SelfEnergySet& w, double t2);

/// Reflection amplitude of a semi-infinite channel (hopping t) whose last site carries
/// the self-energy w(E). At E = 0 this is (tau + i w) / (tau - i w).
std::complex<double> channel_reflection(std::complex<double> w, double t, double E);

/// 1 - |channel_reflection(w, t, E)|^2.
double channel_transmission(std::complex<double> w, double t, double E);

/// Transmission from a channel into one GOE reservoir at energy E, with the
/// self-energy of coupling vector v_k evaluated from the eigensystem.
double channel_reservoir_transmission(const EigenSystem<double>& eig, double Gamma,
                                      const Eigen::VectorXd& v_k, double t, double E);

struct SurrogateChainResult {
  std::complex<double> T_tilde;  ///< traveling-wave coefficient in the right surrogate channel
  double T_ab;                   ///< |w44 / w33| |T_tilde|^2
};

/// Four-site surrogate chain at E = 0: each reservoir replaced by a channel with hopping
/// |w_kk|, bridge sites 3 and 4 joined by t2. Only |T_tilde| and T_ab are gauge invariant.
SurrogateChainResult surrogate_chain_transmission(std::complex<double> w33,
                                                  std::complex<double> w44, double t2);

}  // namespace goe_transit
