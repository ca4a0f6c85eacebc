#include "goe_transit/scattering.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace goe_transit {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double gauge_hopping(double t, const char* name) {
  if (!(t != 0.0) || !std::isfinite(t))
    throw ParameterError(std::string(name) + " must be finite and nonzero");
  return -std::abs(t);
}

void require_band_center(const SelfEnergySet& w) {
  if (w.E != 0.0) throw DomainError("two-reservoir solve is defined at E = 0 only");
}

}  // namespace

TransportAmplitudes amplitudes_closed_form(const SelfEnergySet& w, double t1, double t2) {
  require_band_center(w);
  const double tau1 = gauge_hopping(t1, "t1");
  const double tau2 = gauge_hopping(t2, "t2");
  const cd s = w.w33 * w.w44 - tau2 * tau2;
  const cd D = w.w22 * s - w.w23 * w.w23 * w.w44;
  if (D == cd(0.0) || !std::isfinite(std::abs(D)))
    throw SingularRealizationError("amplitudes_closed_form: D = 0");

  TransportAmplitudes amp;
  amp.D = D;
  amp.R = (s * tau1 + I * D) / (s * tau1 - I * D);
  const cd pref = I * tau1 * w.w23 / (2.0 * D) * (1.0 - amp.R);
  amp.A = pref * (tau2 - I * w.w44);
  amp.B = pref * (tau2 + I * w.w44);
  return amp;
}

ScatteringSolution matrix_solve(const SelfEnergySet& w, double t1, double t2) {
  require_band_center(w);
  const double tau1 = gauge_hopping(t1, "t1");
  const double tau2 = gauge_hopping(t2, "t2");

  // Rows: sites 2, 3, 4 of the effective Hamiltonian; unknowns (R, phi3, phi4).
  Eigen::Matrix3cd M;
  M << I * w.w22 - tau1, w.w23, 0.0,
       I * w.w23, w.w33, tau2,
       0.0, tau2, w.w44;
  const Eigen::Vector3cd rhs(-tau1 - I * w.w22, -I * w.w23, 0.0);
  Eigen::PartialPivLU<Eigen::Matrix3cd> lu(M);
  const Eigen::Vector3cd x = lu.solve(rhs);
  if (!x.allFinite() || !(lu.rcond() > 0.0))
    throw SingularRealizationError("matrix_solve: channel system is singular");

  ScatteringSolution sol;
  sol.R = x(0);
  sol.phi1 = 1.0 - sol.R;
  sol.phi2 = I * (1.0 + sol.R);
  sol.phi3 = x(1);
  sol.phi4 = x(2);
  // phi3 = A - B, phi4 = i (A + B) at k = pi/2.
  sol.A = 0.5 * (sol.phi3 - I * sol.phi4);
  sol.B = -0.5 * (sol.phi3 + I * sol.phi4);
  sol.Phi12 = 2.0 * tau1 * std::imag(sol.phi1 * std::conj(sol.phi2));
  sol.Phi34 = 2.0 * tau2 * std::imag(sol.phi3 * std::conj(sol.phi4));
  sol.T = 1.0 - std::norm(sol.R);
  sol.T_b = sol.Phi34 / (2.0 * std::abs(tau1));
  sol.T_a = sol.T - sol.T_b;
  sol.B_r = branching_ratio_flux(sol);
  return sol;
}

double branching_ratio_amplitudes(const TransportAmplitudes& amp, double t1, double t2) {
  const double ratio = std::abs(t2) / std::abs(t1);
  const double T = 1.0 - std::norm(amp.R);
  const double T_b = ratio * (std::norm(amp.A) - std::norm(amp.B));
  const double T_a = T - T_b;
  if (T_a == 0.0) throw SingularRealizationError("branching_ratio_amplitudes: T_a = 0");
  return T_b / T_a;
}

double branching_ratio_flux(const ScatteringSolution& sol) {
  const double into_a = sol.Phi12 - sol.Phi34;
  if (into_a == 0.0) throw SingularRealizationError("branching_ratio_flux: no flux into reservoir a");
  return sol.Phi34 / into_a;
}

double branching_ratio_full(const SelfEnergySet& w, double t2) {
  const double t2sq = t2 * t2;
  const cd s = w.w33 * w.w44 - t2sq;
  const double abs_w23_sq = std::norm(w.w23);
  const double bridge = t2sq * abs_w23_sq * w.w44.imag();
  const double denom =
      w.w22.imag() * std::norm(s) - std::imag(w.w23 * w.w23 * w.w44 * std::conj(s)) - bridge;
  if (denom == 0.0 || !std::isfinite(denom))
    throw SingularRealizationError("branching_ratio_full: zero denominator");
  return bridge / denom;
}

cd channel_reflection(cd w, double t, double E) {
  const double tau = gauge_hopping(t, "t");
  if (!std::isfinite(E) || !(std::abs(E) < 2.0 * std::abs(tau))) {
    std::ostringstream msg;
    msg << "channel_reflection: |E| = " << std::abs(E) << " is outside the band 2|t| = "
        << 2.0 * std::abs(tau);
    throw DomainError(msg.str());
  }
  const double k = std::acos(E / (2.0 * tau));
  const cd phase = std::polar(1.0, k);
  const cd u = w - E;
  const cd denom = tau + u * std::conj(phase);
  if (denom == cd(0.0)) throw SingularRealizationError("channel_reflection: singular matching");
  return (tau + u * phase) / denom;
}

double channel_transmission(cd w, double t, double E) {
  return 1.0 - std::norm(channel_reflection(w, t, E));
}

double channel_reservoir_transmission(const EigenSystem<double>& eig, double Gamma,
                                      const Eigen::VectorXd& v_k, double t, double E) {
  const cd w = self_energy(eig, Gamma, v_k, v_k, E);
  return channel_transmission(w, t, E);
}

SurrogateChainResult surrogate_chain_transmission(cd w33, cd w44, double t2) {
  if (!(w33.imag() < 0) || !(w44.imag() < 0))
    throw DomainError("surrogate_chain_transmission: requires Im(w33) < 0 and Im(w44) < 0");
  if (!(t2 != 0.0) || !std::isfinite(t2))
    throw ParameterError("t2 must be finite and nonzero");
  const double ta = std::abs(w33);
  const double tb = std::abs(w44);
  // Site amplitudes psi_a = e^{-3ik/2} - R e^{3ik/2}, phi3 = e^{-ik/2} - R e^{ik/2},
  // phi4 = T e^{ik/2}, psi_b = T e^{3ik/2}, with k = pi/2; rows are the E = 0 equations
  // of sites 3 and 4. Unknowns (R, T).
  const cd q = std::polar(1.0, std::numbers::pi / 4.0);
  const cd q3 = q * q * q;
  Eigen::Matrix2cd M;
  M << -ta * q3, t2 * q,
       -t2 * q, tb * q3;
  const Eigen::Vector2cd rhs(-ta * std::conj(q3), -t2 * std::conj(q));
  Eigen::PartialPivLU<Eigen::Matrix2cd> lu(M);
  const Eigen::Vector2cd x = lu.solve(rhs);
  if (!x.allFinite()) throw SingularRealizationError("surrogate_chain_transmission: singular chain");

  SurrogateChainResult out;
  out.T_tilde = x(1);
  out.T_ab = (tb / ta) * std::norm(out.T_tilde);
  return out;
}

}  // namespace goe_transit
