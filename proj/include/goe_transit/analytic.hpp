#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "goe_transit/errors.hpp"
#include "goe_transit/goe.hpp"

namespace goe_transit {

/// Which closed form feeds an ensemble expectation: the small-width limit or the
/// finite-width expression built on the semicircle integrals.
enum class Mode { limit, full };

inline const char* to_string(Mode m) { return m == Mode::limit ? "limit" : "full"; }

namespace detail {

template <typename Real>
void require_off_cut(const std::complex<Real>& z, const char* name) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string(name) + ": non-finite argument");
  if (z.imag() == Real(0) && std::abs(z.real()) <= Real(1))
    throw DomainError(std::string(name) + ": argument lies on the cut [-1, 1]");
}

/// sqrt(z^2 - 1) on the branch with cut [-1, 1] that behaves like z at infinity.
template <typename Real>
std::complex<Real> cut_sqrt(const std::complex<Real>& z) {
  return std::sqrt(z - Real(1)) * std::sqrt(z + Real(1));
}

}  // namespace detail

/// int_{-1}^{1} sqrt(1-x^2) / (z - x) dx = pi (z - sqrt(z^2 - 1)), evaluated as
/// pi / (z + sqrt(z^2 - 1)) to avoid cancellation at large |z|.
template <typename Real>
std::complex<Real> I1(const std::complex<Real>& z) {
  detail::require_off_cut(z, "I1");
  return std::numbers::pi_v<Real> / (z + detail::cut_sqrt(z));
}

/// int_{-1}^{1} sqrt(1-x^2) / (z - x)^2 dx = -dI1/dz = pi (z / sqrt(z^2-1) - 1).
template <typename Real>
std::complex<Real> I2(const std::complex<Real>& z) {
  detail::require_off_cut(z, "I2");
  const std::complex<Real> s = detail::cut_sqrt(z);
  return std::numbers::pi_v<Real> / (s * (z + s));
}

/// int_{-1}^{1} sqrt(1-x^2) / (x^2 + y^2) dx = (pi/y)(sqrt(1+y^2) - y).
template <typename Real>
Real I3(Real y) {
  if (!(y > 0) || !std::isfinite(y)) throw DomainError("I3: argument must be finite and > 0");
  return std::numbers::pi_v<Real> / (y * (std::sqrt(Real(1) + y * y) + y));
}

/// int_{-1}^{1} sqrt(1-x^2) / (x^2 + y^2)^2 dx = pi / (2 y^3 sqrt(1+y^2)).
template <typename Real>
Real I4(Real y) {
  if (!(y > 0) || !std::isfinite(y)) throw DomainError("I4: argument must be finite and > 0");
  return std::numbers::pi_v<Real> / (Real(2) * y * y * y * std::sqrt(Real(1) + y * y));
}

// Leading small-argument behavior (z -> 0 from the upper half-plane, y -> 0+).
template <typename Real>
std::complex<Real> I1_small() { return {Real(0), -std::numbers::pi_v<Real>}; }
template <typename Real>
std::complex<Real> I2_small() { return {-std::numbers::pi_v<Real>, Real(0)}; }
template <typename Real>
Real I3_small(Real y) { return std::numbers::pi_v<Real> / y; }
template <typename Real>
Real I4_small(Real y) { return std::numbers::pi_v<Real> / (Real(2) * y * y * y); }

/// Ensemble mean of a diagonal self-energy at E = 0:
/// full  v_k^2 rho0 I1(i Gamma / 2E_m), limit -i pi v_k^2 rho0.
std::complex<double> mean_w_kk(Eigen::Index N, double v_g, double v_k, double Gamma,
                               Mode mode = Mode::full);

/// <|w_kk'|^2> at E = 0: full v_k^2 v_k'^2 (rho0/E_m) I3(c), limit 2 pi v_k^2 v_k'^2 rho0 / Gamma.
/// Gamma = 0 diverges and throws DomainError.
double mean_abs_w_kkp_sq(Eigen::Index N, double v_g, double v_k, double v_kp, double Gamma,
                         Mode mode = Mode::full);

/// <w_kk'^2> at E = 0 in the small-width limit: -pi v_k^2 v_k'^2 rho0 / E_m.
std::complex<double> mean_w_kkp2(Eigen::Index N, double v_g, double v_k, double v_kp);

/// Finite-width form v_k^2 v_k'^2 (rho0/E_m) I2(i Gamma / 2E_m); Mode::limit forwards to the
/// overload above.
std::complex<double> mean_w_kkp2(Eigen::Index N, double v_g, double v_k, double v_kp, double Gamma,
                                 Mode mode);

/// Transmission between the two reservoirs through the bridge channel,
/// 4 t2^2 |w33 w44| / (|w33 w44| + t2^2)^2. Requires Im(w33) < 0 and Im(w44) < 0.
double transmission_factor_Tab(std::complex<double> w33, std::complex<double> w44, double t2);

/// Transition-state branching ratio (1 / (2 pi rho0_a Gamma_a)) * T_ab, with T_ab built from
/// the mean bridge self-energies of the selected mode.
double branching_ratio_analytic(const ModelParams& params, Mode mode);

/// The prefactor 1 / (2 pi rho0_a Gamma_a) alone, i.e. the branching ratio for T_ab = 1.
double transition_state_prefactor(const ModelParams& params);

/// Single-resonance (quantum dot) transmission Gamma_a Gamma_b / ((E-E_r)^2 + (Gamma_a+Gamma_b)^2/4).
double quantum_dot_transmission(double E, double E_r, double Gamma_a, double Gamma_b);

}  // namespace goe_transit
