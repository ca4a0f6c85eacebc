#include "goe_transit/analytic.hpp"

#include <numbers>

namespace goe_transit {

using std::numbers::pi;

std::complex<double> mean_w_kk(Eigen::Index N, double v_g, double v_k, double Gamma, Mode mode) {
  const auto s = spectral_scales(N, v_g, Gamma);
  const double weight = v_k * v_k * s.rho0;
  // Gamma = 0 sits on the cut; the boundary value from above equals the limit form.
  if (mode == Mode::limit || Gamma == 0.0) return weight * I1_small<double>();
  return weight * I1(s.z_g);
}

double mean_abs_w_kkp_sq(Eigen::Index N, double v_g, double v_k, double v_kp, double Gamma,
                         Mode mode) {
  const auto s = spectral_scales(N, v_g, Gamma);
  if (Gamma == 0.0) throw DomainError("mean_abs_w_kkp_sq: diverges for Gamma = 0");
  const double v4 = v_k * v_k * v_kp * v_kp;
  if (mode == Mode::limit) return 2.0 * pi * v4 * s.rho0 / Gamma;
  return v4 * (s.rho0 / s.E_m) * I3(s.c);
}

std::complex<double> mean_w_kkp2(Eigen::Index N, double v_g, double v_k, double v_kp) {
  const auto s = spectral_scales(N, v_g, 0.0);
  return {-pi * v_k * v_k * v_kp * v_kp * s.rho0 / s.E_m, 0.0};
}

std::complex<double> mean_w_kkp2(Eigen::Index N, double v_g, double v_k, double v_kp, double Gamma,
                                 Mode mode) {
  if (mode == Mode::limit || Gamma == 0.0) return mean_w_kkp2(N, v_g, v_k, v_kp);
  const auto s = spectral_scales(N, v_g, Gamma);
  return v_k * v_k * v_kp * v_kp * (s.rho0 / s.E_m) * I2(s.z_g);
}

double transmission_factor_Tab(std::complex<double> w33, std::complex<double> w44, double t2) {
  if (!(w33.imag() < 0) || !(w44.imag() < 0))
    throw DomainError("transmission_factor_Tab: requires Im(w33) < 0 and Im(w44) < 0");
  const double prod = std::abs(w33 * w44);
  const double t2sq = t2 * t2;
  const double denom = prod + t2sq;
  return 4.0 * t2sq * prod / (denom * denom);
}

double transition_state_prefactor(const ModelParams& params) {
  validate(params);
  if (params.Gamma_a == 0.0)
    throw DomainError("branching_ratio_analytic: diverges for Gamma_a = 0");
  const auto s = spectral_scales(params.N_a, params.v_ga, params.Gamma_a);
  return 1.0 / (2.0 * pi * s.rho0 * params.Gamma_a);
}

double branching_ratio_analytic(const ModelParams& params, Mode mode) {
  const double prefactor = transition_state_prefactor(params);
  const auto w33 = mean_w_kk(params.N_a, params.v_ga, params.v3, params.Gamma_a, mode);
  const auto w44 = mean_w_kk(params.N_b, params.v_gb, params.v4, params.Gamma_b, mode);
  return prefactor * transmission_factor_Tab(w33, w44, params.t2);
}

double quantum_dot_transmission(double E, double E_r, double Gamma_a, double Gamma_b) {
  if (!(Gamma_a >= 0) || !(Gamma_b >= 0))
    throw ParameterError("quantum_dot_transmission: widths must be >= 0");
  const double dE = E - E_r;
  const double half_sum = 0.5 * (Gamma_a + Gamma_b);
  const double denom = dE * dE + half_sum * half_sum;
  if (denom == 0.0)
    throw SingularRealizationError("quantum_dot_transmission: zero widths at resonance");
  return Gamma_a * Gamma_b / denom;
}

}  // namespace goe_transit
