#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "goe_transit/errors.hpp"
#include "goe_transit/random.hpp"

namespace goe_transit {

/// Scalar parameters of the two-reservoir Hamiltonian. Defaults are the reference
/// point used throughout: all rms scales and widths 0.1, t1 = t2 = -1, N = 100, E = 0.
struct ModelParams {
  Eigen::Index N_a = 100;
  Eigen::Index N_b = 100;
  double v_ga = 0.1;  ///< rms GOE matrix element, reservoir a
  double v_gb = 0.1;  ///< rms GOE matrix element, reservoir b
  double v2 = 0.1;    ///< entrance channel <-> reservoir a
  double v3 = 0.1;    ///< bridge site 3 <-> reservoir a
  double v4 = 0.1;    ///< bridge site 4 <-> reservoir b
  double Gamma_a = 0.1;
  double Gamma_b = 0.1;
  double t1 = -1.0;
  double t2 = -1.0;
  double E = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws ParameterError naming the first offending field.
void validate(const ModelParams& p);

/// Semicircle scales of one reservoir.
template <typename Scalar>
struct SpectralScales {
  Scalar rho0;                ///< level density at the spectrum center
  Scalar E_m;                 ///< semicircle half-width
  std::complex<Scalar> z_g;   ///< i Gamma / (2 E_m)
  Scalar c;                   ///< Gamma / (2 E_m)
};

template <typename Scalar>
SpectralScales<Scalar> spectral_scales(Eigen::Index N, Scalar v_g, Scalar Gamma) {
  if (N < 1) throw ParameterError("spectral_scales: N must be >= 1");
  if (!(v_g > 0) || !std::isfinite(v_g)) throw ParameterError("spectral_scales: v_g must be > 0");
  if (!(Gamma >= 0) || !std::isfinite(Gamma))
    throw ParameterError("spectral_scales: Gamma must be >= 0");
  using std::sqrt;
  const Scalar sqrt_n = sqrt(static_cast<Scalar>(N));
  SpectralScales<Scalar> s;
  s.rho0 = sqrt_n / (std::numbers::pi_v<Scalar> * v_g);
  s.E_m = Scalar(2) * sqrt_n * v_g;
  s.c = Gamma / (Scalar(2) * s.E_m);
  s.z_g = std::complex<Scalar>(Scalar(0), s.c);
  return s;
}

/// Semicircle level density rho0 * sqrt(1 - (E/E_m)^2), zero outside [-E_m, E_m].
template <typename Scalar>
Scalar semicircle_density(const SpectralScales<Scalar>& s, Scalar E) {
  const Scalar x = E / s.E_m;
  return std::abs(x) >= Scalar(1) ? Scalar(0) : s.rho0 * std::sqrt(Scalar(1) - x * x);
}

/// GOE matrix with H_ij = H_ji = r_ij v_g (1 + delta_ij)^{1/2}, r_ij iid standard normal.
/// Only the upper triangle is sampled (row-major, i <= j); the lower triangle is mirrored
/// so the result is exactly symmetric.
template <typename Scalar, typename Rng>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_goe(Eigen::Index N, Scalar v_g,
                                                                  Rng& stream) {
  if (N < 1) throw ParameterError("sample_goe: N must be >= 1");
  if (!(v_g > 0) || !std::isfinite(v_g)) throw ParameterError("sample_goe: v_g must be > 0");
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  const Scalar diag_scale = v_g * std::sqrt(Scalar(2));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> H(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    H(i, i) = normal(stream) * diag_scale;
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const Scalar x = normal(stream) * v_g;
      H(i, j) = x;
      H(j, i) = x;
    }
  }
  return H;
}

/// Coupling vector with iid N(0, v_k^2) components.
template <typename Scalar, typename Rng>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sample_coupling(Eigen::Index N, Scalar v_k, Rng& stream) {
  if (N < 1) throw ParameterError("sample_coupling: N must be >= 1");
  if (!(v_k > 0) || !std::isfinite(v_k)) throw ParameterError("sample_coupling: v_k must be > 0");
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(N);
  for (Eigen::Index i = 0; i < N; ++i) v(i) = normal(stream) * v_k;
  return v;
}

/// One realization of the random part of the Hamiltonian. Treated as immutable once
/// built by draw().
struct GoeDraw {
  Eigen::MatrixXd H_a;
  Eigen::MatrixXd H_b;
  Eigen::VectorXd v2_vec;
  Eigen::VectorXd v3_vec;
  Eigen::VectorXd v4_vec;
  std::uint64_t sample_index = 0;
};

/// Deterministic draw for (master_seed, sample_index).
GoeDraw draw(const ModelParams& params, std::uint64_t sample_index, std::uint64_t master_seed);

}  // namespace goe_transit
