#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "goe_transit/analytic.hpp"
#include "support/quadrature.hpp"

using namespace goe_transit;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Upper half-plane point with modulus spread over several decades.
cd random_upper(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-3.0, 3.0), logim(-2.0, 0.7);
  return {re(rng), std::pow(10.0, logim(rng))};
}

}  // namespace

TEST_CASE("I1..I4 against quadrature at fixed arguments") {
  const cd z{0.0, 0.5};
  CHECK(rel_err(I1(z), testing::I1_quadrature(z)) < 1e-10);
  CHECK(rel_err(I2(z), testing::I2_quadrature(z)) < 1e-10);
  CHECK(std::abs(I3(0.3) - testing::I3_quadrature(0.3)) / I3(0.3) < 1e-10);
  CHECK(std::abs(I4(0.3) - testing::I4_quadrature(0.3)) / I4(0.3) < 1e-10);

  // Off the imaginary axis and outside the cut on the real line.
  for (cd w : {cd{0.7, 0.2}, cd{-1.5, 0.05}, cd{2.0, 0.0}, cd{-3.0, 0.0}, cd{0.0, -0.4}}) {
    CAPTURE(w);
    CHECK(rel_err(I1(w), testing::I1_quadrature(w)) < 1e-8);
    CHECK(rel_err(I2(w), testing::I2_quadrature(w)) < 1e-8);
  }
}

TEST_CASE("I1..I4 against quadrature at 100 random arguments") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> ydist(0.02, 5.0);
  for (int k = 0; k < 100; ++k) {
    const cd z = random_upper(rng);
    const double y = ydist(rng);
    CAPTURE(z);
    CAPTURE(y);
    CHECK(rel_err(I1(z), testing::I1_quadrature(z)) < 1e-8);
    CHECK(rel_err(I2(z), testing::I2_quadrature(z)) < 1e-8);
    CHECK(std::abs(I3(y) / testing::I3_quadrature(y) - 1) < 1e-8);
    CHECK(std::abs(I4(y) / testing::I4_quadrature(y) - 1) < 1e-8);
  }
}

TEST_CASE("closed forms are continuous across the imaginary axis and decay like the integral") {
  for (double r : {1e2, 1e4, 1e6}) {
    // int sqrt(1-x^2) dx = pi/2, so I1(z) ~ (pi/2)/z at large |z|.
    const cd z{r, r / 3};
    CHECK(rel_err(I1(z), (pi / 2) / z) < 2.0 / (r * r));
    CHECK(rel_err(I1(-z), (pi / 2) / (-z)) < 2.0 / (r * r));
  }
  // Mirror symmetry I1(-conj z) = -conj I1(z) from the even weight.
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const cd z = random_upper(rng);
    CHECK(rel_err(I1(-std::conj(z)), -std::conj(I1(z))) < 1e-13);
    CHECK(I1(z).imag() < 0);
  }
}

TEST_CASE("small-argument limits with O(|z|) error") {
  CHECK(I1_small<double>() == cd{0.0, -pi});
  CHECK(I2_small<double>() == cd{-pi, 0.0});

  double prev1 = 0, prev2 = 0;
  for (int k = 0; k < 8; ++k) {
    const double y = std::pow(10.0, -1.0 - k);
    const cd z{0.0, y};
    const double e1 = std::abs(I1(z) - I1_small<double>());
    const double e2 = std::abs(I2(z) - I2_small<double>());
    CAPTURE(y);
    // Leading corrections: I1 = -i pi + pi z + ..., I2 = -pi + O(z) through i pi z.
    CHECK(e1 <= 1.01 * pi * y);
    CHECK(e2 <= 1.01 * pi * y);
    if (k > 0) {
      CHECK(e1 / prev1 == doctest::Approx(0.1).epsilon(0.02));
      CHECK(e2 / prev2 == doctest::Approx(0.1).epsilon(0.02));
    }
    prev1 = e1;
    prev2 = e2;

    CHECK(std::abs(y * I3(y) - pi) <= 1.01 * pi * y);
    CHECK(std::abs(y * y * y * I4(y) - pi / 2) <= pi * y * y);
    CHECK(std::abs(I3(y) / I3_small(y) - 1) <= 1.01 * y);
    CHECK(std::abs(I4(y) / I4_small(y) - 1) <= y * y);
  }
  // Approach along a tilted ray too.
  for (double r : {1e-2, 1e-4, 1e-6}) {
    const cd z = r * std::polar(1.0, 1.0);
    CHECK(std::abs(I1(z) - I1_small<double>()) <= 1.01 * pi * r);
  }
}

TEST_CASE("I2 = -dI1/dz by central differences") {
  std::mt19937_64 rng(99);
  const double h = 1e-5;
  for (int k = 0; k < 100; ++k) {
    cd z = random_upper(rng);
    if (z.imag() < 0.05) z.imag(z.imag() + 0.05);
    const cd deriv = (I1(z + h) - I1(z - h)) / (2 * h);
    CAPTURE(z);
    CHECK(std::abs(I2(z) + deriv) < 1e-6);
  }
}

TEST_CASE("I3 and I4 are the imaginary-axis restrictions of I1 and I2") {
  for (double y : {0.01, 0.1, 1.0, 4.0}) {
    // 1/(iy - x) = -(x + iy)/(x^2 + y^2) so Im I1(iy) = -y I3(y).
    CHECK(I1(cd{0.0, y}).imag() == doctest::Approx(-y * I3(y)).epsilon(1e-13));
    // I3' = -2y I4.
    const double h = 1e-6 * y;
    CHECK((I3(y + h) - I3(y - h)) / (2 * h) == doctest::Approx(-2 * y * I4(y)).epsilon(1e-7));
  }
}

TEST_CASE("integral domain errors") {
  CHECK_THROWS_AS(I1(cd{0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(I1(cd{-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(I2(cd{0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(I1(cd{std::nan(""), 1.0}), DomainError);
  CHECK_THROWS_AS(I3(0.0), DomainError);
  CHECK_THROWS_AS(I3(-1.0), DomainError);
  CHECK_THROWS_AS(I4(0.0), DomainError);
  CHECK_THROWS_AS(I4(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_NOTHROW(I1(cd{1.0 + 1e-12, 0.0}));
}

TEST_CASE("reference closed-form values at N = 100 and 400") {
  SUBCASE("mean w_kk") {
    CHECK(std::abs(mean_w_kk(100, 0.1, 0.1, 0.1, Mode::limit) - cd{0, -1}) < 1e-14);
    CHECK(std::abs(mean_w_kk(400, 0.1, 0.1, 0.1, Mode::limit) - cd{0, -2}) < 1e-14);
    CHECK(std::abs(mean_w_kk(100, 0.1, 0.1, 0.0, Mode::full) - cd{0, -1}) < 1e-14);
    // Full mode: v^2 rho0 times the integral at i c, checked by quadrature.
    const auto s = spectral_scales(100, 0.1, 0.1);
    const cd q = 0.01 * s.rho0 * testing::I1_quadrature(s.z_g);
    CHECK(rel_err(mean_w_kk(100, 0.1, 0.1, 0.1, Mode::full), q) < 1e-10);
    CHECK(std::abs(mean_w_kk(100, 0.1, 0.1, 0.1) - cd{0, -1}) < 0.03);
  }
  SUBCASE("mean |w_kk'|^2") {
    CHECK(mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, 0.1, Mode::limit) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(mean_abs_w_kkp_sq(400, 0.1, 0.1, 0.1, 0.1, Mode::limit) == doctest::Approx(0.4).epsilon(1e-14));
    const auto s = spectral_scales(100, 0.1, 0.1);
    REQUIRE(s.c == doctest::Approx(0.025));
    const double q = 1e-4 * (s.rho0 / s.E_m) * testing::I3_quadrature(s.c);
    CHECK(mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, 0.1, Mode::full) == doctest::Approx(q).epsilon(1e-8));
    // Full = limit * (sqrt(1+c^2) - c).
    CHECK(mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, 0.1, Mode::full) ==
          doctest::Approx(0.2 * (std::sqrt(1 + s.c * s.c) - s.c)).epsilon(1e-13));
    CHECK_THROWS_AS(mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, 0.0, Mode::limit), DomainError);
    CHECK_THROWS_AS(mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, 0.0, Mode::full), DomainError);
  }
  SUBCASE("mean w_kk'^2") {
    CHECK(std::abs(mean_w_kkp2(100, 0.1, 0.1, 0.1) - cd{-0.005, 0}) < 1e-15);
    CHECK(std::abs(mean_w_kkp2(400, 0.1, 0.1, 0.1) - cd{-0.005, 0}) < 1e-15);
    const auto s = spectral_scales(100, 0.1, 0.1);
    const cd q = 1e-4 * (s.rho0 / s.E_m) * testing::I2_quadrature(s.z_g);
    CHECK(rel_err(mean_w_kkp2(100, 0.1, 0.1, 0.1, 0.1, Mode::full), q) < 1e-8);
    CHECK(mean_w_kkp2(100, 0.1, 0.1, 0.1, 0.1, Mode::limit) == mean_w_kkp2(100, 0.1, 0.1, 0.1));
  }
  SUBCASE("|<w_kk'^2>| / <|w_kk'|^2> = c in the limit forms") {
    for (double G : {0.01, 0.1, 0.7}) {
      const auto s = spectral_scales(100, 0.1, G);
      CHECK(std::abs(mean_w_kkp2(100, 0.1, 0.2, 0.3)) /
                mean_abs_w_kkp_sq(100, 0.1, 0.2, 0.3, G, Mode::limit) ==
            doctest::Approx(s.c).epsilon(1e-13));
    }
  }
}

TEST_CASE("full-mode means converge to the limit forms as Gamma -> 0") {
  for (double G : {1e-2, 1e-3, 1e-4}) {
    const auto s = spectral_scales(100, 0.1, G);
    CHECK(std::abs(mean_w_kk(100, 0.1, 0.1, G, Mode::full) - mean_w_kk(100, 0.1, 0.1, G, Mode::limit)) <=
          1.01 * pi * s.c * 0.01 * s.rho0);
    CHECK(mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, G, Mode::full) /
              mean_abs_w_kkp_sq(100, 0.1, 0.1, 0.1, G, Mode::limit) ==
          doctest::Approx(1.0).epsilon(1.01 * s.c));
  }
}

TEST_CASE("transmission_factor_Tab") {
  CHECK(transmission_factor_Tab(cd{0, -1}, cd{0, -1}, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(transmission_factor_Tab(cd{0, -1}, cd{0, -1}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(transmission_factor_Tab(cd{0, -1e-9}, cd{0, -1e-9}, -1.0) < 1e-17);
  CHECK_THROWS_AS(transmission_factor_Tab(cd{0, 1}, cd{0, -1}, -1.0), DomainError);
  CHECK_THROWS_AS(transmission_factor_Tab(cd{1, 0}, cd{0, -1}, -1.0), DomainError);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> re(-3, 3), im(1e-6, 3), t(0.1, 3);
  for (int k = 0; k < 1000; ++k) {
    const cd a{re(rng), -im(rng)}, b{re(rng), -im(rng)};
    const double t2 = t(rng);
    const double T = transmission_factor_Tab(a, b, t2);
    CHECK(T >= 0.0);
    CHECK(T <= 1.0 + 1e-15);
    // Equality iff |w33 w44| = t2^2: rescale b onto the matched product.
    const cd b_matched = b * (t2 * t2 / std::abs(a * b));
    CHECK(transmission_factor_Tab(a, b_matched, t2) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("branching_ratio_analytic") {
  const ModelParams p;
  CHECK(transition_state_prefactor(p) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(branching_ratio_analytic(p, Mode::limit) == doctest::Approx(0.05).epsilon(1e-14));
  const double full = branching_ratio_analytic(p, Mode::full);
  CHECK(full == doctest::Approx(0.04996876951905).epsilon(1e-11));
  CHECK(full < 0.05);

  ModelParams q = p;
  q.Gamma_a = 0.2;
  CHECK(transition_state_prefactor(q) == doctest::Approx(0.025).epsilon(1e-14));
  // Doubling Gamma_a halves the limit-mode result.
  CHECK(branching_ratio_analytic(q, Mode::limit) ==
        doctest::Approx(0.5 * branching_ratio_analytic(p, Mode::limit)).epsilon(1e-14));

  q = p;
  q.Gamma_a = 0.0;
  CHECK_THROWS_AS(branching_ratio_analytic(q, Mode::limit), DomainError);

  // Limit mode does not see Gamma_b at all.
  q = p;
  q.Gamma_b = 0.9;
  CHECK(branching_ratio_analytic(q, Mode::limit) == branching_ratio_analytic(p, Mode::limit));
}

TEST_CASE("quantum_dot_transmission") {
  CHECK(quantum_dot_transmission(0.3, 0.3, 0.1, 0.1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(quantum_dot_transmission(0.4, 0.3, 0.1, 0.1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(quantum_dot_transmission(0.1, 0.0, 0.1, 0.0) == 0.0);
  CHECK(quantum_dot_transmission(0.0, 0.0, 0.1, 0.3) <= 1.0);
  CHECK_THROWS_AS(quantum_dot_transmission(0.0, 0.0, 0.0, 0.0), SingularRealizationError);
  CHECK_THROWS_AS(quantum_dot_transmission(0.0, 0.0, -0.1, 0.1), ParameterError);
}
