#include "goe_transit/ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace goe_transit {

namespace {

using cd = std::complex<double>;

void require_samples(std::size_t n, const char* who) {
  if (n < 2) throw ParameterError(std::string(who) + ": need at least 2 samples");
}

double z_component(double mean, double value, double se) {
  const double diff = mean - value;
  if (se > 0) return diff / se;
  return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

void RunningStats::push(cd x) {
  ++n_;
  const double inv = 1.0 / static_cast<double>(n_);
  const double d_re = x.real() - mean_re_;
  mean_re_ += d_re * inv;
  m2_re_ += d_re * (x.real() - mean_re_);
  const double d_im = x.imag() - mean_im_;
  mean_im_ += d_im * inv;
  m2_im_ += d_im * (x.imag() - mean_im_);
}

namespace {

EnsembleSummary make_summary(std::string observable, bool is_complex, std::size_t n,
                             std::size_t n_skipped, cd mean, double var_re, double var_im) {
  EnsembleSummary s;
  s.observable = std::move(observable);
  s.is_complex = is_complex;
  s.n_samples = n;
  s.n_skipped = n_skipped;
  if (!is_complex) {
    mean = {mean.real(), 0.0};
    var_im = 0.0;
  }
  s.mean = mean;
  s.rms_dev_re = std::sqrt(var_re);
  s.rms_dev_im = std::sqrt(var_im);
  s.rms_dev = std::sqrt(var_re + var_im);
  const double root_n = n ? std::sqrt(static_cast<double>(n)) : 1.0;
  s.std_err = s.rms_dev / root_n;
  s.std_err_re = s.rms_dev_re / root_n;
  s.std_err_im = s.rms_dev_im / root_n;
  return s;
}

}  // namespace

EnsembleSummary summarize(std::string observable, const RunningStats& stats, bool is_complex,
                          std::size_t n_skipped) {
  return make_summary(std::move(observable), is_complex, stats.count(), n_skipped, stats.mean(),
                      stats.variance_re(), stats.variance_im());
}

EnsembleSummary summarize(std::string observable, std::span<const cd> samples, bool is_complex,
                          std::size_t n_skipped) {
  const std::size_t n = samples.size();
  cd sum{};
  for (const cd& x : samples) sum += x;
  const cd mean = n ? sum / static_cast<double>(n) : cd{};
  double ss_re = 0, ss_im = 0;
  for (const cd& x : samples) {
    ss_re += (x.real() - mean.real()) * (x.real() - mean.real());
    ss_im += (x.imag() - mean.imag()) * (x.imag() - mean.imag());
  }
  const double dn = n ? static_cast<double>(n) : 1.0;
  return make_summary(std::move(observable), is_complex, n, n_skipped, mean, ss_re / dn,
                      ss_im / dn);
}

EnsembleSummary summarize(std::string observable, std::span<const double> samples,
                          std::size_t n_skipped) {
  std::vector<cd> z(samples.begin(), samples.end());
  return summarize(std::move(observable), std::span<const cd>(z), false, n_skipped);
}

void pair_analytic(EnsembleSummary& s, cd value, std::string mode, bool gated) {
  AnalyticPairing p;
  p.value = value;
  p.mode = std::move(mode);
  p.z_re = z_component(s.mean.real(), value.real(), s.std_err_re);
  p.z_im = s.is_complex ? z_component(s.mean.imag(), value.imag(), s.std_err_im) : 0.0;
  p.z_score = std::max(std::abs(p.z_re), std::abs(p.z_im));
  s.analytic = std::move(p);
  s.gated = gated;
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

const EnsembleSummary& SelfEnergyEnsemble::summary(const std::string& observable) const {
  for (const auto& s : summaries)
    if (s.observable == observable) return s;
  throw std::out_of_range("no summary named " + observable);
}

SelfEnergyEnsemble run_selfenergy_ensemble(const ModelParams& params, std::size_t n,
                                           std::uint64_t seed, const EnsembleOptions& opts) {
  validate(params);
  require_samples(n, "run_selfenergy_ensemble");

  auto outcomes = run_indexed<SelfEnergySet>(n, opts.workers, [&](std::size_t i) {
    return self_energy_set(draw(params, i, seed), params);
  });

  SelfEnergyEnsemble ens;
  ens.params = params;
  ens.seed = seed;
  ens.n_requested = n;
  ens.skips = std::move(outcomes.skips);
  RunningStats w22, w33, w44, w23, abs_sq, sq;
  for (std::size_t i = 0; i < n; ++i) {
    if (!outcomes.values[i]) continue;
    const SelfEnergySet& w = *outcomes.values[i];
    ens.samples.push_back({i, w});
    w22.push(w.w22);
    w33.push(w.w33);
    w44.push(w.w44);
    w23.push(w.w23);
    abs_sq.push(std::norm(w.w23));
    sq.push(w.w23 * w.w23);
  }

  const std::size_t skipped = ens.skips.size();
  ens.summaries = {summarize("w_kk", w22, true, skipped),
                   summarize("w_33", w33, true, skipped),
                   summarize("w_44", w44, true, skipped),
                   summarize("w_kkp", w23, true, skipped),
                   summarize("abs_w_kkp_sq", abs_sq, false, skipped),
                   summarize("w_kkp_sq", sq, true, skipped)};

  // Closed forms are evaluated at the spectrum center only.
  if (params.E == 0.0) {
    const Mode m = opts.mode;
    const char* tag = to_string(m);
    auto& s = ens.summaries;
    pair_analytic(s[0], mean_w_kk(params.N_a, params.v_ga, params.v2, params.Gamma_a, m), tag, true);
    pair_analytic(s[1], mean_w_kk(params.N_a, params.v_ga, params.v3, params.Gamma_a, m), tag, false);
    pair_analytic(s[2], mean_w_kk(params.N_b, params.v_gb, params.v4, params.Gamma_b, m), tag, false);
    pair_analytic(s[3], cd{}, "exact", true);
    if (params.Gamma_a > 0)
      pair_analytic(s[4],
                    mean_abs_w_kkp_sq(params.N_a, params.v_ga, params.v2, params.v3, params.Gamma_a, m),
                    tag, true);
    pair_analytic(s[5], mean_w_kkp2(params.N_a, params.v_ga, params.v2, params.v3, params.Gamma_a, m),
                  tag, false);
  }
  return ens;
}

BranchingEnsemble run_branching_ensemble(const ModelParams& params, std::size_t n,
                                         std::uint64_t seed, const EnsembleOptions& opts) {
  validate(params);
  require_samples(n, "run_branching_ensemble");
  if (params.E != 0.0) throw ParameterError("run_branching_ensemble: requires E = 0");

  auto outcomes = run_indexed<BranchingSample>(n, opts.workers, [&](std::size_t i) {
    const SelfEnergySet w = self_energy_set(draw(params, i, seed), params);
    const ScatteringSolution sol = matrix_solve(w, params.t1, params.t2);
    return BranchingSample{i, branching_ratio_full(w, params.t2), sol.B_r, sol.T, sol.T_b};
  });

  BranchingEnsemble ens;
  ens.params = params;
  ens.seed = seed;
  ens.n_requested = n;
  ens.skips = std::move(outcomes.skips);
  RunningStats br, br_flux;
  for (const auto& o : outcomes.values) {
    if (!o) continue;
    ens.samples.push_back(*o);
    br.push(o->B_r);
    br_flux.push(o->B_r_flux);
  }
  ens.B_r = summarize("B_r", br, false, ens.skips.size());
  ens.B_r_flux = summarize("B_r_flux", br_flux, false, ens.skips.size());
  if (params.Gamma_a > 0 && params.Gamma_b > 0) {
    ens.analytic_limit = branching_ratio_analytic(params, Mode::limit);
    ens.analytic_full = branching_ratio_analytic(params, Mode::full);
    const double paired = opts.mode == Mode::limit ? ens.analytic_limit : ens.analytic_full;
    pair_analytic(ens.B_r, paired, to_string(opts.mode), true);
  }
  return ens;
}

GammaScan scan_gamma(const ModelParams& params, std::span<const double> gamma_grid, std::size_t n,
                     std::uint64_t seed, const EnsembleOptions& opts) {
  validate(params);
  require_samples(n, "scan_gamma");
  if (params.E != 0.0) throw ParameterError("scan_gamma: requires E = 0");
  for (double g : gamma_grid)
    if (!(g > 0) || !std::isfinite(g)) throw ParameterError("scan_gamma: grid values must be > 0");
  const std::size_t n_gamma = gamma_grid.size();

  struct PerDraw {
    std::vector<cd> w22, w23;
  };
  auto outcomes = run_indexed<PerDraw>(n, opts.workers, [&](std::size_t i) {
    const GoeDraw d = draw(params, i, seed);
    const auto eig = eigh(d.H_a);
    const Vector<double> p2 = project(eig, d.v2_vec);
    const Vector<double> p3 = project(eig, d.v3_vec);
    PerDraw r;
    r.w22.reserve(n_gamma);
    r.w23.reserve(n_gamma);
    for (double g : gamma_grid) {
      r.w22.push_back(resolvent_bilinear(eig.values, p2, p2, g, 0.0));
      r.w23.push_back(resolvent_bilinear(eig.values, p2, p3, g, 0.0));
    }
    return r;
  });

  GammaScan scan;
  scan.params = params;
  scan.seed = seed;
  scan.n_requested = n;
  scan.skips = std::move(outcomes.skips);
  std::vector<RunningStats> im_w(n_gamma), abs_sq(n_gamma);
  for (const auto& o : outcomes.values) {
    if (!o) continue;
    for (std::size_t g = 0; g < n_gamma; ++g) {
      im_w[g].push(o->w22[g].imag());
      abs_sq[g].push(std::norm(o->w23[g]));
    }
  }
  for (std::size_t g = 0; g < n_gamma; ++g) {
    const double gamma = gamma_grid[g];
    GammaScanPoint pt;
    pt.gamma = gamma;
    pt.im_w_kk = summarize("im_w_kk", im_w[g], false, scan.skips.size());
    pt.abs_w_kkp_sq = summarize("abs_w_kkp_sq", abs_sq[g], false, scan.skips.size());
    pair_analytic(pt.im_w_kk, mean_w_kk(params.N_a, params.v_ga, params.v2, gamma, Mode::full).imag(),
                  "full", true);
    pair_analytic(pt.abs_w_kkp_sq,
                  mean_abs_w_kkp_sq(params.N_a, params.v_ga, params.v2, params.v3, gamma, Mode::full),
                  "full", true);
    pt.im_w_kk_limit = mean_w_kk(params.N_a, params.v_ga, params.v2, gamma, Mode::limit).imag();
    pt.abs_w_kkp_sq_limit =
        mean_abs_w_kkp_sq(params.N_a, params.v_ga, params.v2, params.v3, gamma, Mode::limit);
    scan.points.push_back(std::move(pt));
  }
  return scan;
}

EnergyScan scan_energy(const ModelParams& params, std::span<const double> energy_grid,
                       std::uint64_t seed, std::size_t n_average, const EnsembleOptions& opts) {
  validate(params);
  for (double E : energy_grid)
    if (!std::isfinite(E) || !(std::abs(E) < 2.0 * std::abs(params.t2)))
      throw DomainError("scan_energy: grid value " + std::to_string(E) +
                        " is outside the open band (-2|t2|, 2|t2|)");
  const std::size_t n_e = energy_grid.size();

  auto transmissions = [&](std::size_t index) {
    const GoeDraw d = draw(params, index, seed);
    const auto eig = eigh(d.H_b);
    const Vector<double> p4 = project(eig, d.v4_vec);
    std::vector<double> row(n_e);
    for (std::size_t e = 0; e < n_e; ++e) {
      const double E = energy_grid[e];
      const cd w = resolvent_bilinear(eig.values, p4, p4, params.Gamma_b, E);
      row[e] = channel_transmission(w, params.t2, E);
    }
    return row;
  };

  EnergyScan scan;
  scan.params = params;
  scan.seed = seed;
  scan.n_average = n_average;
  const std::vector<double> representative = transmissions(0);
  for (std::size_t e = 0; e < n_e; ++e) scan.points.push_back({energy_grid[e], representative[e], {}});

  if (n_average > 0) {
    require_samples(n_average, "scan_energy");
    auto outcomes = run_indexed<std::vector<double>>(n_average, opts.workers, transmissions);
    std::vector<RunningStats> stats(n_e);
    const std::size_t skipped = outcomes.skips.size();
    for (const auto& o : outcomes.values) {
      if (!o) continue;
      for (std::size_t e = 0; e < n_e; ++e) stats[e].push((*o)[e]);
    }
    for (std::size_t e = 0; e < n_e; ++e)
      scan.points[e].T_c_ensemble = summarize("T_c", stats[e], false, skipped);
  }
  return scan;
}

}  // namespace goe_transit
