#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "goe_transit/analytic.hpp"
#include "goe_transit/scattering.hpp"
#include "goe_transit/spectral.hpp"

namespace goe_transit {

/// Closed-form value paired with a sampled mean.
struct AnalyticPairing {
  std::complex<double> value;
  std::string mode;     ///< "limit", "full" or "exact"
  double z_score = 0;   ///< max(|z_re|, |z_im|) over the components with spread
  double z_re = 0;
  double z_im = 0;
};

/// Sample statistics of one observable. Spreads use the population convention
/// (divide by n); std_err = rms_dev / sqrt(n).
struct EnsembleSummary {
  std::string observable;
  bool is_complex = false;
  std::size_t n_samples = 0;
  std::size_t n_skipped = 0;
  std::complex<double> mean{};
  double rms_dev = 0;  ///< sqrt(<|x - mean|^2>)
  double rms_dev_re = 0;
  double rms_dev_im = 0;
  double std_err = 0;
  double std_err_re = 0;
  double std_err_im = 0;
  std::optional<AnalyticPairing> analytic;
  bool gated = false;  ///< participates in check-mode exit gating
};

/// Streaming mean/variance (Welford), fed in sample-index order.
class RunningStats {
 public:
  void push(std::complex<double> x);
  std::size_t count() const { return n_; }
  std::complex<double> mean() const { return {mean_re_, mean_im_}; }
  double variance_re() const { return n_ ? m2_re_ / static_cast<double>(n_) : 0.0; }
  double variance_im() const { return n_ ? m2_im_ / static_cast<double>(n_) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_re_ = 0, mean_im_ = 0, m2_re_ = 0, m2_im_ = 0;
};

EnsembleSummary summarize(std::string observable, const RunningStats& stats, bool is_complex,
                          std::size_t n_skipped = 0);

/// Two-pass statistics straight from a raw sample table.
EnsembleSummary summarize(std::string observable, std::span<const std::complex<double>> samples,
                          bool is_complex, std::size_t n_skipped = 0);
EnsembleSummary summarize(std::string observable, std::span<const double> samples,
                          std::size_t n_skipped = 0);

/// Attach a closed-form value and its z-score.
void pair_analytic(EnsembleSummary& s, std::complex<double> value, std::string mode, bool gated);

struct SkipRecord {
  std::uint64_t sample_index;
  std::string reason;
};

struct EnsembleOptions {
  std::size_t workers = 0;  ///< 0 = hardware concurrency
  Mode mode = Mode::limit;  ///< closed forms paired with the summaries
};

std::size_t resolve_workers(std::size_t requested);

/// Runs body(i) for every i in [0, n) on `workers` threads. Indices are claimed from an
/// atomic counter; results must be written to per-index slots. The first exception is
/// rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
  workers = std::min(resolve_workers(workers), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n && !failed.load(std::memory_order_relaxed);
             i = next.fetch_add(1))
          body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        failed = true;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Per-index results of an ensemble loop; singular realizations become skip records.
template <typename T>
struct IndexedResults {
  std::vector<std::optional<T>> values;  ///< slot i holds the result for sample index i
  std::vector<SkipRecord> skips;         ///< ascending sample index
};

/// Evaluates compute(i) for i in [0, n) in parallel. A SingularRealizationError from
/// compute(i) marks index i skipped with its message; any other exception propagates.
template <typename T, typename Compute>
IndexedResults<T> run_indexed(std::size_t n, std::size_t workers, Compute&& compute) {
  IndexedResults<T> out;
  out.values.resize(n);
  std::vector<std::string> reasons(n);
  parallel_for(n, workers, [&](std::size_t i) {
    try {
      out.values[i].emplace(compute(i));
    } catch (const SingularRealizationError& e) {
      reasons[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (!out.values[i]) out.skips.push_back({i, std::move(reasons[i])});
  return out;
}

// ---------------------------------------------------------------------------
// Self-energy ensemble

struct SelfEnergySample {
  std::uint64_t sample_index;
  SelfEnergySet w;
};

struct SelfEnergyEnsemble {
  ModelParams params;
  std::uint64_t seed = 0;
  std::size_t n_requested = 0;
  std::vector<SelfEnergySample> samples;  ///< index order, skipped draws omitted
  std::vector<SkipRecord> skips;
  /// w_kk (= w22), w_33, w_44, w_kkp (= w23), abs_w_kkp_sq, w_kkp_sq.
  std::vector<EnsembleSummary> summaries;

  const EnsembleSummary& summary(const std::string& observable) const;
};

SelfEnergyEnsemble run_selfenergy_ensemble(const ModelParams& params, std::size_t n,
                                           std::uint64_t seed, const EnsembleOptions& opts = {});

// ---------------------------------------------------------------------------
// Branching-ratio ensemble

struct BranchingSample {
  std::uint64_t sample_index;
  double B_r;       ///< self-energy formula route
  double B_r_flux;  ///< flux route from the linear solve
  double T;
  double T_b;
};

struct BranchingEnsemble {
  ModelParams params;
  std::uint64_t seed = 0;
  std::size_t n_requested = 0;
  std::vector<BranchingSample> samples;
  std::vector<SkipRecord> skips;
  EnsembleSummary B_r;  ///< paired with the limit-mode closed form
  EnsembleSummary B_r_flux;
  double analytic_limit = 0;
  double analytic_full = 0;
};

BranchingEnsemble run_branching_ensemble(const ModelParams& params, std::size_t n,
                                         std::uint64_t seed, const EnsembleOptions& opts = {});

// ---------------------------------------------------------------------------
// Width scan (reservoir a, Gamma_a swept; one eigendecomposition per draw)

struct GammaScanPoint {
  double gamma;
  EnsembleSummary im_w_kk;       ///< Im(w22), paired with the full closed form
  EnsembleSummary abs_w_kkp_sq;  ///< |w23|^2, paired with the full closed form
  double im_w_kk_limit;
  double abs_w_kkp_sq_limit;
};

struct GammaScan {
  ModelParams params;
  std::uint64_t seed = 0;
  std::size_t n_requested = 0;
  std::vector<GammaScanPoint> points;
  std::vector<SkipRecord> skips;
};

GammaScan scan_gamma(const ModelParams& params, std::span<const double> gamma_grid, std::size_t n,
                     std::uint64_t seed, const EnsembleOptions& opts = {});

// ---------------------------------------------------------------------------
// Energy scan of the channel -> reservoir b transmission

struct EnergyScanPoint {
  double E;
  double T_c;  ///< representative draw (sample index 0)
  std::optional<EnsembleSummary> T_c_ensemble;
};

struct EnergyScan {
  ModelParams params;
  std::uint64_t seed = 0;
  std::size_t n_average = 0;
  std::vector<EnergyScanPoint> points;
};

/// n_average = 0 evaluates only the representative draw.
EnergyScan scan_energy(const ModelParams& params, std::span<const double> energy_grid,
                       std::uint64_t seed, std::size_t n_average = 0,
                       const EnsembleOptions& opts = {});

}  // namespace goe_transit
