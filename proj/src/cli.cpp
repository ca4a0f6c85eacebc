#include "goe_transit/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

namespace goe_transit::cli {

namespace {

using nlohmann::json;
using cd = std::complex<double>;
namespace fs = std::filesystem;

constexpr const char* kVersion = GOE_TRANSIT_VERSION;

struct ExperimentName {
  Experiment e;
  const char* name;
};
constexpr ExperimentName kExperiments[] = {
    {Experiment::table1, "table1"},
    {Experiment::fig2_scatter, "fig2-scatter"},
    {Experiment::fig3_wkk_vs_gamma, "fig3-wkk-vs-gamma"},
    {Experiment::fig4_wkkp_vs_gamma, "fig4-wkkp-vs-gamma"},
    {Experiment::fig5_transmission, "fig5-transmission"},
    {Experiment::branching, "branching"},
    {Experiment::custom, "custom"},
};

const std::vector<double> kDefaultGammaGrid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};

std::vector<double> default_energy_grid() {
  std::vector<double> grid;
  constexpr int kPoints = 401;
  for (int i = 0; i < kPoints; ++i) grid.push_back(-1.0 + 2.0 * i / (kPoints - 1));
  return grid;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& x : kExperiments)
    if (x.e == e) return x.name;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& x : kExperiments)
    if (name == x.name) return x.e;
  throw UsageError("unknown experiment '" + name + "'");
}

std::size_t RunConfig::effective_samples() const {
  if (n_samples) return *n_samples;
  return experiment == Experiment::table1 ? 100 : 500;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Flags {
  std::string experiment;
  std::string workers = "auto";
  std::string out;
  std::vector<std::string> formats{"csv", "json"};
  long long na = 100, nb = 100;
  long long n_samples = -1;
  long long n_average = 0;
  std::uint64_t seed = 1;
};

void add_options(CLI::App& app, Flags& f, RunConfig& cfg) {
  app.add_option("experiment", f.experiment, "table1 | fig2-scatter | fig3-wkk-vs-gamma | "
                                             "fig4-wkkp-vs-gamma | fig5-transmission | branching | custom")
      ->required();
  auto& p = cfg.params;
  app.add_option("--na", f.na, "dimension of reservoir a")->check(CLI::PositiveNumber);
  app.add_option("--nb", f.nb, "dimension of reservoir b")->check(CLI::PositiveNumber);
  app.add_option("--vga", p.v_ga, "rms GOE element, reservoir a")->check(CLI::PositiveNumber);
  app.add_option("--vgb", p.v_gb, "rms GOE element, reservoir b")->check(CLI::PositiveNumber);
  app.add_option("--v2", p.v2, "entrance coupling rms")->check(CLI::PositiveNumber);
  app.add_option("--v3", p.v3, "bridge coupling rms, reservoir a")->check(CLI::PositiveNumber);
  app.add_option("--v4", p.v4, "bridge coupling rms, reservoir b")->check(CLI::PositiveNumber);
  app.add_option("--gamma-a", p.Gamma_a, "decay width, reservoir a")->check(CLI::NonNegativeNumber);
  app.add_option("--gamma-b", p.Gamma_b, "decay width, reservoir b")->check(CLI::NonNegativeNumber);
  const auto nonzero = CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          if (std::stod(s) == 0.0) return "hopping must be nonzero";
        } catch (const std::exception&) {
          return "not a number: " + s;
        }
        return {};
      },
      "NONZERO");
  app.add_option("--t1", p.t1, "entrance-channel hopping")->check(nonzero);
  app.add_option("--t2", p.t2, "bridge-channel hopping")->check(nonzero);
  app.add_option("--energy", p.E, "scattering energy (two-reservoir experiments need 0)");
  app.add_option("--n-samples", f.n_samples, "ensemble size")->check(CLI::Range(2LL, 100000000LL));
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--workers", f.workers, "worker threads or 'auto'");
  app.add_option("--out", f.out, "output directory")->envname(kOutputDirEnv);
  app.add_option("--format", f.formats, "csv,json")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--check", cfg.check, "exit nonzero when a gated z-score exceeds --z-bound");
  app.add_option("--z-bound", cfg.z_bound, "z-score bound for --check")->check(CLI::PositiveNumber);
  app.add_option("--gamma-grid", cfg.gamma_grid, "widths for fig3/fig4")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--energy-grid", cfg.energy_grid, "energies for fig5")->delimiter(',');
  app.add_option("--n-average", f.n_average, "fig5: draws averaged per energy (0 = representative only)")
      ->check(CLI::NonNegativeNumber);
  app.set_config("--config", "", "flat key = value file mirroring the flags");
  app.allow_config_extras(CLI::config_extras_mode::error);
}

}  // namespace

std::string usage() {
  RunConfig cfg;
  Flags f;
  CLI::App app{"Two-reservoir GOE transition-state ensembles", "goe-transit"};
  add_options(app, f, cfg);
  return app.help();
}

RunConfig parse_config(const std::vector<std::string>& args_in) {
  std::vector<std::string> args = args_in;
  if (!args.empty() && args.front() == "run") args.erase(args.begin());

  RunConfig cfg;
  Flags f;
  CLI::App app{"Two-reservoir GOE transition-state ensembles", "goe-transit"};
  add_options(app, f, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.experiment = parse_experiment(f.experiment);
  cfg.params.N_a = static_cast<Eigen::Index>(f.na);
  cfg.params.N_b = static_cast<Eigen::Index>(f.nb);
  cfg.master_seed = f.seed;
  if (f.n_samples >= 0) cfg.n_samples = static_cast<std::size_t>(f.n_samples);
  cfg.n_average = static_cast<std::size_t>(f.n_average);
  if (cfg.n_average == 1) throw UsageError("--n-average: must be 0 or >= 2");
  if (f.workers == "auto") {
    cfg.workers = 0;
  } else {
    try {
      std::size_t pos = 0;
      const long long w = std::stoll(f.workers, &pos);
      if (pos != f.workers.size() || w < 1) throw std::invalid_argument("workers");
      cfg.workers = static_cast<std::size_t>(w);
    } catch (const std::exception&) {
      throw UsageError("--workers: expected a positive integer or 'auto', got '" + f.workers + "'");
    }
  }
  if (!f.out.empty()) cfg.output_dir = f.out;
  cfg.write_csv = std::find(f.formats.begin(), f.formats.end(), "csv") != f.formats.end();
  cfg.write_json = std::find(f.formats.begin(), f.formats.end(), "json") != f.formats.end();

  const auto& p = cfg.params;
  if (!(std::abs(p.E) < 2 * std::abs(p.t1)))
    throw UsageError("--energy: |E| must be below 2|t1| for a propagating entrance channel");
  if (!(std::abs(p.E) < 2 * std::abs(p.t2)))
    throw UsageError("--energy: |E| must be below 2|t2| for a propagating bridge channel");
  const bool needs_center = cfg.experiment == Experiment::table1 ||
                            cfg.experiment == Experiment::branching ||
                            cfg.experiment == Experiment::fig3_wkk_vs_gamma ||
                            cfg.experiment == Experiment::fig4_wkkp_vs_gamma;
  if (needs_center && p.E != 0.0)
    throw UsageError("--energy: experiment " + f.experiment + " is defined at E = 0");
  for (double E : cfg.energy_grid)
    if (!(std::abs(E) < 2 * std::abs(p.t2)))
      throw UsageError("--energy-grid: value " + format_number(E) + " outside (-2|t2|, 2|t2|)");
  try {
    validate(cfg.params);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Output

json to_json(const ModelParams& p) {
  return json{{"na", p.N_a},     {"nb", p.N_b},           {"vga", p.v_ga},
              {"vgb", p.v_gb},   {"v2", p.v2},            {"v3", p.v3},
              {"v4", p.v4},      {"gamma-a", p.Gamma_a},  {"gamma-b", p.Gamma_b},
              {"t1", p.t1},      {"t2", p.t2},            {"energy", p.E}};
}

namespace {

json value_json(cd v, bool is_complex) {
  if (is_complex) return json{{"re", v.real()}, {"im", v.imag()}};
  return v.real();
}

}  // namespace

json to_json(const EnsembleSummary& s) {
  json j{{"observable", s.observable},
         {"is_complex", s.is_complex},
         {"n_samples", s.n_samples},
         {"n_skipped", s.n_skipped},
         {"mean", value_json(s.mean, s.is_complex)},
         {"rms_dev", s.rms_dev},
         {"std_err", s.std_err},
         {"gated", s.gated}};
  if (s.is_complex) {
    j["rms_dev_re"] = s.rms_dev_re;
    j["rms_dev_im"] = s.rms_dev_im;
    j["std_err_re"] = s.std_err_re;
    j["std_err_im"] = s.std_err_im;
  }
  if (s.analytic) {
    const double z = s.analytic->z_score;
    j["analytic"] = json{{"value", value_json(s.analytic->value, s.is_complex)},
                         {"mode", s.analytic->mode},
                         {"z_score", std::isfinite(z) ? json(z) : json("inf")}};
  }
  return j;
}

namespace {

std::string params_line(const ModelParams& p) {
  std::ostringstream os;
  os << "na=" << p.N_a << " nb=" << p.N_b << " vga=" << format_number(p.v_ga)
     << " vgb=" << format_number(p.v_gb) << " v2=" << format_number(p.v2)
     << " v3=" << format_number(p.v3) << " v4=" << format_number(p.v4)
     << " gamma-a=" << format_number(p.Gamma_a) << " gamma-b=" << format_number(p.Gamma_b)
     << " t1=" << format_number(p.t1) << " t2=" << format_number(p.t2)
     << " energy=" << format_number(p.E);
  return os.str();
}

/// CSV with a provenance block of `#` lines, a header row, then one record per row.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const RunConfig& cfg, const ModelParams& params,
            const std::string& dataset, std::size_t n_samples)
      : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "# goe-transit " << kVersion << "\n"
         << "# experiment=" << to_string(cfg.experiment) << " dataset=" << dataset << "\n"
         << "# seed=" << cfg.master_seed << " n_samples=" << n_samples << "\n"
         << "# params: " << params_line(params) << "\n";
  }
  void header(const std::vector<std::string>& cols) { row_strings(cols); }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) out_ << ',';
      out_ << format_number(v);
      first = false;
    }
    out_ << '\n';
  }
  void row_with_index(std::uint64_t index, std::initializer_list<double> values) {
    out_ << index;
    for (double v : values) out_ << ',' << format_number(v);
    out_ << '\n';
  }

 private:
  void row_strings(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }
  std::ofstream out_;
};

struct RunContext {
  const RunConfig& cfg;
  ExecutionReport& report;
  json datasets = json::array();

  fs::path csv_path(const std::string& dataset) const {
    return cfg.output_dir / (to_string(cfg.experiment) + "_" + dataset + ".csv");
  }
  void check(const EnsembleSummary& s, const std::string& dataset) {
    if (!s.gated || !s.analytic) return;
    if (!(s.analytic->z_score <= cfg.z_bound))
      report.check_failures.push_back(dataset + "/" + s.observable +
                                      ": z = " + format_number(s.analytic->z_score));
  }
  void add_file(const fs::path& p) { report.files.push_back(p); }
};

json skips_json(const std::vector<SkipRecord>& skips) {
  json arr = json::array();
  for (const auto& s : skips) arr.push_back({{"sample_index", s.sample_index}, {"reason", s.reason}});
  return arr;
}

using SampleValue = std::function<cd(const SelfEnergySet&)>;

struct ObservableColumn {
  std::string name;
  bool is_complex;
  SampleValue value;
};

const std::vector<ObservableColumn>& observable_columns() {
  static const std::vector<ObservableColumn> cols = {
      {"w_kk", true, [](const SelfEnergySet& w) { return w.w22; }},
      {"w_33", true, [](const SelfEnergySet& w) { return w.w33; }},
      {"w_44", true, [](const SelfEnergySet& w) { return w.w44; }},
      {"w_kkp", true, [](const SelfEnergySet& w) { return w.w23; }},
      {"abs_w_kkp_sq", false, [](const SelfEnergySet& w) { return cd(std::norm(w.w23)); }},
      {"w_kkp_sq", true, [](const SelfEnergySet& w) { return w.w23 * w.w23; }},
  };
  return cols;
}

/// Emits one CSV per observable and a dataset entry for the JSON summary.
void emit_selfenergy(RunContext& ctx, const SelfEnergyEnsemble& ens, const std::string& dataset,
                     const std::vector<std::string>& observables) {
  json summaries = json::array();
  for (const auto& col : observable_columns()) {
    if (std::find(observables.begin(), observables.end(), col.name) == observables.end()) continue;
    const EnsembleSummary& s = ens.summary(col.name);
    summaries.push_back(to_json(s));
    ctx.check(s, dataset);
    if (!ctx.cfg.write_csv) continue;
    const std::string file_dataset = dataset.empty() ? col.name : dataset + "_" + col.name;
    const fs::path path = ctx.csv_path(file_dataset);
    CsvWriter csv(path, ctx.cfg, ens.params, file_dataset, ens.n_requested);
    if (col.is_complex)
      csv.header({"sample_index", col.name + "_re", col.name + "_im"});
    else
      csv.header({"sample_index", col.name});
    for (const auto& smp : ens.samples) {
      const cd v = col.value(smp.w);
      if (col.is_complex)
        csv.row_with_index(smp.sample_index, {v.real(), v.imag()});
      else
        csv.row_with_index(smp.sample_index, {v.real()});
    }
    ctx.add_file(path);
  }
  ctx.datasets.push_back({{"name", dataset.empty() ? "self_energies" : dataset},
                          {"params", to_json(ens.params)},
                          {"n_requested", ens.n_requested},
                          {"skips", skips_json(ens.skips)},
                          {"summaries", summaries}});
}

void emit_branching(RunContext& ctx, const BranchingEnsemble& ens) {
  ctx.check(ens.B_r, "branching");
  if (ctx.cfg.write_csv) {
    const fs::path path = ctx.csv_path("B_r");
    CsvWriter csv(path, ctx.cfg, ens.params, "B_r", ens.n_requested);
    csv.header({"sample_index", "B_r", "B_r_flux", "T", "T_b"});
    for (const auto& s : ens.samples) csv.row_with_index(s.sample_index, {s.B_r, s.B_r_flux, s.T, s.T_b});
    ctx.add_file(path);
  }
  ctx.datasets.push_back({{"name", "branching"},
                          {"params", to_json(ens.params)},
                          {"n_requested", ens.n_requested},
                          {"skips", skips_json(ens.skips)},
                          {"summaries", json::array({to_json(ens.B_r), to_json(ens.B_r_flux)})},
                          {"analytic_limit", ens.analytic_limit},
                          {"analytic_full", ens.analytic_full},
                          {"transition_state_prefactor", ens.params.Gamma_a > 0
                                                             ? transition_state_prefactor(ens.params)
                                                             : 0.0}});
}

void emit_gamma_scan(RunContext& ctx, const GammaScan& scan, bool wkk) {
  const std::string name = wkk ? "im_w_kk" : "abs_w_kkp_sq";
  json points = json::array();
  for (const auto& pt : scan.points) {
    const EnsembleSummary& s = wkk ? pt.im_w_kk : pt.abs_w_kkp_sq;
    ctx.check(s, name + "@gamma=" + format_number(pt.gamma));
    json j = to_json(s);
    j["gamma"] = pt.gamma;
    j["analytic_limit"] = wkk ? pt.im_w_kk_limit : pt.abs_w_kkp_sq_limit;
    points.push_back(j);
  }
  if (ctx.cfg.write_csv) {
    const fs::path path = ctx.csv_path(name);
    CsvWriter csv(path, ctx.cfg, scan.params, name, scan.n_requested);
    csv.header({"gamma", "n_samples", "mean", "rms_dev", "std_err", "analytic_full",
                "analytic_limit", "z_score"});
    for (const auto& pt : scan.points) {
      const EnsembleSummary& s = wkk ? pt.im_w_kk : pt.abs_w_kkp_sq;
      csv.row({pt.gamma, static_cast<double>(s.n_samples), s.mean.real(), s.rms_dev, s.std_err,
               s.analytic->value.real(), wkk ? pt.im_w_kk_limit : pt.abs_w_kkp_sq_limit,
               s.analytic->z_score});
    }
    ctx.add_file(path);
  }
  ctx.datasets.push_back({{"name", name},
                          {"params", to_json(scan.params)},
                          {"n_requested", scan.n_requested},
                          {"skips", skips_json(scan.skips)},
                          {"points", points}});
}

void emit_energy_scan(RunContext& ctx, const EnergyScan& scan) {
  double sum = 0, max_tc = 0, min_tc = 1;
  for (const auto& pt : scan.points) {
    sum += pt.T_c;
    max_tc = std::max(max_tc, pt.T_c);
    min_tc = std::min(min_tc, pt.T_c);
  }
  const double mean = scan.points.empty() ? 0.0 : sum / static_cast<double>(scan.points.size());
  if (ctx.cfg.write_csv) {
    const fs::path path = ctx.csv_path("T_c");
    CsvWriter csv(path, ctx.cfg, scan.params, "T_c", scan.n_average);
    if (scan.n_average > 0) {
      csv.header({"E", "T_c", "T_c_mean", "T_c_rms_dev"});
      for (const auto& pt : scan.points)
        csv.row({pt.E, pt.T_c, pt.T_c_ensemble->mean.real(), pt.T_c_ensemble->rms_dev});
    } else {
      csv.header({"E", "T_c"});
      for (const auto& pt : scan.points) csv.row({pt.E, pt.T_c});
    }
    ctx.add_file(path);
  }
  ctx.datasets.push_back({{"name", "T_c"},
                          {"params", to_json(scan.params)},
                          {"n_average", scan.n_average},
                          {"representative_sample_index", 0},
                          {"grid_points", scan.points.size()},
                          {"mean_over_E", mean},
                          {"max_over_E", max_tc},
                          {"min_over_E", min_tc}});
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ExecutionReport execute(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir))
    throw std::runtime_error("cannot create output directory " + cfg.output_dir.string());

  ExecutionReport report;
  RunContext ctx{cfg, report};
  const std::size_t n = cfg.effective_samples();
  EnsembleOptions opts;
  opts.workers = cfg.workers;

  const std::vector<std::string> table_observables = {"w_kk", "w_kkp", "abs_w_kkp_sq", "w_kkp_sq"};

  switch (cfg.experiment) {
    case Experiment::table1: {
      opts.mode = Mode::limit;
      for (Eigen::Index dim : {Eigen::Index{100}, Eigen::Index{400}}) {
        ModelParams p = cfg.params;
        p.N_a = dim;
        p.N_b = dim;
        const auto ens = run_selfenergy_ensemble(p, n, cfg.master_seed, opts);
        emit_selfenergy(ctx, ens, "N" + std::to_string(dim), table_observables);
      }
      break;
    }
    case Experiment::fig2_scatter: {
      opts.mode = Mode::full;
      const auto ens = run_selfenergy_ensemble(cfg.params, n, cfg.master_seed, opts);
      emit_selfenergy(ctx, ens, "", {"w_kk"});
      break;
    }
    case Experiment::fig3_wkk_vs_gamma:
    case Experiment::fig4_wkkp_vs_gamma: {
      const auto& grid = cfg.gamma_grid.empty() ? kDefaultGammaGrid : cfg.gamma_grid;
      const auto scan = scan_gamma(cfg.params, grid, n, cfg.master_seed, opts);
      emit_gamma_scan(ctx, scan, cfg.experiment == Experiment::fig3_wkk_vs_gamma);
      break;
    }
    case Experiment::fig5_transmission: {
      const auto grid = cfg.energy_grid.empty() ? default_energy_grid() : cfg.energy_grid;
      const auto scan = scan_energy(cfg.params, grid, cfg.master_seed, cfg.n_average, opts);
      emit_energy_scan(ctx, scan);
      break;
    }
    case Experiment::branching: {
      opts.mode = Mode::limit;
      emit_branching(ctx, run_branching_ensemble(cfg.params, n, cfg.master_seed, opts));
      break;
    }
    case Experiment::custom: {
      opts.mode = Mode::full;
      const auto ens = run_selfenergy_ensemble(cfg.params, n, cfg.master_seed, opts);
      std::vector<std::string> all;
      for (const auto& c : observable_columns()) all.push_back(c.name);
      emit_selfenergy(ctx, ens, "", all);
      if (cfg.params.E == 0.0)
        emit_branching(ctx, run_branching_ensemble(cfg.params, n, cfg.master_seed, opts));
      break;
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool passed = report.check_failures.empty();
  report.exit_status = (cfg.check && !passed) ? 1 : 0;

  json files = json::array();
  for (const auto& f : report.files) files.push_back(f.filename().string());
  report.summary = json{{"tool", "goe-transit"},
                        {"artifact_version", kVersion},
                        {"experiment", to_string(cfg.experiment)},
                        {"master_seed", cfg.master_seed},
                        {"n_samples", n},
                        {"workers", resolve_workers(cfg.workers)},
                        {"params", to_json(cfg.params)},
                        {"datasets", ctx.datasets},
                        {"csv_files", files},
                        {"check", {{"enabled", cfg.check},
                                   {"z_bound", cfg.z_bound},
                                   {"passed", passed},
                                   {"failures", report.check_failures}}},
                        {"timestamp", utc_timestamp()},
                        {"wall_time_s", wall}};
  if (cfg.write_json) {
    const fs::path path = cfg.output_dir / (to_string(cfg.experiment) + "_summary.json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << report.summary.dump(2) << '\n';
    report.files.push_back(path);
  }
  return report;
}

}  // namespace goe_transit::cli
