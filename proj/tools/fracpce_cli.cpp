// fracpce command-line tool.
//
//   fracpce fit   --config CFG --data SAMPLES.csv --out DIR
//   fracpce study --config CFG --out DIR [--seed N] [--n-stat N] [--threads N]
//   fracpce plate-field --out FIELD.csv [--young E --thickness T --poisson NU]
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid input, 3 fit did not converge.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "fracpce/config.hpp"
#include "fracpce/io.hpp"
#include "fracpce/kernels.hpp"
#include "fracpce/rng.hpp"
#include "fracpce/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fracpce;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kInvalid = 2;
constexpr int kNotConverged = 3;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
}

struct FitArgs {
  std::string config, data, out;
  std::optional<std::uint64_t> seed;
};

int cmd_fit(const FitArgs& args) {
  ExperimentConfig cfg;
  SampleTable table;
  try {
    cfg = load_experiment_config(args.config, false);
    if (args.seed) cfg.master_seed = *args.seed;
    table = read_samples_csv(fs::path(args.data), cfg.model.inputs.size() + 1);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalid;
  } catch (const CsvError& e) {
    std::cerr << "malformed sample file " << args.data << ": " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }

  const std::size_t m = cfg.model.inputs.size();
  const auto n = static_cast<std::size_t>(table.values.rows());
  const GermSpec germ = natural_germ(cfg.model.inputs);
  ExperimentalDesign ed;
  ed.x = table.values.leftCols(static_cast<Eigen::Index>(m));
  ed.y = table.values.col(static_cast<Eigen::Index>(m));
  ed.xi.resize(ed.x.rows(), ed.x.cols());
  for (Eigen::Index i = 0; i < ed.x.rows(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      try {
        ed.xi(i, col) = to_germ_1d(ed.x(i, col), cfg.model.inputs[j], germ.families[j]);
      } catch (const std::exception& e) {
        std::cerr << "malformed sample file " << args.data << ": data row " << i + 1 << ", column " << j + 1
                  << ": value outside the support of its input distribution\n";
        return kInvalid;
      }
    }
  }

  try {
    ensure_dir(args.out);
    const MultiIndexSet basis = basis_for_design(cfg.basis, m, n);
    const PceModel pce = fit_ols(ed, basis, germ);
    json pj = to_json(pce);
    pj["q2"] = std::isfinite(pce.q2) ? json(pce.q2) : json(nullptr);
    pj["moments"] = to_json(moments_from_pce(pce, cfg.fractional.moments));
    write_json(fs::path(args.out) / "pce.json", pj);

    FractionalOptions fo = cfg.fractional;
    fo.seed = derive_seed(cfg.master_seed, {hash_tag("positivity")});
    const FractionalMomentSet fm = fractional_moments_from_pce(pce, cfg.orders, fo);
    write_json(fs::path(args.out) / "fractional_moments.json", to_json(fm));

    FitConfig fc = cfg.fit;
    fc.seed = derive_seed(cfg.master_seed, {hash_tag("fit")});
    FitResult fit;
    try {
      fit = fit_meigd(fm, fc);
    } catch (const FitError& e) {
      write_json(fs::path(args.out) / "fit.json", to_json(e.best_seen()));
      std::cerr << "fit failed: " << e.what() << '\n';
      return kNotConverged;
    }
    write_json(fs::path(args.out) / "fit.json", to_json(fit));
    std::cout << "basis terms " << basis.size() << " (p=" << basis.p << "), Q2 " << format_number(pce.q2)
              << ", fit residual " << format_number(fit.residual) << (fit.converged ? " (converged)" : " (not converged)")
              << '\n';
    if (!fit.converged) {
      std::cerr << "fit did not reach tolerance " << fc.tolerance << "; artifacts written to " << args.out << '\n';
      return kNotConverged;
    }
  } catch (const RankDeficientError& e) {
    std::cerr << "error: " << e.what() << " (too few samples for the basis)\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

struct StudyArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_stat, threads;
  bool no_timing = false;
};

int cmd_study(const StudyArgs& args) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(args.config);
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.n_stat) cfg.n_stat = *args.n_stat;
    if (args.threads) cfg.threads = *args.threads;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalid;
  }

  const fs::path out(args.out);
  json manifest;
  try {
    ensure_dir(out);
    manifest = {{"config", fs::absolute(args.config).string()},
                {"output", fs::absolute(out).string()},
                {"version", FRACPCE_VERSION},
                {"seed", cfg.master_seed},
                {"kernels", kernels::to_string(kernels::active_isa())},
                {"started", utc_now()},
                {"status", "running"},
                {"resolved_config", to_json(cfg)}};
    write_json(out / "manifest.json", manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }

  int code = kOk;
  try {
    const ConvergenceResult result = run_convergence_study(cfg);
    {
      std::ofstream os(out / "results.csv");
      write_results_csv(os, result, !args.no_timing);
    }
    json agg = json::array();
    for (const auto& a : result.aggregates) agg.push_back(to_json(a));
    write_json(out / "aggregate.json", {{"model", to_string(cfg.model.kind)},
                                        {"n_stat", cfg.n_stat},
                                        {"aggregates", agg},
                                        {"total_model_evals", result.total_model_evals},
                                        {"reference_model_evals", result.reference_model_evals}});
    ensure_dir(out / "plots");
    for (const auto& p : result.profiles) {
      std::ofstream os(out / "plots" /
                       (std::string(to_string(p.method)) + "_n" + std::to_string(p.n_sim) + "_rep" +
                        std::to_string(p.repetition) + ".csv"));
      write_profile_csv(os, p.profile);
    }
    std::size_t failures = 0;
    for (const auto& r : result.rows)
      if (!r.error.empty()) {
        ++failures;
        std::cerr << "warning: " << r.error << '\n';
      }
    for (const auto& a : result.aggregates)
      std::cout << to_string(a.method) << " n_sim=" << a.n_sim << "  mean eps " << format_number(a.mean) << "  std "
                << format_number(a.std) << (a.failures ? "  failures " + std::to_string(a.failures) : "") << '\n';
    manifest["wall_seconds"] = result.wall_seconds;
    manifest["total_model_evals"] = result.total_model_evals;
    manifest["failed_rows"] = failures;
    manifest["status"] = "completed";
  } catch (const std::exception& e) {
    std::cerr << "study failed: " << e.what() << '\n';
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    code = kRuntime;
  }
  manifest["finished"] = utc_now();
  try {
    write_json(out / "manifest.json", manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return code;
}

struct PlateArgs {
  std::string out;
  double young = 2.1e11, thickness = 5e-3, poisson = 0.3;
  int elements = 10;
};

int cmd_plate_field(const PlateArgs& args) {
  try {
    PlateConfig pc;
    pc.elements = args.elements;
    const PlateModel plate(pc);
    const Eigen::VectorXd u = plate.solve(args.young, args.thickness, args.poisson);
    std::ofstream os(args.out);
    if (!os) throw std::runtime_error("cannot write " + args.out);
    plate.write_field_csv(os, u);
    std::cout << "max |w| = " << format_number(plate.qoi(args.young, args.thickness, args.poisson)) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial chaos surrogates, fractional moments and M-EIGD-LESND fitting"};
  app.set_version_flag("--version", std::string(FRACPCE_VERSION));
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a PCE to a sample file and an M-EIGD-LESND to its fractional moments");
  fit_cmd->add_option("--config", fit.config, "Config with input distributions and basis")->required();
  fit_cmd->add_option("--data", fit.data, "CSV of input columns followed by the response column")->required();
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();
  fit_cmd->add_option("--seed", fit.seed, "Override the config seed");

  StudyArgs study;
  auto* study_cmd = app.add_subcommand("study", "Run a convergence study");
  study_cmd->add_option("--config", study.config, "Experiment config")->required();
  study_cmd->add_option("--out", study.out, "Output directory")->required();
  study_cmd->add_option("--seed", study.seed, "Override the master seed");
  study_cmd->add_option("--n-stat", study.n_stat, "Override the number of repetitions")->check(CLI::PositiveNumber);
  study_cmd->add_option("--threads", study.threads, "Worker threads")->check(CLI::PositiveNumber);
  study_cmd->add_flag("--no-timing", study.no_timing, "Write wall_ms as 0 (byte-reproducible results)");

  PlateArgs plate;
  auto* plate_cmd = app.add_subcommand("plate-field", "Solve the plate once and dump the nodal field");
  plate_cmd->add_option("--out", plate.out, "CSV path")->required();
  plate_cmd->add_option("--young", plate.young, "Young's modulus [Pa]");
  plate_cmd->add_option("--thickness", plate.thickness, "Thickness [m]");
  plate_cmd->add_option("--poisson", plate.poisson, "Poisson ratio");
  plate_cmd->add_option("--elements", plate.elements, "Elements per side")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  if (*fit_cmd) return cmd_fit(fit);
  if (*study_cmd) return cmd_study(study);
  if (*plate_cmd) return cmd_plate_field(plate);
  return kInvalid;
}
