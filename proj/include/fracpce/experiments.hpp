#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracpce/fracmoments.hpp"
#include "fracpce/meigd.hpp"
#include "fracpce/metrics.hpp"
#include "fracpce/models.hpp"
#include "fracpce/pce.hpp"

namespace fracpce {

/// pce-holder: Hoelder estimates from the analytic PCE moments.
/// lhs: sample fractional moments of the true model responses.
/// pce-lhs: sample fractional moments of the surrogate on fresh LHS points.
enum class Method { pce_holder, lhs, pce_lhs };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct BasisConfig {
  int p = 1;
  double q = 1.0;
  /// Lower p until the basis is smaller than the design (keeps OLS and LOO defined).
  bool cap_to_design = true;
};

struct ReferenceSpec {
  ReferenceCdf::Kind kind = ReferenceCdf::Kind::empirical;
  double mean = 0.0;  // analytic-normal only
  double std = 1.0;
  std::size_t samples = 100'000;
};

struct ExperimentConfig {
  ModelSpec model;
  BasisConfig basis;
  std::vector<double> orders = default_orders();
  std::vector<std::size_t> n_sim = {20, 50, 100, 200};
  std::size_t n_stat = 20;
  std::vector<Method> methods = {Method::pce_holder, Method::lhs};
  ReferenceSpec reference;
  std::uint64_t master_seed = 20240101;
  FitConfig fit;
  FractionalOptions fractional;
  GridConfig grid;
  std::size_t threads = 1;
  /// Keep the per-case error profile of this many leading repetitions.
  std::size_t profiles_per_case = 1;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Default experiment for one of the three benchmark models.
ExperimentConfig default_experiment(ModelKind kind);

struct MethodOutcome {
  FitResult fit;
  double epsilon = 0.0;
  FractionalMomentSet moments;
  std::optional<PceModel> pce;
  std::size_t model_evals = 0;
  int degree_used = 0;
  std::size_t basis_size = 0;
  std::optional<ErrorProfile> profile;
};

/// Basis actually used for a design of n points.
MultiIndexSet basis_for_design(const BasisConfig& basis, std::size_t dim, std::size_t n);

/// Builds the scoring reference (analytic or empirical from the true model).
ReferenceCdf build_reference(const ExperimentConfig& cfg, const ForwardModel& model);

/// One end-to-end run. Throws on failure; the study wrapper turns failures
/// into epsilon = +inf rows.
MethodOutcome run_method_once(Method method, const ForwardModel& model, const ExperimentConfig& cfg,
                              const ReferenceCdf& reference, std::size_t n_sim, std::uint64_t seed,
                              bool keep_profile = false);

/// Seed for one (n_sim, repetition) cell; shared by every method so designs are paired.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t n_sim, std::size_t repetition);

struct RunRecord {
  Method method = Method::pce_holder;
  std::size_t n_sim = 0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double fit_residual = 0.0;
  bool converged = false;
  std::size_t model_evals = 0;
  double wall_ms = 0.0;
  int degree_used = 0;
  std::string error;
};

struct Aggregate {
  Method method = Method::pce_holder;
  std::size_t n_sim = 0;
  std::size_t count = 0;
  std::size_t failures = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

struct CaseProfile {
  Method method;
  std::size_t n_sim;
  std::size_t repetition;
  ErrorProfile profile;
};

struct ConvergenceResult {
  std::vector<RunRecord> rows;  // ordered by method, n_sim, repetition
  std::vector<Aggregate> aggregates;
  std::vector<CaseProfile> profiles;
  std::size_t total_model_evals = 0;
  std::size_t reference_model_evals = 0;
  double wall_seconds = 0.0;

  const Aggregate& aggregate(Method m, std::size_t n_sim) const;
};

ConvergenceResult run_convergence_study(const ExperimentConfig& cfg);

/// mean and sample std of a list (inf-aware: any inf makes both inf).
Aggregate aggregate_of(std::span<const double> eps);

}  // namespace fracpce
