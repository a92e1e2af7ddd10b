#include "fracpce/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fracpce/rng.hpp"
#include "fracpce/sampling.hpp"

namespace fracpce {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::pce_holder: return "pce-holder";
    case Method::lhs: return "lhs";
    case Method::pce_lhs: return "pce-lhs";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  if (name == "pce-holder") return Method::pce_holder;
  if (name == "lhs") return Method::lhs;
  if (name == "pce-lhs") return Method::pce_lhs;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (model.inputs.empty()) throw std::invalid_argument("model.inputs: at least one input is required");
  if (basis.p < 0) throw std::invalid_argument("basis.p: must be >= 0");
  if (!(basis.q > 0.0 && basis.q <= 1.0)) throw std::invalid_argument("basis.q: must lie in (0, 1]");
  validate_orders(orders);
  if (n_sim.empty()) throw std::invalid_argument("n_sim: grid is empty");
  for (std::size_t i = 0; i < n_sim.size(); ++i) {
    if (n_sim[i] < 2) throw std::invalid_argument("n_sim: every entry must be >= 2");
    if (i > 0 && n_sim[i] <= n_sim[i - 1]) throw std::invalid_argument("n_sim: grid must be strictly increasing");
  }
  if (n_stat < 1) throw std::invalid_argument("n_stat: must be >= 1");
  if (methods.empty()) throw std::invalid_argument("methods: at least one method is required");
  if (reference.kind == ReferenceCdf::Kind::analytic_normal && !(reference.std > 0.0))
    throw std::invalid_argument("reference.std: must be > 0");
  if (reference.kind == ReferenceCdf::Kind::empirical && reference.samples < 1000)
    throw std::invalid_argument("reference.samples: must be >= 1000");
  if (fit.starts < 1) throw std::invalid_argument("fit.starts: must be >= 1");
  if (grid.points < 2) throw std::invalid_argument("grid.points: must be >= 2");
}

ExperimentConfig default_experiment(ModelKind kind) {
  ExperimentConfig cfg;
  cfg.model = default_model_spec(kind);
  switch (kind) {
    case ModelKind::gaussian_sum:
      cfg.basis = {1, 1.0, true};
      cfg.reference.kind = ReferenceCdf::Kind::analytic_normal;
      cfg.reference.mean = 50.0;
      cfg.reference.std = std::sqrt(12.0);
      break;
    case ModelKind::plate_fe:
      cfg.basis = {3, 1.0, true};
      break;
    case ModelKind::quarter_car:
      cfg.basis = {5, 0.75, true};
      break;
  }
  return cfg;
}

MultiIndexSet basis_for_design(const BasisConfig& basis, std::size_t dim, std::size_t n) {
  MultiIndexSet set = hyperbolic_set(dim, basis.p, basis.q);
  if (!basis.cap_to_design) return set;
  for (int p = basis.p; set.size() >= n && p > 0;) set = hyperbolic_set(dim, --p, basis.q);
  return set;
}

ReferenceCdf build_reference(const ExperimentConfig& cfg, const ForwardModel& model) {
  if (cfg.reference.kind == ReferenceCdf::Kind::analytic_normal)
    return ReferenceCdf::normal(cfg.reference.mean, cfg.reference.std);

  const GermSpec germ = natural_germ(cfg.model.inputs);
  const std::uint64_t seed = derive_seed(cfg.master_seed, {hash_tag("reference")});
  const ExperimentalDesign ed = sample_inputs(cfg.model.inputs, germ, cfg.reference.samples, seed);
  std::vector<double> y(ed.size());

  const std::size_t threads = std::max<std::size_t>(1, cfg.threads);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  constexpr std::size_t chunk = 256;
  auto worker = [&] {
    std::vector<double> row(ed.dimension());
    for (;;) {
      const std::size_t start = next.fetch_add(chunk);
      if (start >= y.size()) return;
      try {
        for (std::size_t i = start; i < std::min(y.size(), start + chunk); ++i) {
          for (std::size_t j = 0; j < row.size(); ++j) row[j] = ed.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          y[i] = model.evaluate(row);
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  try {
    return ReferenceCdf::empirical(std::move(y));
  } catch (const std::domain_error&) {
    throw std::domain_error("reference requires a nondegenerate CDF: the model response has zero spread");
  }
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t n_sim, std::size_t repetition) {
  return derive_seed(master, {static_cast<std::uint64_t>(n_sim), static_cast<std::uint64_t>(repetition)});
}

namespace {

void evaluate_design(const ForwardModel& model, ExperimentalDesign& ed) {
  ed.y.resize(ed.x.rows());
  std::vector<double> row(ed.dimension());
  for (Eigen::Index i = 0; i < ed.x.rows(); ++i) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = ed.x(i, static_cast<Eigen::Index>(j));
    ed.y(i) = model.evaluate(row);
  }
}

}  // namespace

MethodOutcome run_method_once(Method method, const ForwardModel& model, const ExperimentConfig& cfg,
                              const ReferenceCdf& reference, std::size_t n_sim, std::uint64_t seed, bool keep_profile) {
  MethodOutcome out;
  const GermSpec germ = natural_germ(cfg.model.inputs);
  const std::uint64_t mtag = hash_tag(to_string(method));

  // The design depends on the cell seed only, so all methods share it.
  ExperimentalDesign ed = sample_inputs(cfg.model.inputs, germ, n_sim, derive_seed(seed, {hash_tag("design")}));
  evaluate_design(model, ed);
  out.model_evals = n_sim;

  if (method == Method::lhs) {
    std::vector<double> y(ed.y.data(), ed.y.data() + ed.y.size());
    out.moments = fractional_moments_from_samples(y, cfg.orders);
  } else {
    const MultiIndexSet basis = basis_for_design(cfg.basis, germ.dimension(), n_sim);
    out.degree_used = basis.p;
    out.basis_size = basis.size();
    PceModel pce = fit_ols(ed, basis, germ);
    if (method == Method::pce_holder) {
      FractionalOptions fo = cfg.fractional;
      fo.seed = derive_seed(seed, {mtag, hash_tag("positivity")});
      fo.moments.seed = derive_seed(seed, {mtag, hash_tag("moments")});
      out.moments = fractional_moments_from_pce(pce, cfg.orders, fo);
    } else {
      const Matrix xi = sample_germ(germ, n_sim, derive_seed(seed, {mtag, hash_tag("surrogate")}));
      const Vector ys = eval_pce(pce, xi);
      std::vector<double> y(ys.data(), ys.data() + ys.size());
      out.moments = fractional_moments_from_samples(y, cfg.orders);
    }
    out.pce = std::move(pce);
  }

  FitConfig fc = cfg.fit;
  fc.seed = derive_seed(seed, {mtag, hash_tag("fit")});
  out.fit = fit_meigd(out.moments, fc);

  const MeigdCdf cdf(out.fit.params);
  ErrorProfile profile = error_profile(reference, [&](double x) { return cdf(x); }, cfg.grid);
  out.epsilon = std::isfinite(profile.epsilon) ? std::max(0.0, profile.epsilon) : std::numeric_limits<double>::infinity();
  if (keep_profile) out.profile = std::move(profile);
  return out;
}

Aggregate aggregate_of(std::span<const double> eps) {
  Aggregate a;
  a.count = eps.size();
  if (eps.empty()) return a;
  double sum = 0.0;
  for (double e : eps) {
    if (!std::isfinite(e)) ++a.failures;
    sum += e;
  }
  a.mean = sum / static_cast<double>(eps.size());
  if (a.failures > 0) {
    a.std = std::numeric_limits<double>::infinity();
    return a;
  }
  double ss = 0.0;
  for (double e : eps) ss += (e - a.mean) * (e - a.mean);
  a.std = eps.size() > 1 ? std::sqrt(ss / static_cast<double>(eps.size() - 1)) : 0.0;
  return a;
}

const Aggregate& ConvergenceResult::aggregate(Method m, std::size_t n_sim) const {
  for (const auto& a : aggregates)
    if (a.method == m && a.n_sim == n_sim) return a;
  throw std::out_of_range("no aggregate for " + std::string(to_string(m)) + " at n_sim=" + std::to_string(n_sim));
}

ConvergenceResult run_convergence_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = make_model(cfg.model);
  ConvergenceResult result;

  const ReferenceCdf reference = build_reference(cfg, *model);
  if (reference.kind() == ReferenceCdf::Kind::empirical) result.reference_model_evals = cfg.reference.samples;

  struct Job {
    Method method;
    std::size_t n_sim, rep;
  };
  std::vector<Job> jobs;
  for (Method m : cfg.methods)
    for (std::size_t n : cfg.n_sim)
      for (std::size_t r = 0; r < cfg.n_stat; ++r) jobs.push_back({m, n, r});

  result.rows.resize(jobs.size());
  std::vector<std::optional<ErrorProfile>> profiles(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      RunRecord& row = result.rows[k];
      row.method = job.method;
      row.n_sim = job.n_sim;
      row.repetition = job.rep;
      row.seed = repetition_seed(cfg.master_seed, job.n_sim, job.rep);
      const auto start = std::chrono::steady_clock::now();
      try {
        MethodOutcome o = run_method_once(job.method, *model, cfg, reference, job.n_sim, row.seed,
                                          job.rep < cfg.profiles_per_case);
        row.epsilon = o.epsilon;
        row.fit_residual = o.fit.residual;
        row.converged = o.fit.converged && std::isfinite(o.epsilon);
        row.model_evals = o.model_evals;
        row.degree_used = o.degree_used;
        profiles[k] = std::move(o.profile);
      } catch (const FitError& e) {
        row.epsilon = std::numeric_limits<double>::infinity();
        row.fit_residual = e.best_seen().residual;
        row.converged = false;
        row.model_evals = job.n_sim;
        row.error = e.what();
      } catch (const std::exception& e) {
        row.epsilon = std::numeric_limits<double>::infinity();
        row.fit_residual = std::numeric_limits<double>::infinity();
        row.converged = false;
        row.model_evals = job.n_sim;
        row.error = std::string(to_string(job.method)) + " n_sim=" + std::to_string(job.n_sim) +
                    " seed=" + std::to_string(row.seed) + ": " + e.what();
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    result.total_model_evals += result.rows[k].model_evals;
    if (profiles[k]) result.profiles.push_back({jobs[k].method, jobs[k].n_sim, jobs[k].rep, std::move(*profiles[k])});
  }
  for (Method m : cfg.methods)
    for (std::size_t n : cfg.n_sim) {
      std::vector<double> eps;
      for (const auto& row : result.rows)
        if (row.method == m && row.n_sim == n) eps.push_back(row.epsilon);
      Aggregate a = aggregate_of(eps);
      a.method = m;
      a.n_sim = n;
      result.aggregates.push_back(a);
    }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace fracpce
