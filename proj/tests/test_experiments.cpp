#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "fracpce/experiments.hpp"

using namespace fracpce;

namespace {

ExperimentConfig small_study() {
  ExperimentConfig cfg = default_experiment(ModelKind::gaussian_sum);
  cfg.n_sim = {20, 40};
  cfg.n_stat = 2;
  cfg.methods = {Method::pce_holder, Method::lhs, Method::pce_lhs};
  cfg.fit.starts = 6;
  cfg.fit.stop_after_converged = 2;
  cfg.master_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("basis is capped below the design size") {
  BasisConfig b;
  b.p = 3;
  CHECK(basis_for_design(b, 3, 100).size() == 20);
  CHECK(basis_for_design(b, 3, 20).p == 2);  // 20 terms would leave no residual degree of freedom
  CHECK(basis_for_design(b, 3, 10).size() < 10);
  CHECK(basis_for_design(b, 3, 2).size() == 1);
  b.cap_to_design = false;
  CHECK(basis_for_design(b, 3, 5).size() == 20);
}

TEST_CASE("repetition seeds pair the methods and separate the cells") {
  std::set<std::uint64_t> seen;
  for (std::size_t n : {20u, 50u, 100u})
    for (std::size_t r = 0; r < 20; ++r) seen.insert(repetition_seed(7, n, r));
  CHECK(seen.size() == 60);
  CHECK(repetition_seed(7, 20, 3) == repetition_seed(7, 20, 3));
  CHECK(repetition_seed(7, 20, 3) != repetition_seed(8, 20, 3));
}

TEST_CASE("methods share the design of a cell") {
  const auto cfg = small_study();
  const auto model = make_model(cfg.model);
  const auto ref = build_reference(cfg, *model);
  const auto seed = repetition_seed(cfg.master_seed, 20, 0);
  const auto holder = run_method_once(Method::pce_holder, *model, cfg, ref, 20, seed);
  const auto surrogate = run_method_once(Method::pce_lhs, *model, cfg, ref, 20, seed);
  REQUIRE(holder.pce);
  REQUIRE(surrogate.pce);
  CHECK(holder.pce->beta == surrogate.pce->beta);
  CHECK(holder.model_evals == 20);
  CHECK(holder.degree_used == 1);
  CHECK(holder.basis_size == 4);
  // the linear model is recovered exactly, so the PCE moments are those of N(50, 12)
  CHECK(holder.pce->beta(0) == doctest::Approx(50.0).epsilon(1e-10));
  CHECK(std::isfinite(holder.epsilon));
  CHECK(holder.epsilon >= 0.0);
}

TEST_CASE("small study is deterministic and complete") {
  const auto cfg = small_study();
  const auto a = run_convergence_study(cfg);
  const auto b = run_convergence_study(cfg);
  REQUIRE(a.rows.size() == 12);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].epsilon == b.rows[k].epsilon);
    CHECK(a.rows[k].seed == b.rows[k].seed);
    CHECK(a.rows[k].fit_residual == b.rows[k].fit_residual);
    CHECK(a.rows[k].error.empty());
  }
  // ordered by method, then n_sim, then repetition
  CHECK(a.rows[0].method == Method::pce_holder);
  CHECK(a.rows[2].n_sim == 40);
  CHECK(a.rows[3].repetition == 1);
  CHECK(a.rows[4].method == Method::lhs);
  CHECK(a.aggregates.size() == 6);
  CHECK(a.total_model_evals == 3 * 2 * (20 + 40));
  CHECK(a.reference_model_evals == 0);  // analytic reference
  CHECK(a.profiles.size() == 6);
  const auto& agg = a.aggregate(Method::lhs, 40);
  CHECK(agg.count == 2);
  CHECK(agg.mean == doctest::Approx(0.5 * (a.rows[6].epsilon + a.rows[7].epsilon)));
  CHECK_THROWS_AS(a.aggregate(Method::lhs, 30), std::out_of_range);
}

TEST_CASE("failed runs become infinite rows, not aborts") {
  auto cfg = small_study();
  cfg.methods = {Method::pce_holder};
  cfg.basis.p = 3;
  cfg.basis.cap_to_design = false;
  cfg.n_sim = {10};
  cfg.n_stat = 2;
  const auto r = run_convergence_study(cfg);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(std::isinf(row.epsilon));
    CHECK(!row.converged);
    CHECK(!row.error.empty());
  }
  CHECK(r.aggregates[0].failures == 2);
  CHECK(std::isinf(r.aggregates[0].mean));
}

TEST_CASE("aggregates") {
  const std::vector<double> e = {1.0, 2.0, 4.0};
  const auto a = aggregate_of(e);
  CHECK(a.count == 3);
  CHECK(a.failures == 0);
  CHECK(a.mean == doctest::Approx(7.0 / 3.0));
  CHECK(a.std == doctest::Approx(std::sqrt(((1 - 7.0 / 3) * (1 - 7.0 / 3) + (2 - 7.0 / 3) * (2 - 7.0 / 3) +
                                            (4 - 7.0 / 3) * (4 - 7.0 / 3)) /
                                           2.0)));
  const std::vector<double> one = {3.0};
  CHECK(aggregate_of(one).std == 0.0);
  const std::vector<double> bad = {1.0, std::numeric_limits<double>::infinity()};
  const auto b = aggregate_of(bad);
  CHECK(b.failures == 1);
  CHECK(std::isinf(b.mean));
  CHECK(std::isinf(b.std));
}

TEST_CASE("config validation and method names") {
  auto cfg = small_study();
  CHECK_NOTHROW(cfg.validate());
  cfg.n_sim = {50, 20};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_study();
  cfg.basis.q = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  for (Method m : {Method::pce_holder, Method::lhs, Method::pce_lhs}) CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS(method_from_string("mc"));
  CHECK(default_experiment(ModelKind::plate_fe).reference.kind == ReferenceCdf::Kind::empirical);
}
