#include "fracpce/serialize.hpp"

#include <cmath>

namespace fracpce {

using nlohmann::json;

namespace {

// JSON has no inf/NaN; they are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

json to_json(const InputVariable& v) {
  return {{"kind", to_string(v.kind())}, {"mean", v.mean()}, {"std", v.std()}, {"lower", num(v.lower())}, {"upper", num(v.upper())}};
}

json to_json(const PceModel& m) {
  json families = json::array();
  for (Family f : m.germ.families) families.push_back(to_string(f));
  json indices = json::array();
  for (const auto& a : m.basis.indices) indices.push_back(a.alpha);
  std::vector<double> beta(m.beta.data(), m.beta.data() + m.beta.size());
  return {{"germ", families}, {"p", m.basis.p},   {"q", m.basis.q},   {"indices", indices},
          {"beta", beta},     {"r2", num(m.r2)},  {"q2", num(m.q2)}, {"n_train", m.n_train}};
}

PceModel pce_from_json(const json& j) {
  PceModel m;
  for (const auto& f : j.at("germ")) m.germ.families.push_back(family_from_string(f.get<std::string>()));
  m.basis.dim = m.germ.dimension();
  m.basis.p = j.at("p").get<int>();
  m.basis.q = j.at("q").get<double>();
  for (const auto& a : j.at("indices")) {
    MultiIndex mi;
    mi.alpha = a.get<std::vector<int>>();
    if (mi.alpha.size() != m.basis.dim) throw std::invalid_argument("pce_from_json: index dimension mismatch");
    m.basis.indices.push_back(std::move(mi));
  }
  const auto beta = j.at("beta").get<std::vector<double>>();
  if (beta.size() != m.basis.size()) throw std::invalid_argument("pce_from_json: coefficient count mismatch");
  m.beta = Eigen::Map<const Vector>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  m.r2 = num_from(j.at("r2"));
  m.q2 = num_from(j.at("q2"));
  m.n_train = j.at("n_train").get<std::size_t>();
  return m;
}

json to_json(const MomentSet& m) {
  return {{"mean", m.mean},
          {"variance", m.variance},
          {"skewness", num(m.skewness)},
          {"kurtosis", num(m.kurtosis)},
          {"raw", {m.raw[0], m.raw[1], m.raw[2], m.raw[3]}},
          {"sampled_higher", m.sampled_higher}};
}

json to_json(const FractionalMomentSet& f) {
  return {{"orders", f.orders},
          {"values", f.values},
          {"source", to_string(f.source)},
          {"positivity",
           {{"samples", f.positivity.samples},
            {"prob_nonpositive", f.positivity.prob_nonpositive},
            {"raw_used_as_absolute", f.positivity.raw_used_as_absolute}}}};
}

json to_json(const MeigdParams& p) {
  return {{"w", p.w}, {"eta", p.eta}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"theta", p.theta}, {"tau", p.tau}};
}

MeigdParams meigd_params_from_json(const json& j) {
  MeigdParams p;
  p.w = j.at("w").get<double>();
  p.eta = j.at("eta").get<double>();
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  p.c = j.at("c").get<double>();
  p.d = j.at("d").get<double>();
  p.theta = j.at("theta").get<double>();
  p.tau = j.at("tau").get<double>();
  p.validate();
  return p;
}

json to_json(const FitResult& r) {
  return {{"params", to_json(r.params)},
          {"residual", num(r.residual)},
          {"converged", r.converged},
          {"starts_used", r.starts_used},
          {"best_start", r.best_start},
          {"converged_starts", r.converged_starts},
          {"seed", r.seed}};
}

json to_json(const Aggregate& a) {
  return {{"method", to_string(a.method)}, {"n_sim", a.n_sim},     {"count", a.count},
          {"failures", a.failures},       {"mean_epsilon", num(a.mean)}, {"std_epsilon", num(a.std)}};
}

}  // namespace fracpce
