#include "fracpce/config.hpp"

#include <fstream>
#include <sstream>

namespace fracpce {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const char* key, const std::string& base, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(join(base, key), "expected a number");
  return v->get<double>();
}

double required_number(const json& obj, const char* key, const std::string& base) {
  if (!find(obj, key)) throw ConfigError(join(base, key), "required field is missing");
  return number(obj, key, base, 0.0);
}

std::size_t count(const json& obj, const char* key, const std::string& base, std::size_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0)
    throw ConfigError(join(base, key), "expected a non-negative integer");
  return v->get<std::size_t>();
}

std::string text(const json& obj, const char* key, const std::string& base, const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(base, key), "expected a string");
  return v->get<std::string>();
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

InputVariable parse_input(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string kind = text(j, "kind", path, "");
  if (kind.empty()) throw ConfigError(join(path, "kind"), "required field is missing");
  try {
    switch (variable_kind_from_string(kind)) {
      case VariableKind::uniform:
        return InputVariable::uniform(required_number(j, "lower", path), required_number(j, "upper", path));
      case VariableKind::normal:
      case VariableKind::truncated_normal: {
        const double mean = required_number(j, "mean", path);
        double std = 0.0;
        if (find(j, "std"))
          std = number(j, "std", path, 0.0);
        else if (find(j, "cov"))
          std = number(j, "cov", path, 0.0) * std::abs(mean);
        else
          throw ConfigError(join(path, "std"), "give either std or cov");
        if (kind == "normal") return InputVariable::normal(mean, std);
        if (!find(j, "lower") && !find(j, "upper")) return InputVariable::truncated_normal_default(mean, std);
        return InputVariable::truncated_normal(mean, std, required_number(j, "lower", path),
                                               number(j, "upper", path, InputVariable::kInf));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"), "unsupported kind");
}

void parse_plate(const json& j, const std::string& path, PlateConfig& p) {
  require_object(j, path);
  p.side = number(j, "side", path, p.side);
  p.elements = static_cast<int>(count(j, "elements", path, static_cast<std::size_t>(p.elements)));
  p.pressure = number(j, "pressure", path, p.pressure);
  const std::string qoi = text(j, "qoi", path, "max-abs-deflection");
  if (qoi == "max-abs-deflection")
    p.qoi = PlateQoi::max_abs_deflection;
  else if (qoi == "free-edge-midpoint")
    p.qoi = PlateQoi::free_edge_midpoint;
  else
    throw ConfigError(join(path, "qoi"), "unknown quantity '" + qoi + "'");
  if (p.elements < 1) throw ConfigError(join(path, "elements"), "must be >= 1");
  if (!(p.side > 0.0)) throw ConfigError(join(path, "side"), "must be > 0");
}

void parse_car(const json& j, const std::string& path, QuarterCarConfig& c, const InputVector& inputs) {
  require_object(j, path);
  c.m_s = number(j, "m_s", path, c.m_s);
  c.m_us = number(j, "m_us", path, c.m_us);
  c.c_t = number(j, "c_t", path, c.c_t);
  c.bump_length = number(j, "bump_length", path, c.bump_length);
  c.speed = number(j, "speed", path, c.speed);
  c.duration = number(j, "duration", path, c.duration);
  c.dt = number(j, "dt", path, c.dt);
  c.x_c = number(j, "x_c", path, c.x_c);
  const std::string integ = text(j, "integrator", path, "exact");
  if (integ == "exact")
    c.integrator = CarIntegrator::exact;
  else if (integ == "rk4")
    c.integrator = CarIntegrator::rk4;
  else
    throw ConfigError(join(path, "integrator"), "expected 'exact' or 'rk4'");
  if (!(c.m_s > 0.0 && c.m_us > 0.0)) throw ConfigError(join(path, "m_s"), "masses must be > 0");
  if (!(c.dt > 0.0 && c.duration > c.dt)) throw ConfigError(join(path, "dt"), "need 0 < dt < duration");
  if (!(c.x_c > 0.0)) throw ConfigError(join(path, "x_c"), "must be > 0");
  if (!(c.speed > 0.0 && c.bump_length > 0.0)) throw ConfigError(join(path, "speed"), "speed and bump_length must be > 0");

  // "auto" scales the bump so the stroke at the input means is bump_ratio * x_c.
  const json* h = find(j, "bump_height");
  if (h && h->is_string()) {
    if (h->get<std::string>() != "auto") throw ConfigError(join(path, "bump_height"), "expected a number or \"auto\"");
    if (inputs.size() != 3) throw ConfigError(join(path, "bump_height"), "\"auto\" needs the three car inputs");
    const double ratio = number(j, "bump_ratio", path, 0.6);
    c.bump_height = calibrate_bump_height(c, inputs[0].mean(), inputs[1].mean(), inputs[2].mean(), ratio);
  } else {
    c.bump_height = number(j, "bump_height", path, c.bump_height);
  }
}

Method parse_method(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a method name");
  try {
    return method_from_string(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j, bool require_model) {
  require_object(j, "");
  const json* ver = find(j, "schema_version");
  if (!ver) throw ConfigError("schema_version", "required field is missing");
  if (!ver->is_number_integer() || ver->get<int>() != kConfigSchemaVersion)
    throw ConfigError("schema_version", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");

  ExperimentConfig cfg;
  const json* model = find(j, "model");
  if (model) {
    require_object(*model, "model");
    const std::string name = text(*model, "name", "model", "");
    if (name.empty()) throw ConfigError("model.name", "required field is missing");
    try {
      cfg = default_experiment(model_kind_from_string(name));
    } catch (const std::exception& e) {
      throw ConfigError("model.name", e.what());
    }
  } else if (require_model) {
    throw ConfigError("model", "required field is missing");
  } else {
    cfg.model.inputs.clear();
    cfg.reference.kind = ReferenceCdf::Kind::empirical;
  }

  if (const json* in = find(j, "inputs")) {
    if (!in->is_array() || in->empty()) throw ConfigError("inputs", "expected a non-empty array");
    cfg.model.inputs.clear();
    for (std::size_t i = 0; i < in->size(); ++i)
      cfg.model.inputs.push_back(parse_input((*in)[i], "inputs[" + std::to_string(i) + "]"));
  }
  if (cfg.model.inputs.empty()) throw ConfigError("inputs", "required when no model is named");
  if (model && cfg.model.kind != ModelKind::gaussian_sum && cfg.model.inputs.size() != 3)
    throw ConfigError("inputs", "this model takes exactly three inputs");

  if (model) {
    if (const json* p = find(*model, "plate")) parse_plate(*p, "model.plate", cfg.model.plate);
    if (const json* c = find(*model, "car")) parse_car(*c, "model.car", cfg.model.car, cfg.model.inputs);
  }

  if (const json* b = find(j, "basis")) {
    require_object(*b, "basis");
    cfg.basis.p = static_cast<int>(count(*b, "p", "basis", static_cast<std::size_t>(cfg.basis.p)));
    cfg.basis.q = number(*b, "q", "basis", cfg.basis.q);
    if (const json* cap = find(*b, "cap_to_design")) {
      if (!cap->is_boolean()) throw ConfigError("basis.cap_to_design", "expected true or false");
      cfg.basis.cap_to_design = cap->get<bool>();
    }
  }

  if (const json* o = find(j, "orders")) {
    if (!o->is_array()) throw ConfigError("orders", "expected an array of numbers");
    cfg.orders.clear();
    for (std::size_t i = 0; i < o->size(); ++i) {
      if (!(*o)[i].is_number()) throw ConfigError("orders[" + std::to_string(i) + "]", "expected a number");
      cfg.orders.push_back((*o)[i].get<double>());
    }
    try {
      validate_orders(cfg.orders);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("orders", e.what());
    }
  }
  if (const json* n = find(j, "n_sim")) {
    if (!n->is_array()) throw ConfigError("n_sim", "expected an array of integers");
    cfg.n_sim.clear();
    for (std::size_t i = 0; i < n->size(); ++i) {
      if (!(*n)[i].is_number_integer() || (*n)[i].get<long long>() < 0)
        throw ConfigError("n_sim[" + std::to_string(i) + "]", "expected a non-negative integer");
      cfg.n_sim.push_back((*n)[i].get<std::size_t>());
    }
  }
  cfg.n_stat = count(j, "n_stat", "", cfg.n_stat);
  if (const json* m = find(j, "methods")) {
    if (!m->is_array()) throw ConfigError("methods", "expected an array of method names");
    cfg.methods.clear();
    for (std::size_t i = 0; i < m->size(); ++i)
      cfg.methods.push_back(parse_method((*m)[i], "methods[" + std::to_string(i) + "]"));
  }
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_integer()) throw ConfigError("seed", "expected an integer");
    cfg.master_seed = s->get<std::uint64_t>();
  }
  cfg.threads = count(j, "threads", "", cfg.threads);

  if (const json* r = find(j, "reference")) {
    require_object(*r, "reference");
    const std::string kind = text(*r, "kind", "reference", "");
    if (kind == "analytic-normal") {
      cfg.reference.kind = ReferenceCdf::Kind::analytic_normal;
      cfg.reference.mean = required_number(*r, "mean", "reference");
      cfg.reference.std = required_number(*r, "std", "reference");
    } else if (kind == "empirical") {
      cfg.reference.kind = ReferenceCdf::Kind::empirical;
      cfg.reference.samples = count(*r, "samples", "reference", cfg.reference.samples);
    } else if (!kind.empty()) {
      throw ConfigError("reference.kind", "expected 'analytic-normal' or 'empirical'");
    }
  }

  if (const json* f = find(j, "fit")) {
    require_object(*f, "fit");
    cfg.fit.starts = count(*f, "starts", "fit", cfg.fit.starts);
    cfg.fit.tolerance = number(*f, "tolerance", "fit", cfg.fit.tolerance);
    cfg.fit.max_iterations = count(*f, "max_iterations", "fit", cfg.fit.max_iterations);
    cfg.fit.eta_min = number(*f, "eta_min", "fit", cfg.fit.eta_min);
    cfg.fit.eta_max = number(*f, "eta_max", "fit", cfg.fit.eta_max);
    cfg.fit.stop_after_converged = count(*f, "stop_after_converged", "fit", cfg.fit.stop_after_converged);
    if (!(cfg.fit.eta_min > 0.0 && cfg.fit.eta_max > cfg.fit.eta_min))
      throw ConfigError("fit.eta_max", "need 0 < eta_min < eta_max");
    if (!(cfg.fit.tolerance > 0.0)) throw ConfigError("fit.tolerance", "must be > 0");
  }
  if (const json* g = find(j, "grid")) {
    require_object(*g, "grid");
    cfg.grid.points = count(*g, "points", "grid", cfg.grid.points);
    cfg.grid.tail_prob = number(*g, "tail_prob", "grid", cfg.grid.tail_prob);
    cfg.grid.extension = number(*g, "extension", "grid", cfg.grid.extension);
    if (!(cfg.grid.tail_prob > 0.0 && cfg.grid.tail_prob < 0.5)) throw ConfigError("grid.tail_prob", "must lie in (0, 0.5)");
    if (cfg.grid.extension < 0.0) throw ConfigError("grid.extension", "must be >= 0");
  }
  if (const json* fr = find(j, "fractional")) {
    require_object(*fr, "fractional");
    cfg.fractional.positivity_samples = count(*fr, "positivity_samples", "fractional", cfg.fractional.positivity_samples);
    cfg.fractional.max_nonpositive_prob = number(*fr, "max_nonpositive_prob", "fractional", cfg.fractional.max_nonpositive_prob);
    cfg.fractional.fallback_samples = count(*fr, "fallback_samples", "fractional", cfg.fractional.fallback_samples);
    cfg.fractional.moments.exhaustive_cap = count(*fr, "exhaustive_cap", "fractional", cfg.fractional.moments.exhaustive_cap);
  }
  cfg.profiles_per_case = count(j, "profiles_per_case", "", cfg.profiles_per_case);

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    if (colon == std::string::npos) throw ConfigError("<root>", msg);
    throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2 < msg.size() ? colon + 2 : msg.size()));
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, bool require_model) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_experiment_config(j, require_model);
}

json to_json(const ExperimentConfig& cfg) {
  json inputs = json::array();
  for (const auto& v : cfg.model.inputs) {
    json e = {{"kind", to_string(v.kind())}};
    if (v.kind() == VariableKind::uniform) {
      e["lower"] = v.lower();
      e["upper"] = v.upper();
    } else {
      e["mean"] = v.mean();
      e["std"] = v.std();
      if (v.kind() == VariableKind::truncated_normal) {
        e["lower"] = v.lower();
        if (std::isfinite(v.upper())) e["upper"] = v.upper();
      }
    }
    inputs.push_back(e);
  }
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  json model = {{"name", to_string(cfg.model.kind)}};
  if (cfg.model.kind == ModelKind::plate_fe)
    model["plate"] = {{"side", cfg.model.plate.side},
                      {"elements", cfg.model.plate.elements},
                      {"pressure", cfg.model.plate.pressure},
                      {"qoi", cfg.model.plate.qoi == PlateQoi::max_abs_deflection ? "max-abs-deflection" : "free-edge-midpoint"}};
  if (cfg.model.kind == ModelKind::quarter_car) {
    const auto& c = cfg.model.car;
    model["car"] = {{"m_s", c.m_s},
                    {"m_us", c.m_us},
                    {"c_t", c.c_t},
                    {"bump_height", c.bump_height},
                    {"bump_length", c.bump_length},
                    {"speed", c.speed},
                    {"duration", c.duration},
                    {"dt", c.dt},
                    {"x_c", c.x_c},
                    {"integrator", c.integrator == CarIntegrator::exact ? "exact" : "rk4"}};
  }
  json reference = cfg.reference.kind == ReferenceCdf::Kind::analytic_normal
                       ? json{{"kind", "analytic-normal"}, {"mean", cfg.reference.mean}, {"std", cfg.reference.std}}
                       : json{{"kind", "empirical"}, {"samples", cfg.reference.samples}};
  return {{"schema_version", kConfigSchemaVersion},
          {"model", model},
          {"inputs", inputs},
          {"basis", {{"p", cfg.basis.p}, {"q", cfg.basis.q}, {"cap_to_design", cfg.basis.cap_to_design}}},
          {"orders", cfg.orders},
          {"n_sim", cfg.n_sim},
          {"n_stat", cfg.n_stat},
          {"methods", methods},
          {"seed", cfg.master_seed},
          {"threads", cfg.threads},
          {"reference", reference},
          {"fit",
           {{"starts", cfg.fit.starts},
            {"tolerance", cfg.fit.tolerance},
            {"max_iterations", cfg.fit.max_iterations},
            {"eta_min", cfg.fit.eta_min},
            {"eta_max", cfg.fit.eta_max},
            {"stop_after_converged", cfg.fit.stop_after_converged}}},
          {"grid", {{"points", cfg.grid.points}, {"tail_prob", cfg.grid.tail_prob}, {"extension", cfg.grid.extension}}},
          {"fractional",
           {{"positivity_samples", cfg.fractional.positivity_samples},
            {"max_nonpositive_prob", cfg.fractional.max_nonpositive_prob},
            {"fallback_samples", cfg.fractional.fallback_samples},
            {"exhaustive_cap", cfg.fractional.moments.exhaustive_cap}}},
          {"profiles_per_case", cfg.profiles_per_case}};
}

}  // namespace fracpce
