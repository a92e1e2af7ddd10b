#include <stdexcept>
#include <string>

#include "fracpce/models.hpp"

namespace fracpce {

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::gaussian_sum: return "gaussian-sum";
    case ModelKind::plate_fe: return "plate-fe";
    case ModelKind::quarter_car: return "quarter-car";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "gaussian-sum") return ModelKind::gaussian_sum;
  if (name == "plate-fe") return ModelKind::plate_fe;
  if (name == "quarter-car") return ModelKind::quarter_car;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

ModelSpec default_model_spec(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ModelKind::gaussian_sum:
      spec.inputs.assign(3, InputVariable::normal(10.0, 2.0));
      break;
    case ModelKind::plate_fe:
      spec.inputs = {InputVariable::truncated_normal_default(2.1e11, 0.15 * 2.1e11),
                     InputVariable::truncated_normal_default(5e-3, 0.1 * 5e-3),
                     InputVariable::truncated_normal_default(0.3, 0.1 * 0.3)};
      break;
    case ModelKind::quarter_car:
      spec.inputs = {InputVariable::truncated_normal_default(1e4, 1e3),
                     InputVariable::truncated_normal_default(4.8e4, 4.8e3),
                     InputVariable::truncated_normal_default(2e5, 2e4)};
      break;
  }
  return spec;
}

namespace {

class GaussianSumModel final : public ForwardModel {
 public:
  double evaluate(std::span<const double> x) const override { return gaussian_sum(x); }
  std::size_t dimension() const override { return 3; }
  ModelKind kind() const override { return ModelKind::gaussian_sum; }
};

class PlateFeModel final : public ForwardModel {
 public:
  explicit PlateFeModel(const PlateConfig& cfg) : plate_(cfg) {}
  double evaluate(std::span<const double> x) const override {
    if (x.size() != 3) throw std::invalid_argument("plate-fe: expects (E, t, nu)");
    return plate_.qoi(x[0], x[1], x[2]);
  }
  std::size_t dimension() const override { return 3; }
  ModelKind kind() const override { return ModelKind::plate_fe; }

 private:
  PlateModel plate_;
};

class QuarterCarForward final : public ForwardModel {
 public:
  explicit QuarterCarForward(const QuarterCarConfig& cfg) : car_(cfg) {}
  double evaluate(std::span<const double> x) const override {
    if (x.size() != 3) throw std::invalid_argument("quarter-car: expects (c_s, k_s, k_t)");
    return car_.limit_state(x[0], x[1], x[2]);
  }
  std::size_t dimension() const override { return 3; }
  ModelKind kind() const override { return ModelKind::quarter_car; }

 private:
  QuarterCarModel car_;
};

}  // namespace

std::unique_ptr<ForwardModel> make_model(const ModelSpec& spec) {
  if (spec.inputs.size() != 3)
    throw std::invalid_argument("model '" + std::string(to_string(spec.kind)) + "' expects 3 inputs, got " +
                                std::to_string(spec.inputs.size()));
  switch (spec.kind) {
    case ModelKind::gaussian_sum: return std::make_unique<GaussianSumModel>();
    case ModelKind::plate_fe: return std::make_unique<PlateFeModel>(spec.plate);
    case ModelKind::quarter_car: return std::make_unique<QuarterCarForward>(spec.car);
  }
  throw std::invalid_argument("unknown model kind");
}

}  // namespace fracpce
