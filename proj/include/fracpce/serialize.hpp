#pragma once

#include "fracpce/experiments.hpp"
#include "json.hpp"

namespace fracpce {

nlohmann::json to_json(const InputVariable& v);
nlohmann::json to_json(const PceModel& m);
nlohmann::json to_json(const MomentSet& m);
nlohmann::json to_json(const FractionalMomentSet& f);
nlohmann::json to_json(const MeigdParams& p);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const Aggregate& a);

PceModel pce_from_json(const nlohmann::json& j);
MeigdParams meigd_params_from_json(const nlohmann::json& j);

}  // namespace fracpce
