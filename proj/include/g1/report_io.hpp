#pragma once
#include <json.hpp>

#include "g1/lll.hpp"
#include "g1/minimise.hpp"
#include "g1/reduce.hpp"

namespace g1 {

// JSON mirrors use exact strings for every rational.
nlohmann::json model_json(const GenusOneModel& m);
GenusOneModel model_from_json(const nlohmann::json& j);
nlohmann::json transformation_json(const Transformation& t);
Transformation transformation_from_json(const nlohmann::json& j);
nlohmann::json invariants_json(const InvariantTriple& inv);
nlohmann::json a_invariants_json(const AInvariants& a);
nlohmann::json level_report_json(const LevelReport& r);
nlohmann::json local_run_json(const LocalRun& r);
nlohmann::json global_run_json(const GlobalRun& r);
// Row-major float array with a "scale" field (the matrix is defined up to a
// positive scalar; scale records the normalising entry).
nlohmann::json gram_json(const GramMatrix& g);

} // namespace g1
