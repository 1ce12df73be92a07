#pragma once

#include <string>

#include <json.hpp>

#include "cpapprox/bounds.hpp"
#include "cpapprox/metrics.hpp"
#include "cpapprox/pmf.hpp"
#include "cpapprox/runs.hpp"
#include "cpapprox/verify.hpp"

namespace cpx {

// Serialize with doubles printed at 17 significant digits so every value
// round-trips bit-exactly. indent < 0 gives compact output.
std::string dump_json(const nlohmann::json& j, int indent = -1);

nlohmann::json to_json(const IntPmf& pmf);
IntPmf pmf_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MetricValue& m);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const SuiteResult& r);
nlohmann::json to_json(const Table1Row& row);

nlohmann::json to_json(const BernoulliProfile& p);
BernoulliProfile bernoulli_profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IndepProfile& p);
IndepProfile indep_profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LocalDepProfile& p);
LocalDepProfile local_dep_profile_from_json(const nlohmann::json& j);

KdepGeneralInputs kdep_general_inputs_from_json(const nlohmann::json& j);

// Machine-readable command report: command name, echoed inputs, structured
// results, warnings.
struct Report {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::string> warnings;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

}  // namespace cpx
