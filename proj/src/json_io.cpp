#include "cpapprox/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cpx {

namespace {

using nlohmann::json;

void dump_value(const json& j, int indent, int depth, std::string& out) {
    const std::string pad(indent > 0 ? static_cast<std::size_t>(indent * (depth + 1)) : 0, ' ');
    const std::string closing_pad(indent > 0 ? static_cast<std::size_t>(indent * depth) : 0, ' ');
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";

    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            out += nl;
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                out += json(key).dump();
                out += sep;
                dump_value(value, indent, depth + 1, out);
            }
            out += nl;
            out += closing_pad;
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            out += nl;
            bool first = true;
            for (const auto& value : j) {
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                dump_value(value, indent, depth + 1, out);
            }
            out += nl;
            out += closing_pad;
            out += ']';
            return;
        }
        case json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += "null";
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

std::vector<double> doubles_from(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw std::invalid_argument(std::string("missing array field: ") + field);
    }
    return j[field].get<std::vector<double>>();
}

json moments_to_json(const WindowedMoments& wm) {
    json arr = json::array();
    for (const auto& [key, value] : wm.entries()) {
        arr.push_back({{"i", key.first}, {"j", key.second}, {"value", value}});
    }
    return arr;
}

WindowedMoments moments_from_json(const json& j, const char* field) {
    WindowedMoments wm;
    if (!j.contains(field)) return wm;
    for (const auto& entry : j[field]) {
        wm.set(entry.at("i").get<int>(), entry.at("j").get<int>(),
               entry.at("value").get<double>());
    }
    return wm;
}

std::vector<IntPmf> severities_from_json(const json& j) {
    std::vector<IntPmf> out;
    if (!j.contains("severities")) return out;
    for (const auto& entry : j["severities"]) out.push_back(pmf_from_json(entry));
    return out;
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    dump_value(j, indent, 0, out);
    return out;
}

json to_json(const IntPmf& pmf) {
    return {{"offset", pmf.offset()}, {"probs", pmf.probs()}, {"deficit", pmf.deficit()}};
}

IntPmf pmf_from_json(const json& j) {
    const auto offset = j.at("offset").get<std::int64_t>();
    auto probs = j.at("probs").get<std::vector<double>>();
    if (j.contains("deficit")) {
        return IntPmf(offset, std::move(probs), j["deficit"].get<double>());
    }
    return IntPmf(offset, std::move(probs));
}

json to_json(const MetricValue& m) {
    return {{"value", m.value}, {"error_bar", m.error_bar}, {"provenance", "oracle"}};
}

json to_json(const BoundReport& r) {
    return {{"total", r.total},
            {"c_term", r.c_term},
            {"smooth_term", r.smooth_term},
            {"norm_used", r.norm_used},
            {"norm_method", std::string(to_string(r.norm_method))},
            {"lambda", r.lambda},
            {"valid", r.valid},
            {"notes", r.notes},
            {"provenance", "formula"}};
}

json to_json(const SuiteResult& r) {
    return {{"name", r.name},
            {"cases", r.cases},
            {"failures", r.failures},
            {"messages", r.messages},
            {"passed", r.passed()}};
}

json to_json(const Table1Row& row) {
    return {{"lambda", row.lambda},
            {"p", row.p},
            {"norm", row.norm},
            {"norm_provenance", "oracle"},
            {"heuristic", row.heuristic},
            {"heuristic_provenance", "formula"}};
}

json to_json(const BernoulliProfile& p) { return {{"ps", p.ps}}; }

BernoulliProfile bernoulli_profile_from_json(const json& j) {
    return BernoulliProfile{doubles_from(j, "ps")};
}

json to_json(const IndepProfile& p) {
    json sev = json::array();
    for (const IntPmf& s : p.severities) sev.push_back(to_json(s));
    return {{"ps", p.ps}, {"sq_means", p.sq_means}, {"severities", sev}};
}

IndepProfile indep_profile_from_json(const json& j) {
    IndepProfile p;
    p.ps = doubles_from(j, "ps");
    p.sq_means = doubles_from(j, "sq_means");
    p.severities = severities_from_json(j);
    p.validate();
    return p;
}

json to_json(const LocalDepProfile& p) {
    json sev = json::array();
    for (const IntPmf& s : p.severities) sev.push_back(to_json(s));
    return {{"k", p.k},
            {"ps", p.ps},
            {"means", p.means},
            {"sq_means", p.sq_means},
            {"cross_moments", moments_to_json(p.cross_moments)},
            {"joint_nonzero", moments_to_json(p.joint_nonzero)},
            {"covariances", moments_to_json(p.covariances)},
            {"severities", sev}};
}

LocalDepProfile local_dep_profile_from_json(const json& j) {
    LocalDepProfile p;
    p.k = j.at("k").get<int>();
    p.ps = doubles_from(j, "ps");
    p.means = doubles_from(j, "means");
    p.sq_means = doubles_from(j, "sq_means");
    p.cross_moments = moments_from_json(j, "cross_moments");
    p.joint_nonzero = moments_from_json(j, "joint_nonzero");
    p.covariances = moments_from_json(j, "covariances");
    p.severities = severities_from_json(j);
    p.validate();
    return p;
}

KdepGeneralInputs kdep_general_inputs_from_json(const json& j) {
    KdepGeneralInputs in;
    in.ps = doubles_from(j, "ps");
    in.k = j.at("k").get<int>();
    in.zeta_terms = doubles_from(j, "zeta_terms");
    in.dtv_prefix_terms = doubles_from(j, "dtv_prefix_terms");
    in.window_joint = doubles_from(j, "window_joint");
    return in;
}

json to_json(const Report& r) {
    return {{"command", r.command},
            {"inputs", r.inputs},
            {"results", r.results},
            {"warnings", r.warnings}};
}

Report report_from_json(const json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.results = j.at("results");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

}  // namespace cpx
