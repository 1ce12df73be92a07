// cpx: command-line front end for the compound Poisson approximation bounds
// library. Talks to the core exclusively through the C API.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpapprox/capi.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitVerifyFailed = 3;

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { cpx_string_free(s); }
};

enum class Format { text, json_out, csv };

std::string fmt6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

[[noreturn]] void die(const std::string& message, int code = kExitUsage) {
    std::cerr << "cpx: " << message << "\n";
    std::exit(code);
}

void check(cpx_status status) {
    if (status != CPX_OK) die(cpx_last_error());
}

double default_eps() {
    if (const char* env = std::getenv("CPX_EPS")) {
        try {
            const double v = std::stod(env);
            if (v > 0.0 && v < 1.0) return v;
        } catch (...) {
        }
        die("CPX_EPS must be a real in (0, 1)");
    }
    return 1e-12;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) die("--ps: expected a comma-separated list of probabilities");
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) die("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        die(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return j;
}

void emit_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

// ---- render helpers --------------------------------------------------------

void render_table1(const json& report, Format format) {
    const auto& rows = report.at("results").at("rows");
    if (format == Format::json_out) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    if (format == Format::csv) {
        emit_csv_row(std::cout, {"lambda", "p", "norm", "heuristic"});
        for (const auto& row : rows) {
            emit_csv_row(std::cout,
                         {fmt6(row.at("lambda").get<double>()), fmt6(row.at("p").get<double>()),
                          fmt6(row.at("norm").get<double>()),
                          fmt6(row.at("heuristic").get<double>())});
        }
        return;
    }
    std::vector<double> lambdas;
    std::vector<double> ps;
    for (const auto& row : rows) {
        const double lam = row.at("lambda").get<double>();
        const double p = row.at("p").get<double>();
        if (std::find(lambdas.begin(), lambdas.end(), lam) == lambdas.end()) lambdas.push_back(lam);
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    }
    auto cell = [&](double lam, double p) -> const json* {
        for (const auto& row : rows) {
            if (row.at("lambda").get<double>() == lam && row.at("p").get<double>() == p)
                return &row;
        }
        return nullptr;
    };
    std::printf("%-8s", "");
    for (double lam : lambdas) std::printf("lambda=%-7g %-11s", lam, "");
    std::printf("\n%-8s", "p");
    for (std::size_t i = 0; i < lambdas.size(); ++i) std::printf("%-12s%-11s", "norm", "approx");
    std::printf("\n");
    for (double p : ps) {
        std::printf("%-8s", fmt6(p).c_str());
        for (double lam : lambdas) {
            const json* row = cell(lam, p);
            std::printf("%-12s%-11s", fmt6(row->at("norm").get<double>()).c_str(),
                        fmt6(row->at("heuristic").get<double>()).c_str());
        }
        std::printf("\n");
    }
}

void render_scalar_map(const json& results, Format format) {
    std::vector<std::pair<std::string, const json*>> flat;
    for (const auto& [key, value] : results.items()) flat.emplace_back(key, &value);
    if (format == Format::csv) {
        emit_csv_row(std::cout, {"name", "value", "provenance"});
        for (const auto& [key, value] : flat) {
            if (value->contains("value")) {
                emit_csv_row(std::cout, {key, fmt6(value->at("value").get<double>()),
                                         value->value("provenance", "")});
            } else {
                for (const auto& [inner_key, inner] : value->items()) {
                    if (inner.is_number()) {
                        emit_csv_row(std::cout, {key + "." + inner_key,
                                                 fmt6(inner.get<double>()),
                                                 value->value("provenance", "")});
                    }
                }
            }
        }
        return;
    }
    for (const auto& [key, value] : flat) {
        if (value->contains("value")) {
            std::cout << key << " = " << fmt6(value->at("value").get<double>());
            if (value->contains("provenance")) {
                std::cout << "   [" << value->at("provenance").get<std::string>() << "]";
            }
            std::cout << "\n";
        } else {
            for (const auto& [inner_key, inner] : value->items()) {
                if (inner.is_number()) {
                    std::cout << key << "." << inner_key << " = " << fmt6(inner.get<double>())
                              << "\n";
                }
            }
        }
    }
}

void render_bound(const json& report, Format format) {
    if (format == Format::json_out) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    const json& bound = report.at("results").at("bound");
    if (format == Format::csv) {
        emit_csv_row(std::cout, {"field", "value"});
        for (const char* field : {"total", "c_term", "smooth_term", "norm_used", "lambda"}) {
            emit_csv_row(std::cout, {field, fmt6(bound.at(field).get<double>())});
        }
        emit_csv_row(std::cout, {"norm_method", bound.at("norm_method").get<std::string>()});
        emit_csv_row(std::cout, {"valid", bound.at("valid").get<bool>() ? "true" : "false"});
        return;
    }
    std::cout << "kind         " << report.at("inputs").at("kind").get<std::string>() << "\n";
    std::cout << "lambda       " << fmt6(bound.at("lambda").get<double>()) << "\n";
    std::cout << "c_term       " << fmt6(bound.at("c_term").get<double>()) << "\n";
    std::cout << "smooth_term  " << fmt6(bound.at("smooth_term").get<double>()) << "\n";
    std::cout << "total        " << fmt6(bound.at("total").get<double>()) << "\n";
    std::cout << "norm         " << fmt6(bound.at("norm_used").get<double>()) << " ["
              << bound.at("norm_method").get<std::string>() << "]\n";
    std::cout << "valid        " << (bound.at("valid").get<bool>() ? "true" : "false") << "\n";
    for (const auto& note : bound.at("notes")) {
        std::cout << "note         " << note.get<std::string>() << "\n";
    }
    for (const auto& warning : report.at("warnings")) {
        std::cout << "warning      " << warning.get<std::string>() << "\n";
    }
}

void render_verify(const json& report, Format format) {
    if (format == Format::json_out) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    const auto& suites = report.at("results").at("suites");
    if (format == Format::csv) {
        emit_csv_row(std::cout, {"suite", "cases", "failures"});
        for (const auto& suite : suites) {
            emit_csv_row(std::cout, {suite.at("name").get<std::string>(),
                                     std::to_string(suite.at("cases").get<int>()),
                                     std::to_string(suite.at("failures").get<int>())});
        }
        return;
    }
    for (const auto& suite : suites) {
        const bool passed = suite.at("passed").get<bool>();
        std::cout << (passed ? "[PASS] " : "[FAIL] ") << suite.at("name").get<std::string>()
                  << " (" << suite.at("cases").get<int>() << " cases";
        if (!passed) std::cout << ", " << suite.at("failures").get<int>() << " failures";
        std::cout << ")\n";
        for (const auto& message : suite.at("messages")) {
            std::cout << "       " << message.get<std::string>() << "\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compound Poisson / Poisson approximation error bounds"};
    app.require_subcommand(1);

    bool as_json = false;
    bool as_csv = false;
    double eps = default_eps();
    app.add_flag("--json", as_json, "emit the full-precision JSON report");
    app.add_flag("--csv", as_csv, "emit CSV rows");
    app.add_option("--eps", eps, "truncation tolerance for pmf tails")->check(CLI::Range(0.0, 1.0));

    // table1
    CLI::App* cmd_table1 = app.add_subcommand(
        "table1", "compound-geometric smoothness norms vs the normal approximation");

    // norms
    CLI::App* cmd_norms = app.add_subcommand("norms", "smoothness factors for a given rate");
    double norms_lambda = 0.0;
    std::optional<double> norms_geom_p;
    std::optional<std::int64_t> norms_trunc_k;
    std::string norms_severity_file;
    cmd_norms->add_option("--lambda", norms_lambda, "Poisson rate")->required();
    cmd_norms->add_option("--geom-p", norms_geom_p, "geometric severity parameter");
    cmd_norms->add_option("--trunc-k", norms_trunc_k, "truncate the geometric severity at k");
    cmd_norms->add_option("--severity", norms_severity_file, "severity pmf JSON file");

    // bound
    CLI::App* cmd_bound = app.add_subcommand("bound", "evaluate an approximation error bound");
    std::string bound_kind;
    cmd_bound
        ->add_option("kind", bound_kind,
                     "po-independent | cp-independent | po-iid-refined | kdep-moments | "
                     "kdep-quadrant | runs-po | runs-cp | runs-cp-improved | runs-total")
        ->required();
    std::string bound_ps;
    std::string bound_profile_file;
    std::optional<std::int64_t> bound_n, bound_k;
    std::optional<double> bound_p, bound_norm;
    bool bound_poisson_norm = false;
    cmd_bound->add_option("--ps", bound_ps, "comma-separated success probabilities");
    cmd_bound->add_option("--profile", bound_profile_file, "profile JSON file");
    cmd_bound->add_option("--n", bound_n, "number of trials");
    cmd_bound->add_option("--k", bound_k, "run length / dependence range");
    cmd_bound->add_option("--p", bound_p, "success probability");
    cmd_bound->add_option("--norm", bound_norm, "smoothness norm override");
    cmd_bound->add_flag("--poisson-norm", bound_poisson_norm,
                        "use the exact Poisson norm (Poisson-target variant)");

    // verify
    CLI::App* cmd_verify = app.add_subcommand("verify", "run the exact verification suites");
    std::string verify_suite = "all";
    std::uint64_t verify_seed = 20081122;
    std::int64_t verify_cap = 500;
    cmd_verify->add_option("suite", verify_suite, "lemmas | runs | table1 | all");
    cmd_verify->add_option("--seed", verify_seed, "seed for the randomized suites");
    cmd_verify->add_option("--cap", verify_cap, "largest n for the exact run-count oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::exit(app.exit(e) == 0 ? kExitOk : kExitUsage);
    }
    if (as_json && as_csv) die("--json and --csv are mutually exclusive");
    const Format format = as_json ? Format::json_out : (as_csv ? Format::csv : Format::text);

    if (cmd_table1->parsed()) {
        StringGuard report;
        check(cpx_table1_report(eps, &report.s));
        render_table1(json::parse(report.s), format);
        return kExitOk;
    }

    if (cmd_norms->parsed()) {
        json params{{"lambda", norms_lambda}, {"eps", eps}};
        if (norms_geom_p) params["geom_p"] = *norms_geom_p;
        if (norms_trunc_k) params["trunc_k"] = *norms_trunc_k;
        if (!norms_severity_file.empty()) params["severity"] = load_json_file(norms_severity_file);
        StringGuard report;
        check(cpx_norms_report(params.dump().c_str(), &report.s));
        const json parsed = json::parse(report.s);
        if (format == Format::json_out) {
            std::cout << parsed.dump(2) << "\n";
        } else {
            render_scalar_map(parsed.at("results"), format);
        }
        return kExitOk;
    }

    if (cmd_bound->parsed()) {
        json params{{"eps", eps}};
        if (!bound_ps.empty()) params["ps"] = parse_list(bound_ps);
        if (!bound_profile_file.empty()) params["profile"] = load_json_file(bound_profile_file);
        if (bound_n) params["n"] = *bound_n;
        if (bound_k) params["k"] = *bound_k;
        if (bound_p) params["p"] = *bound_p;
        if (bound_norm) params["norm"] = *bound_norm;
        if (bound_poisson_norm) params["poisson_norm"] = true;
        StringGuard report;
        int valid = 0;
        check(cpx_bound_report(bound_kind.c_str(), params.dump().c_str(), &report.s, &valid));
        render_bound(json::parse(report.s), format);
        return valid ? kExitOk : kExitHypothesis;
    }

    if (cmd_verify->parsed()) {
        StringGuard report;
        int failures = 0;
        check(cpx_verify_report(verify_suite.c_str(), verify_seed, verify_cap, eps, &report.s,
                                &failures));
        render_verify(json::parse(report.s), format);
        return failures == 0 ? kExitOk : kExitVerifyFailed;
    }

    die("no subcommand given");
}
