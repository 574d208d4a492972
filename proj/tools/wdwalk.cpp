// Command-line front end: scenario ingestion, command dispatch, JSON reports.
//
// Commands:
//   validate    check the three defining relations and structural constraints
//   cohomology  (gamma, h0, h1, h2) of the deformation complex
//   tangent     dimension and basis of the first-order lifts
//   unobstruct  run the walk engine; report carries the certificate
//   verify      independent check of a certificate file
//   generate    deterministic random scenario for property testing
//
// All reports are JSON on stdout (or --out <path>); exit code 0 for
// ok/true, 1 otherwise, with a machine-readable error object on failures.

#include <chrono>
#include <cxxabi.h>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wdwalk/scenario.hpp"

namespace {

using wdwalk::Json;

std::string demangled_kind(const std::exception& e) {
    int status = 0;
    std::unique_ptr<char, void (*)(void*)> raw(
        abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status), std::free);
    std::string name = (status == 0 && raw) ? raw.get() : typeid(e).name();
    const std::string ns = "wdwalk::";
    if (name.rfind(ns, 0) == 0) name = name.substr(ns.size());
    return name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wdwalk::ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json_file(const std::string& path) {
    try {
        return Json::parse(slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw wdwalk::ParseError("malformed JSON in " + path + ": " + e.what());
    }
}

void emit(const Json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw wdwalk::Error("cannot write output file: " + out_path);
    out << text;
}

std::vector<long> parse_t_candidates(const std::string& csv) {
    std::vector<long> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stol(item));
        } catch (...) {
            throw wdwalk::ParseError("bad --t-candidates entry: " + item);
        }
    }
    if (out.empty()) throw wdwalk::ParseError("--t-candidates must name at least one value");
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Weil-Deligne triples: validation, deformation cohomology, "
                 "and the certified unobstruction walk"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format = "json";
    std::string t_candidates_csv = "2,3,5,7,11,13";
    std::size_t max_steps = 64;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        auto* opt = cmd->add_option("--scenario", scenario_path, "input file (JSON)");
        if (needs_scenario) opt->required();
        cmd->add_option("--out", out_path, "write the report here instead of stdout");
        cmd->add_option("--format", format, "report format (json)")
            ->check(CLI::IsMember({"json"}));
    };

    auto* c_validate = app.add_subcommand("validate", "check the defining relations");
    add_common(c_validate, true);
    auto* c_cohomology = app.add_subcommand("cohomology", "compute (gamma, h0, h1, h2)");
    add_common(c_cohomology, true);
    auto* c_tangent = app.add_subcommand("tangent", "first-order lifts: dimension and basis");
    add_common(c_tangent, true);
    auto* c_unobstruct = app.add_subcommand("unobstruct", "run the unobstruction walk");
    add_common(c_unobstruct, true);
    c_unobstruct->add_option("--t-candidates", t_candidates_csv,
                             "comma-separated scaling parameters to try");
    c_unobstruct->add_option("--max-steps", max_steps, "walk step limit");
    auto* c_verify = app.add_subcommand("verify", "check a certificate file");
    add_common(c_verify, true);

    std::uint64_t gen_seed = 0;
    std::size_t gen_n = 2;
    long gen_q = 4;
    std::string gen_template = "trivial";
    auto* c_generate = app.add_subcommand("generate", "emit a deterministic random scenario");
    c_generate->add_option("--seed", gen_seed, "PRNG seed");
    c_generate->add_option("--n", gen_n, "matrix size (1..6)");
    c_generate->add_option("--q", gen_q, "residue size (perfect square)");
    c_generate->add_option("--template", gen_template,
                           "inertial template: trivial | cyclic-2|3|4|6");
    c_generate->add_option("--out", out_path, "write the scenario here instead of stdout");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    Timer timer;
    Json report = Json::object();
    report["command"] = command;
    int exit_code = 0;
    try {
        if (command == "generate") {
            const wdwalk::Scenario s =
                wdwalk::generate_scenario(gen_seed, gen_n, gen_q, gen_template);
            report["scenario"] = s.name;
            report["outcome"] = "ok";
            report["result"] = wdwalk::scenario_to_json(s);
        } else if (command == "verify") {
            Json j = parse_json_file(scenario_path);
            if (j.is_object() && j.contains("certificate")) j = j["certificate"];
            const wdwalk::WalkCertificate cert = wdwalk::certificate_from_json(j);
            report["scenario"] = scenario_path;
            const wdwalk::VerificationReport v = wdwalk::verify_certificate(cert);
            report["outcome"] = v.ok ? "ok" : (v.final_obstructed ? "obstructed" : "invalid");
            report["verdict"] = Json{{"ok", v.ok},
                                     {"checks", v.checks},
                                     {"failure", v.failure},
                                     {"final_obstructed", v.final_obstructed}};
            if (!v.ok) exit_code = 1;
        } else {
            const wdwalk::Scenario s =
                wdwalk::scenario_from_json(parse_json_file(scenario_path));
            report["scenario"] = s.name.empty() ? scenario_path : s.name;
            const auto violations = wdwalk::validate_triple(s.triple);
            if (command == "validate") {
                report["outcome"] = violations.empty() ? "ok" : "invalid";
                report["violations"] = violations;
                if (!violations.empty()) exit_code = 1;
            } else if (!violations.empty()) {
                report["outcome"] = "invalid";
                report["violations"] = violations;
                exit_code = 1;
            } else if (command == "cohomology") {
                report["outcome"] = "ok";
                report["report"] =
                    wdwalk::report_to_json(wdwalk::deformation_complex(s.triple));
            } else if (command == "tangent") {
                const auto lifts = wdwalk::first_order_lifts(s.triple);
                report["outcome"] = "ok";
                Json basis = Json::array();
                for (const auto& [a, b] : lifts.basis)
                    basis.push_back(
                        Json{{"a", wdwalk::matrix_to_json(a, s.triple.field())},
                             {"b", wdwalk::matrix_to_json(b, s.triple.field())}});
                report["tangent"] =
                    Json{{"dimension", lifts.dimension}, {"basis", std::move(basis)}};
                report["report"] = wdwalk::report_to_json(lifts.report);
            } else if (command == "unobstruct") {
                wdwalk::WalkOptions opts;
                opts.t_candidates = parse_t_candidates(t_candidates_csv);
                opts.max_steps = max_steps;
                try {
                    const wdwalk::WalkCertificate cert = wdwalk::unobstruct(s.triple, opts);
                    report["outcome"] = "ok";
                    report["report"] = wdwalk::report_to_json(cert.final_report);
                    report["certificate"] = wdwalk::certificate_to_json(cert);
                } catch (const wdwalk::TrialExhausted& e) {
                    report["outcome"] = std::string("walk_failed:TrialExhausted");
                    report["error"] = Json{{"kind", "TrialExhausted"}, {"message", e.what()}};
                    exit_code = 1;
                } catch (const wdwalk::InsufficientField& e) {
                    report["outcome"] = std::string("walk_failed:InsufficientField");
                    report["error"] =
                        Json{{"kind", "InsufficientField"}, {"message", e.what()}};
                    exit_code = 1;
                } catch (const wdwalk::UnsupportedGroupKind& e) {
                    report["outcome"] = std::string("walk_failed:UnsupportedGroupKind");
                    report["error"] =
                        Json{{"kind", "UnsupportedGroupKind"}, {"message", e.what()}};
                    exit_code = 1;
                }
            }
        }
    } catch (const wdwalk::Error& e) {
        report["outcome"] = "error";
        report["error"] = Json{{"kind", demangled_kind(e)}, {"message", e.what()}};
        exit_code = 1;
    } catch (const std::exception& e) {
        report["outcome"] = "error";
        report["error"] = Json{{"kind", demangled_kind(e)}, {"message", e.what()}};
        exit_code = 1;
    }
    report["timing_ms"] = timer.ms();
    try {
        emit(report, out_path);
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
