// Command-line front end: run / validate / replay / list-scenarios.

#include "pscalc/runner.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace pscalc;

namespace {

fs::path bundled_dir() {
    if (const char* env = std::getenv("PSCALC_SCENARIO_DIR")) return env;
    return PSCALC_SCENARIO_DIR;
}

// A path, or the name of a bundled scenario.
fs::path resolve(const std::string& s) {
    if (fs::exists(s)) return s;
    fs::path b = bundled_dir() / (s + ".json");
    if (fs::exists(b)) return b;
    throw std::runtime_error("no scenario file or bundled scenario named '" + s + "'");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_diagnostics(const ParseResult& r) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << (w.path.empty() ? "/" : w.path) << ": " << w.message << "\n";
    for (const auto& e : r.errors) std::cerr << "error: " << (e.path.empty() ? "/" : e.path) << ": " << e.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pscalc: finite-truncation checks for product systems over monoids"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string scenario_arg, report_path, cache_dir, backend, replay_in;
    std::optional<int> L, L_big, W;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> witness_index;
    bool timing = false;

    auto* run = app.add_subcommand("run", "run a scenario and emit a report");
    run->add_option("--scenario", scenario_arg, "scenario file or bundled name")->required();
    run->add_option("--truncation", L, "ball radius L");
    run->add_option("--big-truncation", L_big, "larger radius L' for stability checks");
    run->add_option("--word-length", W, "neutral word length bound W");
    run->add_option("--backend", backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    run->add_option("--tolerance", tolerance, "float tolerance");
    run->add_option("--seed", seed, "random seed");
    run->add_option("--report", report_path, "write the report here (default stdout)");
    run->add_option("--cache-dir", cache_dir, "verdict cache directory");
    run->add_flag("--timing", timing, "include wall-clock timings in the report");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
    validate->add_option("--scenario", scenario_arg, "scenario file or bundled name")->required();

    auto* replay = app.add_subcommand("replay", "re-verify the witnesses of a report");
    replay->add_option("--report", replay_in, "report file")->required();
    replay->add_option("--check", witness_index, "replay only the witness of this check index");

    auto* list = app.add_subcommand("list-scenarios", "list bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(bundled_dir()))
                if (e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                auto r = parse_scenario_text(slurp(f));
                std::cout << f.stem().string();
                if (r.scenario && !r.scenario->description.empty()) std::cout << "\t" << r.scenario->description;
                std::cout << "\n";
            }
            return kExitPass;
        }
        if (*replay) {
            auto report = ojson::parse(slurp(replay_in));
            auto r = replay_report(report, witness_index);
            for (const auto& line : r.lines) std::cout << line << "\n";
            return r.exit_code;
        }
        auto parsed = parse_scenario_text(slurp(resolve(scenario_arg)));
        print_diagnostics(parsed);
        if (!parsed.ok()) return kExitError;
        if (*validate) {
            std::cout << "valid: " << parsed.scenario->name << " (" << parsed.scenario->checks.size() << " checks)\n";
            return kExitPass;
        }
        RunOptions opt;
        opt.L = L;
        opt.L_big = L_big;
        opt.W = W;
        if (!backend.empty()) opt.backend = backend == "exact" ? Backend::Exact : Backend::Float;
        opt.tolerance = tolerance;
        opt.seed = seed;
        if (!cache_dir.empty()) opt.cache_dir = cache_dir;
        opt.timing = timing;
        auto res = run_scenario(*parsed.scenario, opt);
        std::string body = res.report.dump(2) + "\n";
        if (report_path.empty()) {
            std::cout << body;
        } else {
            std::ofstream(report_path) << body;
        }
        for (const auto& c : res.report["checks"])
            std::cerr << "#" << c["index"].get<std::size_t>() << " " << c["check"].get<std::string>() << ": "
                      << c["status"].get<std::string>() << "  " << c["message"].get<std::string>() << "\n";
        std::cerr << "summary: " << res.report["summary"]["status"].get<std::string>() << "\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
