#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "degrd/commands.hpp"
#include "degrd/config.hpp"
#include "degrd/run_io.hpp"

using namespace degrd;
namespace fs = std::filesystem;

namespace {

void emit(const nlohmann::json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

// "section.key=v1,v2,..."
SweepAxis parse_axis(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected section.key=v1,v2,...");
    SweepAxis axis{spec.substr(0, eq), {}};
    std::string rest = spec.substr(eq + 1), item;
    std::istringstream in(rest);
    while (std::getline(in, item, ',')) axis.values.push_back(item);
    return axis;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification harness for a reaction-diffusion system with a degenerate catalyst"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, out_dir, run_dir, out_file, series_path;
    std::vector<std::string> overrides, axes;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    double C0 = 0.5, C1 = 2.0, h = 0.1, T = 1.0, t1 = 0, t2 = 0, t3 = 0;

    auto* sim = app.add_subcommand("simulate", "run one configuration into a run directory");
    sim->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    sim->add_option("-o,--out", out_dir, "run directory")->required();
    sim->add_option("--set", overrides, "override section.key=value");

    auto* ver = app.add_subcommand("verify", "re-audit a run directory");
    ver->add_option("run_dir", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
    ver->add_option("-o,--out", out_file, "report path (default stdout)");

    auto* cons = app.add_subcommand("constants", "constant ledger of a configuration as JSON");
    cons->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    cons->add_option("-o,--out", out_file, "output path (default stdout)");

    auto* lem = app.add_subcommand("lembp-check", "three-time interpolation check on a series file");
    lem->add_option("series", series_path, "CSV with t, y (or tilted_norm2), N (or N_t), optional F1, F2")
        ->required()
        ->check(CLI::ExistingFile);
    lem->add_option("--C0", C0, "constant C0")->capture_default_str();
    lem->add_option("--C1", C1, "constant C1")->capture_default_str();
    lem->add_option("--weight-h", h, "weight offset h")->capture_default_str();
    lem->add_option("--weight-T", T, "weight horizon T")->capture_default_str();
    lem->add_option("--t1", t1, "first time")->required();
    lem->add_option("--t2", t2, "middle time")->required();
    lem->add_option("--t3", t3, "last time")->required();
    lem->add_option("-o,--out", out_file, "report path (default stdout)");

    auto* swp = app.add_subcommand("sweep", "parameter sweep with a comparison table of fitted rates");
    swp->add_option("config", config_path, "template config file")->required()->check(CLI::ExistingFile);
    swp->add_option("--set", axes, "axis section.key=v1,v2,...")->required();
    swp->add_option("-o,--out", out_dir, "sweep directory")->required();
    swp->add_option("-j,--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

    auto* plot = app.add_subcommand("plot-data", "long-format CSV of a run's traces");
    plot->add_option("run_dir", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
    plot->add_option("-o,--out", out_file, "output path (default run_dir/long.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sim) {
            SimConfig c = load_config(config_path);
            for (const auto& o : overrides) {
                auto eq = o.find('=');
                if (eq == std::string::npos) throw ConfigError("--set", 0, o, "expected section.key=value");
                set_config_value(c, o.substr(0, eq), o.substr(eq + 1));
            }
            c.validate();
            nlohmann::json summary;
            int code = simulate_to_directory(c, out_dir, &summary);
            std::cout << "wrote " << out_dir << " (exit " << code << ")";
            if (!summary["failed_invariants"].empty()) std::cout << ", failed: " << summary["failed_invariants"].dump();
            std::cout << '\n';
            return code;
        }
        if (*ver) {
            nlohmann::json report;
            int code = verify_directory(run_dir, &report);
            emit(report, out_file);
            return code;
        }
        if (*cons) {
            SimConfig c = load_config(config_path);
            auto L = compute_ledger(ledger_inputs(c));
            auto j = L.to_json();
            j["format_version"] = kFormatVersion;
            emit(j, out_file);
            return kExitOk;
        }
        if (*lem) {
            auto r = lembp_from_csv(series_path, C0, C1, h, T, t1, t2, t3);
            auto j = lembp_json(r);
            emit(j, out_file);
            return j["pass"].get<bool>() ? kExitOk : kExitInvariant;
        }
        if (*swp) {
            SimConfig c = load_config(config_path);
            std::vector<SweepAxis> parsed;
            for (const auto& a : axes) parsed.push_back(parse_axis(a));
            auto rows = sweep(c, parsed, out_dir, jobs);
            int code = kExitOk;
            for (const auto& r : rows) code = std::max(code, r.exit_code);
            std::cout << "wrote " << rows.size() << " runs and " << (fs::path(out_dir) / "comparison.csv").string()
                      << '\n';
            return code;
        }
        if (*plot) {
            auto series = read_traces_csv(fs::path(run_dir) / "traces.csv");
            fs::path out = out_file.empty() ? fs::path(run_dir) / "long.csv" : fs::path(out_file);
            write_long_csv(series, out);
            std::cout << "wrote " << out.string() << '\n';
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
