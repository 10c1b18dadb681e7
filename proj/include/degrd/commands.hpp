#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "degrd/audit.hpp"
#include "degrd/ledger.hpp"
#include "degrd/log_convexity.hpp"
#include "degrd/solver.hpp"

namespace degrd {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitInvariant = 3 };

// Everything derived from a finished run: ledger (when its hypotheses allow one), fitted
// rate, audit with tilted and observation entries.
struct Evaluation {
    std::optional<ConstantLedger> ledger;
    std::string ledger_error;
    std::optional<DecayFit> fit;
    FitWindow fit_window{};
    std::string fit_error;
    AuditReport report;
    int exit_code = kExitOk;
};

// Adds frequency channels to run.series when log_convexity is on and they are missing.
Evaluation evaluate_run(RunOutput& run);

nlohmann::json summary_json(const RunOutput& run, const Evaluation& ev);
nlohmann::json verification_json(const Evaluation& ev);

// Writes config.ini, traces.csv, summary.json, verification.json and snapshots/ into a
// sibling temporary directory, then renames it into place. Returns the exit code.
int simulate_to_directory(const SimConfig& config, const std::filesystem::path& dir, nlohmann::json* summary = nullptr);

// Rebuilds a run from its directory (config echo, traces, summary facts, snapshots).
RunOutput load_run_directory(const std::filesystem::path& dir);

// Re-audits a run directory and rewrites its verification.json.
int verify_directory(const std::filesystem::path& dir, nlohmann::json* report = nullptr);

// Lembp check on a traces CSV. Columns y and N (or tilted_norm2 and N_t) are required;
// F1 and F2 default to C1/h and 2 C1/h^2 when absent.
LembpReport lembp_from_csv(const std::filesystem::path& csv, double C0, double C1, double h, double T, double t1,
                           double t2, double t3);
nlohmann::json lembp_json(const LembpReport& r);

struct SweepAxis {
    std::string key;  // "section.key"
    std::vector<std::string> values;
};

struct SweepRow {
    std::string run;
    double d1 = 0, d2 = 0, k0 = 0, x0 = 0, r = 0;
    std::string support;
    double beta_obs = 0, r_squared = 0;
    bool fit_ok = false;
    int exit_code = 0;
};

// Cartesian product of the axes over the template, each run in its own directory
// run_NNN under out_dir, at most `jobs` at a time. Writes out_dir/comparison.csv.
std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<SweepAxis>& axes,
                            const std::filesystem::path& out_dir, int jobs);

}  // namespace degrd
