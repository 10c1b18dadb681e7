#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "degrd/ext_real.hpp"
#include "degrd/ledger.hpp"
#include "degrd/log_convexity.hpp"
#include "degrd/solver.hpp"
#include "degrd/trace.hpp"

namespace degrd {

// Every tolerance the audit and the acceptance suite use.
struct Tolerances {
    double mass = 1e-8;
    double l2_monotone = 1e-8;
    double l3_monotone = 1e-6;
    double minimum_principle = 1e-6;
    double mean_shift = 1e-8;
    // Per-step discrete energy balance, relative to dt^2 + dx^2.
    double energy_residual_coeff = 1.0;
    // Relative slack of the decay certificate and the two-step contraction (log domain).
    double decay_log = 1e-8;
    // beta-one chain, relative to its right-hand side.
    double beta1_chain = 1e-10;
    // Tilted energy identity, relative to the size of its terms.
    double tilted_energy = 1e-2;
    // Two assemblies of the tilted dissipation form, relative to Sff + norm2.
    double sff_agreement = 5e-2;
    // Fitted rates.
    double decay_rate_rel = 0.02;
    double order = 1.9;
};

const Tolerances& tolerances();

// pass iff margin >= -tolerance; margin is the signed slack of the inequality.
struct AuditEntry {
    std::string invariant_id;
    std::string reference;
    bool pass = false;
    ExtReal margin;
    double tolerance = 0;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    bool pass() const;
    std::vector<std::string> failed() const;
    nlohmann::json to_json() const;
};

// Facts about a finished run that the series alone does not carry.
struct RunFacts {
    double B0 = 0;
    double dt = 0;
    double spacing = 0;
    double t_end = 0;
    bool stability_violated = false;
    std::string failure;
};

RunFacts facts_of(const RunOutput& run);

// Solver invariants from the series; with a ledger, also the decay certificate, the
// two-step contraction, the fitted-rate comparison and the beta-one chain.
AuditReport audit(const TraceSeries& series, const RunFacts& facts, const ConstantLedger* ledger = nullptr);

// Adds tilted-system entries from a frequency trace and, when the snapshots allow it,
// the final interpolation-step inequalities.
void audit_log_convexity(AuditReport& report, const RunOutput& run, const FrequencyTrace& trace,
                         const ConstantLedger& ledger);

}  // namespace degrd
