#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "degrd/ext_real.hpp"
#include "degrd/grid.hpp"
#include "degrd/solver.hpp"
#include "degrd/weight.hpp"

namespace degrd {

// K0 = max([4 * l3_initial + 4]^(2/3), 32 k_sup^2), l3_initial = integral of a0^3 + b0^3.
double compute_K0(double l3_initial, double k_sup);

// (integral |g|^6)^(1/3) / (integral g^2 + integral |grad g|^2) on the grid.
double sobolev_ratio(const Grid& grid, const Field& g);

struct SobolevEstimate {
    double value = 1.0;  // reported constant: max(1, 1.1 * best)
    double best_ratio = 0.0;
    int trials = 0;
};

// Random smooth trial fields: a constant, a few plane-wave modes and a Gaussian bump,
// plus a deterministic scan over single bumps. Seeded.
Field sobolev_trial_field(const GridPtr& grid, std::uint64_t seed, int index);
SobolevEstimate compute_sobolev_constant(const GridPtr& grid, std::uint64_t seed = 0, int trials = 800);

// Everything the constant chain depends on.
struct LedgerInputs {
    int dim = 1;
    int resolution = 256;
    double d1 = 1.0, d2 = 1.0;
    double x0_norm = 0.25;
    double r = 0.1;
    double k_sup = 1.0;
    double k_floor = 1.0;  // k0 on the observation ball
    double B0 = 1.0;
    double l3_initial = 2.0;
    // Horizon used for M_ell, D_ell, K_ell (the configured T of the interpolation step checks).
    double T = 2.0;
    std::uint64_t seed = 0;
    int probe_resolution = 10000;
    int sobolev_trials = 800;
};

// Reads the catalyst, geometry and initial data of a simulation config.
LedgerInputs ledger_inputs(const SimConfig& config);

// How an entry's stored number maps to the constant.
enum class Encoding {
    plain,        // constant = value
    exp,          // constant = e^value
    exp_neg_exp,  // constant = e^(-e^value), for theta just below 1
    exp_exp,      // constant = e^(e^value), for gamma just above 1
};

struct LedgerEntry {
    std::string name;
    ExtReal value;
    Encoding encoding = Encoding::plain;
    std::string provenance;
    std::string reference;
};

struct ConstantLedger {
    LedgerInputs inputs;
    GeometryConstants geometry;
    double lambda1 = 0, Cp = 0, C_Sob = 0, K0 = 0, B0 = 0;
    double C2 = 0, C3 = 0, C4 = 0, C5 = 0, C6 = 0, C7 = 0;
    double s0 = 0, s1 = 0, s2 = 0;
    double C0 = 0, C1 = 0;

    // ell may be far beyond double range; log_ell is ln(ell).
    ExtReal ell;
    double log_ell = 0;
    double h = 0;  // min(1/(2 ell), T/(4 ell)) / 2, as a double when representable
    ExtReal h_ext;
    // At the configured T and h.
    ExtReal M_ell, D_ell, log_K_ell;
    ExtReal M_ell_bound;  // 3 e^C1 (ell+1)^C0 / (1 - (2/3)^C0)
    // Supremum of M_ell over admissible h and T, used for (c, M).
    ExtReal M_sup, D_sup, log_K_sup;
    ExtReal mu2, mu3;
    ExtReal M;  // observation-estimate exponent 1 + 2 M_sup
    ExtReal c;  // 2 mu3 + ln 4
    double beta1 = 0;
    // theta = exp(-|ln theta|) lies so close to 1 that only ln|ln theta| is kept.
    // gamma = 1/theta, so ln ln gamma = ln|ln theta|; beta = |ln theta| / 2.
    ExtReal log_abs_log_theta;
    ExtReal log_log_gamma;
    ExtReal log_beta;

    // |ln theta| and beta; zero when below the extended range.
    ExtReal abs_log_theta() const { return exp_or_zero(log_abs_log_theta); }
    ExtReal beta() const { return exp_or_zero(log_beta); }
    static ExtReal exp_or_zero(const ExtReal& x);

    std::vector<LedgerEntry> entries() const;
    nlohmann::json to_json() const;
};

// Geometry, Poincare, Sobolev, K0 and the analysis constants s0..s2, C0..C7.
ConstantLedger compute_analysis_constants(const LedgerInputs& in);

// ln M_ell from the quadrature of its two integrals, with kappa = C1 * ell * h.
double log_M_ell(double C0, double kappa, double log_ell);
// ln of the closed-form upper bound of M_ell.
double log_M_ell_bound(double C0, double C1, double log_ell);
// Smallest integer ell > 1 with mu1 (1 + bound) / (ell + 1) <= mu0 / 2; returns ln(ell).
double search_log_ell(double C0, double C1, double mu0, double mu1);

// ell, M_ell, D_ell, K_ell, (c, M), mu2, mu3, beta1, theta, gamma, beta.
void compute_chain(ConstantLedger& ledger);

ConstantLedger compute_ledger(const LedgerInputs& in);

// Recomputes the ledger from its inputs and compares every entry bit for bit.
bool ledger_is_reproducible(const ConstantLedger& ledger);

// JSON scalar for an extended real: a number when it fits a double, otherwise a string.
nlohmann::json ext_to_json(const ExtReal& v);

}  // namespace degrd
