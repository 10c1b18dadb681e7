#pragma once

#include <array>
#include <string>
#include <vector>

#include "degrd/catalyst.hpp"
#include "degrd/ext_real.hpp"
#include "degrd/grid.hpp"
#include "degrd/ledger.hpp"
#include "degrd/solver.hpp"
#include "degrd/weight.hpp"

namespace degrd {

// Four tilted components f_i = u_i e^{Phi_i / 2}. Component i (0-based) carries species
// i % 2 (u1 = a - 1 or u2 = b - 1), the weight phi_1 for i < 2 and phi_3 otherwise, and
// diffusivity d1 for even i, d2 for odd i.
struct TiltedState {
    GridPtr grid;
    WeightParams params;
    double t = 0.0;
    std::array<double, 4> d{};
    std::array<Field, 2> u;
    std::array<Field, 4> f, v, Phi, eta, lap_Phi;
    std::array<std::vector<Point>, 4> grad_Phi;
    // Cellwise gradient of u1, u2 (zero normal derivative at the sphere).
    std::array<std::vector<Point>, 2> grad_u;
};

inline int species_of(int i) { return i % 2; }
inline bool uses_phi3(int i) { return i >= 2; }

TiltedState tilt(const StatePair& state, const WeightParams& params, const Catalyst& catalyst, double t, double d1,
                 double d2);

struct QuadraticForms {
    double Sff = 0;         // sum d_i int |grad f_i|^2 - int eta_i f_i^2, midpoint with grad f from grad u
    double Sff_direct = 0;  // -sum d_i int (Lap f_i) f_i - int eta_i f_i^2, finite-volume with Robin flux
    double Aff = 0;         // sum int (-d_i grad Phi_i . grad f_i - d_i Lap Phi_i f_i / 2) f_i; zero in the limit
    double F2 = 0;          // sum int v_i^2 e^{Phi_i}
    double F_dot_f = 0;     // sum int v_i e^{Phi_i / 2} f_i
    double norm2 = 0;       // sum int f_i^2
    double norm2_12 = 0;    // int f_1^2 + f_2^2
};

QuadraticForms quadratic_forms(const TiltedState& ts);

// Centered first differences on a sample grid with a Richardson error estimate
// (difference between the step-1 and step-2 stencils). NaN samples propagate as NaN.
struct Derivative {
    std::vector<double> value;
    std::vector<double> error;
};
Derivative differentiate(const std::vector<double>& times, const std::vector<double>& y);

inline constexpr double kNormFloor = 1e-30;

struct FrequencyTrace {
    WeightParams params;
    double C0 = 0, C1 = 0;
    std::vector<double> times;
    std::vector<double> N;  // NaN where norm2 <= kNormFloor
    std::vector<double> Sff, Sff_direct, Aff, F2, F_dot_f, norm2, norm2_12;
    Derivative dnorm2, dN;
    // 1/2 d/dt norm2 + Sff - <F, f>
    std::vector<double> energy_residual;
    // Sample times where the inequality fails beyond the finite-difference tolerance.
    std::vector<double> two_sided_violations;  // |y'/2 + Sff| <= Sff/2 + (C1/h) y
    std::vector<double> growth_violations;  // N' <= ((1 + C0)/Gamma + C1) N + 2 C1 / h^2
    std::vector<double> prop2_violations; // ||F||^2 <= C1 (y + Sff)
    std::vector<double> negative_Sff;     // Sff < -tol
    std::size_t defined() const;
};

// Tilted quantities at every snapshot with t <= T. Needs snapshots in `run`.
FrequencyTrace frequency_trace(const RunOutput& run, const WeightParams& params, double C0, double C1);

// Channels N_t, tilted_norm2, Sff, Aff_residual, F_norm2 on the run series (NaN past T).
void add_frequency_channels(RunOutput& run, const FrequencyTrace& trace);

// Weight parameters of a run with s = 0 resolved to the ledger threshold s2.
WeightParams resolved_weight(const SimConfig& config, const ConstantLedger& ledger);

struct LembpInput {
    std::vector<double> times, y, N, F1, F2;
    double C0 = 0, C1 = 0, h = 0.1, T = 1.0;
    double t1 = 0, t2 = 0, t3 = 0;  // must be sample times
};

struct LembpReport {
    double M = 0, D = 0;
    double log_lhs = 0, log_rhs = 0;
    double margin = 0;  // log_rhs - log_lhs
    // Largest Richardson estimate of y'/y on [t1, t3]; tolerance for the margin.
    double fd_error = 0;
    int samples_checked = 0;
    std::vector<double> hyp1_violations, hyp2_violations;
    bool hypotheses_hold() const { return hyp1_violations.empty() && hyp2_violations.empty(); }
};

// Three-time interpolation from differential inequalities on y and N.
LembpReport lembp_check(const LembpInput& in);

// ln of the integral of e^{t C1} / (T - t + h)^{1 + C0} over [a, b], trapezoid in the log domain.
double log_weight_integral(double C0, double C1, double T, double h, double a, double b, int intervals = 4096);

// One inequality lhs <= rhs evaluated in logs.
struct InequalityCheck {
    std::string id;
    std::string description;
    ExtReal log_lhs, log_rhs;
    ExtReal margin;  // log_rhs - log_lhs
    double tolerance = 0;
    bool pass = false;
};

struct ObservationReport {
    std::vector<InequalityCheck> checks;
    bool pass() const;
};

// Pointwise reaction bound and L3 bound of the data; throws std::runtime_error naming the bound.
void check_data_hypotheses(const RunOutput& run, double K0);

// Observation estimate (1+M) ln|u(T)|^2 <= c (1 + 1/T) + ln|u(T)|_B^2 + M ln|u(0)|^2 at each T,
// and the shifted form with (t1, t) windows.
ObservationReport observation_estimate_check(const RunOutput& run, const ConstantLedger& ledger,
                                             const std::vector<double>& horizons,
                                             const std::vector<std::pair<double, double>>& windows);

// ln of int (u1^2 + u2^2) e^{lambda phi_1}. When e^{lambda phi_1} is far narrower than a cell
// the Gaussian peak at x0 is integrated exactly over its cell with u held constant.
ExtReal log_tilted_norm(const Grid& grid, const StatePair& s, const WeightParams& p, const ExtReal& lambda);

// Inequalities of the final interpolation step at the ledger's (T, h, ell) with s = s2:
// three-time estimate for (f1, f2), the weighted norm at T versus the ball, and the
// unweighted norm at T versus the weighted norm at T - ell h.
ObservationReport interpolation_step_check(const RunOutput& run, const ConstantLedger& ledger);

}  // namespace degrd
