#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "degrd/catalyst.hpp"
#include "degrd/grid.hpp"
#include "degrd/trace.hpp"
#include "degrd/weight.hpp"

namespace degrd {

enum class ProfileKind { constant, cosine, gaussian };

ProfileKind parse_profile_kind(const std::string& s);
std::string to_string(ProfileKind k);

// Initial profile: base, plus amplitude times a Neumann mode (cosine) or a Gaussian.
// On the interval the cosine mode m is cos(m pi (x + 1/2)); on the disk it is the radial
// mode J0(z_m r / R) with z_m the m-th positive zero of J1.
struct ProfileSpec {
    ProfileKind kind = ProfileKind::constant;
    double base = 1.0;
    double amplitude = 0.0;
    int mode = 1;
    double center = 0.0;
    double width = 0.1;

    double at(const Point& x, int dim, double radius) const;
};

struct SimConfig {
    int dim = 1;
    int resolution = 256;
    double d1 = 1.0;
    double d2 = 1.0;
    CatalystSpec catalyst;
    ProfileSpec a0;
    ProfileSpec b0;
    double dt = 0.0;  // 0 selects min(stability bound, spacing / 2)
    double t_end = 1.0;
    double snapshot_every = 0.05;
    bool keep_snapshots = true;
    // Log-convexity traces; weight.s = 0 selects the ledger threshold.
    bool log_convexity = false;
    WeightParams weight;
    unsigned long long seed = 0;

    void validate() const;
};

struct StatePair {
    Field a;
    Field b;
    double t = 0.0;
};

struct InitResult {
    StatePair state;
    double B0 = 0.0;
    double scale = 1.0;
    std::vector<std::string> warnings;
};

InitResult init_state(const SimConfig& config, const GridPtr& grid);

struct PositivityLost : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Crank-Nicolson diffusion with the reaction taken at a half-step predictor.
class Stepper {
public:
    Stepper(const SimConfig& config, GridPtr grid, double dt);
    ~Stepper();
    Stepper(Stepper&&) noexcept;

    // Throws PositivityLost if min(a, b) < 0 afterwards.
    StatePair step(const StatePair& s);
    double dt() const { return dt_; }
    // Discrete energy balance of the last step: (E1 - E0)/dt plus the dissipation at the
    // time-averaged state.
    double last_energy_residual() const { return last_residual_; }
    const Catalyst& catalyst() const { return catalyst_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    GridPtr grid_;
    Catalyst catalyst_;
    double d1_, d2_, dt_;
    double last_residual_ = 0.0;
};

// Reaction step bound 0.5 / (k_max max(a + b)).
double stability_bound(double k_max, const StatePair& s);

struct RunOutput {
    SimConfig config;
    GridPtr grid;
    TraceSeries series;
    std::vector<StatePair> snapshots;
    double B0 = 0.0;
    double initial_scale = 1.0;
    double dt = 0.0;
    int steps = 0;
    bool stability_violated = false;
    std::vector<std::string> warnings;
    // Empty on success.
    std::string failure;
};

// Scalars recorded at every snapshot.
struct StateDiagnostics {
    double mass, l2_dist, l3_sum, min_ab;
    double dissipation_grad_a, dissipation_grad_b, dissipation_reaction;
    double mean_shift, l2_ball, l3_norm_a, l3_norm_b;
};

StateDiagnostics diagnose(const Grid& grid, const StatePair& s, const Catalyst& k, const SimConfig& c);

// Runs to t_end. Numerical failures stop the run and are reported in `failure`.
RunOutput run(const SimConfig& config);

}  // namespace degrd
