#include "degrd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace degrd {

ProfileKind parse_profile_kind(const std::string& s) {
    if (s == "constant") return ProfileKind::constant;
    if (s == "cosine") return ProfileKind::cosine;
    if (s == "gaussian") return ProfileKind::gaussian;
    throw std::invalid_argument("unknown profile kind '" + s + "'");
}

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::constant: return "constant";
        case ProfileKind::cosine: return "cosine";
        case ProfileKind::gaussian: return "gaussian";
    }
    return "?";
}

double ProfileSpec::at(const Point& x, int dim, double radius) const {
    switch (kind) {
        case ProfileKind::constant: return base;
        case ProfileKind::cosine: {
            if (dim == 1) return base + amplitude * std::cos(mode * std::numbers::pi * (x[0] + 0.5));
            static const double zeros[] = {3.8317059702075123, 7.0155866698156188, 10.173468135062722};
            if (mode < 1 || mode > 3) throw std::invalid_argument("disk cosine profile supports modes 1..3");
            double rn = std::hypot(x[0], x[1]);
            return base + amplitude * std::cyl_bessel_j(0.0, zeros[mode - 1] * rn / radius);
        }
        case ProfileKind::gaussian: {
            double d2 = (x[0] - center) * (x[0] - center) + x[1] * x[1] + x[2] * x[2];
            return base + amplitude * std::exp(-d2 / (2.0 * width * width));
        }
    }
    return base;
}

void SimConfig::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("unsupported dimension " + std::to_string(dim) + " for PDE runs");
    if (resolution < 8) throw std::invalid_argument("resolution must be at least 8");
    if (!(d1 > 0 && d2 > 0)) throw std::invalid_argument("diffusivities must be positive");
    if (dt < 0) throw std::invalid_argument("dt must be positive (or 0 for automatic)");
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
    if (!(snapshot_every > 0)) throw std::invalid_argument("snapshot_every must be positive");
    catalyst.validate(Domain::unit_ball(dim).radius);
    if (log_convexity) {
        WeightParams w = weight;
        if (w.s == 0) w.s = 1.0;
        w.validate();
        if (w.T > t_end + 1e-12) throw std::invalid_argument("weight T must not exceed t_end");
    }
}

InitResult init_state(const SimConfig& c, const GridPtr& grid) {
    InitResult out;
    Field a(grid), b(grid);
    const double R = grid->domain.radius;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        a[i] = c.a0.at(grid->centers[i], c.dim, R);
        b[i] = c.b0.at(grid->centers[i], c.dim, R);
        if (!(a[i] > 0) || !(b[i] > 0))
            throw std::invalid_argument("initial profile is not positive at cell " + std::to_string(i));
    }
    double mass = integrate(*grid, a) + integrate(*grid, b);
    out.scale = 2.0 / mass;
    if (out.scale < 0.5 || out.scale > 2.0)
        out.warnings.push_back("initial data rescaled by " + std::to_string(out.scale) +
                               "; profile is far from total mass 2");
    out.B0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid->size(); ++i) {
        a[i] *= out.scale;
        b[i] *= out.scale;
        out.B0 = std::min({out.B0, a[i], b[i]});
    }
    out.state = {std::move(a), std::move(b), 0.0};
    return out;
}

double stability_bound(double k_max, const StatePair& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.a.size(); ++i) m = std::max(m, s.a[i] + s.b[i]);
    if (k_max <= 0 || m <= 0) return std::numeric_limits<double>::infinity();
    return 0.5 / (k_max * m);
}

struct Stepper::Impl {
    using SpMat = Eigen::SparseMatrix<double>;
    SpMat K;
    Eigen::VectorXd V;
    SpMat A1, A2;
    Eigen::SimplicialLDLT<SpMat> solve1, solve2;
};

Stepper::Stepper(const SimConfig& config, GridPtr grid, double dt)
    : impl_(std::make_unique<Impl>()),
      grid_(std::move(grid)),
      catalyst_(config.catalyst, grid_->spacing),
      d1_(config.d1),
      d2_(config.d2),
      dt_(dt) {
    using SpMat = Impl::SpMat;
    const auto n = static_cast<Eigen::Index>(grid_->size());
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& f : grid_->faces) {
        auto l = static_cast<Eigen::Index>(f.left), r = static_cast<Eigen::Index>(f.right);
        trip.emplace_back(l, l, f.transmissibility);
        trip.emplace_back(r, r, f.transmissibility);
        trip.emplace_back(l, r, -f.transmissibility);
        trip.emplace_back(r, l, -f.transmissibility);
    }
    impl_->K = SpMat(n, n);
    impl_->K.setFromTriplets(trip.begin(), trip.end());
    impl_->V.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) impl_->V[i] = grid_->volumes[i];
    auto build = [&](double d, SpMat& A, Eigen::SimplicialLDLT<SpMat>& solver) {
        A = impl_->K * (0.5 * dt_ * d);
        for (Eigen::Index i = 0; i < n; ++i) A.coeffRef(i, i) += impl_->V[i];
        solver.compute(A);
        if (solver.info() != Eigen::Success) throw std::runtime_error("Crank-Nicolson factorization failed");
    };
    build(d1_, impl_->A1, impl_->solve1);
    build(d2_, impl_->A2, impl_->solve2);
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;

namespace {

Eigen::Map<const Eigen::VectorXd> view(const Field& f) {
    return {f.values.data(), static_cast<Eigen::Index>(f.size())};
}

Field from(const GridPtr& g, const Eigen::VectorXd& v) {
    return Field(g, std::vector<double>(v.data(), v.data() + v.size()));
}

// K v assembled face by face; exactly zero for constant v.
Eigen::VectorXd apply_stiffness(const Grid& g, const Eigen::Ref<const Eigen::VectorXd>& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (const auto& f : g.faces) {
        double flux = f.transmissibility * (v[f.right] - v[f.left]);
        out[f.left] -= flux;
        out[f.right] += flux;
    }
    return out;
}

void solve_checked(const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& solver,
                   const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& rhs, Eigen::VectorXd& x) {
    x = solver.solve(rhs);
    double res = (A * x - rhs).norm();
    double scale = rhs.norm();
    if (scale == 0.0) return;
    if (solver.info() != Eigen::Success || !(res <= 1e-10 * scale))
        throw std::runtime_error("implicit diffusion solve failed; residual " + std::to_string(res / scale));
}

}  // namespace

StatePair Stepper::step(const StatePair& s) {
    const auto& K = impl_->K;
    const auto& V = impl_->V;
    const double t = s.t;
    auto a = view(s.a);
    auto b = view(s.b);
    Field k0f = catalyst_.sample(grid_, t);
    Field khf = catalyst_.sample(grid_, t + 0.5 * dt_);
    auto k0 = view(k0f);
    auto kh = view(khf);

    // Solve for increments so that a constant state is reproduced exactly.
    Eigen::VectorXd Ka = apply_stiffness(*grid_, a), Kb = apply_stiffness(*grid_, b);
    Eigen::VectorXd r0 = k0.cwiseProduct(b.cwiseProduct(b) - a.cwiseProduct(a));
    Eigen::VectorXd da, db;
    solve_checked(impl_->solve1, impl_->A1, 0.5 * dt_ * (V.cwiseProduct(r0) - d1_ * Ka), da);
    solve_checked(impl_->solve2, impl_->A2, 0.5 * dt_ * (-V.cwiseProduct(r0) - d2_ * Kb), db);
    Eigen::VectorXd as = a + da, bs = b + db;

    Eigen::VectorXd rh = kh.cwiseProduct(bs.cwiseProduct(bs) - as.cwiseProduct(as));
    solve_checked(impl_->solve1, impl_->A1, dt_ * (V.cwiseProduct(rh) - d1_ * Ka), da);
    solve_checked(impl_->solve2, impl_->A2, dt_ * (-V.cwiseProduct(rh) - d2_ * Kb), db);
    Eigen::VectorXd a1 = a + da, b1 = b + db;

    // Energy balance at the time-averaged state.
    Eigen::VectorXd ua = 0.5 * (a + a1).array() - 1.0;
    Eigen::VectorXd ub = 0.5 * (b + b1).array() - 1.0;
    auto energy = [&](const auto& x, const auto& y) {
        return 0.5 * (V.dot((x.array() - 1.0).square().matrix()) + V.dot((y.array() - 1.0).square().matrix()));
    };
    double diss = d1_ * ua.dot(K * ua) + d2_ * ub.dot(K * ub) +
                  V.dot((kh.array() * (ua.array() + ub.array() + 2.0) * (ub - ua).array().square()).matrix());
    last_residual_ = (energy(a1, b1) - energy(a, b)) / dt_ + diss;

    StatePair out{from(grid_, a1), from(grid_, b1), t + dt_};
    double lo = std::min(a1.minCoeff(), b1.minCoeff());
    if (!(lo >= 0) || !out.a.all_finite() || !out.b.all_finite())
        throw PositivityLost("positivity lost at t = " + std::to_string(out.t) + ", reduce dt");
    return out;
}

StateDiagnostics diagnose(const Grid& grid, const StatePair& s, const Catalyst& k, const SimConfig& c) {
    StateDiagnostics d{};
    Field ua(s.a.grid), ub(s.a.grid);
    double l3a = 0, l3b = 0;
    const Point x0{c.weight.x0_norm, 0.0, 0.0};
    d.min_ab = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid.volumes[i];
        ua[i] = s.a[i] - 1.0;
        ub[i] = s.b[i] - 1.0;
        d.mass += v * (s.a[i] + s.b[i]);
        d.l2_dist += v * (ua[i] * ua[i] + ub[i] * ub[i]);
        d.l3_sum += v * (s.a[i] * s.a[i] * s.a[i] + s.b[i] * s.b[i] * s.b[i]);
        d.min_ab = std::min({d.min_ab, s.a[i], s.b[i]});
        d.mean_shift += v * (ua[i] + ub[i]);
        double kk = k.at(grid.centers[i], s.t);
        d.dissipation_reaction += v * kk * (s.a[i] + s.b[i]) * (ub[i] - ua[i]) * (ub[i] - ua[i]);
        const auto& x = grid.centers[i];
        double dist2 = (x[0] - x0[0]) * (x[0] - x0[0]) + x[1] * x[1] + x[2] * x[2];
        if (dist2 < c.weight.r * c.weight.r) d.l2_ball += v * (ua[i] * ua[i] + ub[i] * ub[i]);
        l3a += v * std::pow(std::fabs(ua[i]), 3);
        l3b += v * std::pow(std::fabs(ub[i]), 3);
    }
    d.dissipation_grad_a = c.d1 * dirichlet_form(grid, ua);
    d.dissipation_grad_b = c.d2 * dirichlet_form(grid, ub);
    d.l3_norm_a = std::cbrt(l3a * l3a);
    d.l3_norm_b = std::cbrt(l3b * l3b);
    return d;
}

namespace {

struct ChannelSpec {
    const char* name;
    const char* definition;
    const char* reference;
};

const ChannelSpec kBaseChannels[] = {
    {"mass", "integral of a + b", "mass conservation"},
    {"l2_dist", "integral of (a-1)^2 + (b-1)^2", "L2 distance to equilibrium"},
    {"l3_sum", "integral of a^3 + b^3", "L3 bound"},
    {"min_ab", "cellwise minimum of a and b", "minimum principle"},
    {"dissipation_grad_a", "d1 times the discrete Dirichlet form of a - 1", "energy identity"},
    {"dissipation_grad_b", "d2 times the discrete Dirichlet form of b - 1", "energy identity"},
    {"dissipation_reaction", "integral of k (a + b) (b - a)^2", "energy identity"},
    {"energy_residual", "largest |discrete energy balance| over the steps since the previous sample",
     "energy identity"},
    {"mean_shift", "integral of (a - 1) + (b - 1)", "mean-zero shift"},
    {"l2_ball", "integral over the observation ball of (a-1)^2 + (b-1)^2", "observation norm"},
    {"l3_norm_a", "(integral of |a - 1|^3)^(2/3)", "data bound K0"},
    {"l3_norm_b", "(integral of |b - 1|^3)^(2/3)", "data bound K0"},
};

}  // namespace

RunOutput run(const SimConfig& config) {
    config.validate();
    RunOutput out;
    out.config = config;
    out.grid = build_grid(Domain::unit_ball(config.dim), config.resolution);
    auto init = init_state(config, out.grid);
    out.B0 = init.B0;
    out.initial_scale = init.scale;
    out.warnings = init.warnings;

    Catalyst cat(config.catalyst, out.grid->spacing);
    double bound = stability_bound(cat.sup(), init.state);
    double dt = config.dt > 0 ? config.dt : std::min(bound, 0.5 * out.grid->spacing);
    // Land exactly on the snapshot grid.
    const int per_snapshot = std::max(1, static_cast<int>(std::ceil(config.snapshot_every / dt - 1e-9)));
    dt = config.snapshot_every / per_snapshot;
    out.dt = dt;
    if (dt > bound) {
        out.stability_violated = true;
        out.warnings.push_back("dt exceeds the reaction stability bound " + std::to_string(bound));
    }
    const int n_snap = static_cast<int>(std::llround(config.t_end / config.snapshot_every));

    for (const auto& c : kBaseChannels) out.series.add_channel(c.name, c.definition, c.reference);

    Stepper stepper(config, out.grid, dt);
    auto record = [&](const StatePair& s, double residual) {
        auto d = diagnose(*out.grid, s, cat, config);
        out.series.times.push_back(s.t);
        const double vals[] = {d.mass,  d.l2_dist, d.l3_sum, d.min_ab, d.dissipation_grad_a,
                               d.dissipation_grad_b, d.dissipation_reaction, residual, d.mean_shift,
                               d.l2_ball, d.l3_norm_a, d.l3_norm_b};
        for (std::size_t c = 0; c < std::size(vals); ++c) out.series.channels[c].values.push_back(vals[c]);
        if (config.keep_snapshots || config.log_convexity) out.snapshots.push_back(s);
    };

    StatePair s = init.state;
    record(s, 0.0);
    try {
        for (int m = 1; m <= n_snap; ++m) {
            double worst = 0.0;
            for (int j = 0; j < per_snapshot; ++j) {
                s = stepper.step(s);
                ++out.steps;
                worst = std::max(worst, std::fabs(stepper.last_energy_residual()));
            }
            s.t = m * config.snapshot_every;
            record(s, worst);
        }
    } catch (const std::runtime_error& e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace degrd
