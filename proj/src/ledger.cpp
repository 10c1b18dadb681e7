#include "degrd/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace degrd {

double compute_K0(double l3_initial, double k_sup) {
    return std::max(std::pow(4.0 * l3_initial + 4.0, 2.0 / 3.0), 32.0 * k_sup * k_sup);
}

double sobolev_ratio(const Grid& grid, const Field& g) {
    double l6 = 0, l2 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v2 = g[i] * g[i];
        l2 += grid.volumes[i] * v2;
        l6 += grid.volumes[i] * v2 * v2 * v2;
    }
    double den = l2 + dirichlet_form(grid, g);
    if (den <= 0) return 0.0;
    return std::cbrt(l6) / den;
}

namespace {

struct Bump {
    Point center;
    double width, amplitude;
};

double bump_at(const Bump& b, const Point& x) {
    double d2 = 0;
    for (int k = 0; k < 3; ++k) d2 += (x[k] - b.center[k]) * (x[k] - b.center[k]);
    return b.amplitude * std::exp(-d2 / (2.0 * b.width * b.width));
}

Field field_from(const GridPtr& grid, auto fn) {
    Field f(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) f[i] = fn(grid->centers[i]);
    return f;
}

}  // namespace

Field sobolev_trial_field(const GridPtr& grid, std::uint64_t seed, int index) {
    if (index == 0) return Field(grid, 1.0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss;
    const int dim = grid->dim();
    const double R = grid->domain.radius;

    auto random_direction = [&]() {
        Point d{1.0, 0.0, 0.0};
        if (dim == 2) {
            double a = 2.0 * std::numbers::pi * uni(rng);
            d = {std::cos(a), std::sin(a), 0.0};
        }
        return d;
    };

    const int kind = index % 3;
    double offset = kind == 1 ? 0.0 : 2.0 * uni(rng) - 1.0;
    struct Wave {
        Point dir;
        double k, phase, amp;
    };
    std::vector<Wave> waves;
    if (kind != 1) {
        int n = 1 + static_cast<int>(uni(rng) * 4);
        for (int j = 0; j < n; ++j)
            waves.push_back({random_direction(), 1.0 + 11.0 * uni(rng), 2.0 * std::numbers::pi * uni(rng),
                             0.5 * gauss(rng)});
    }
    std::vector<Bump> bumps;
    if (kind != 0) {
        Point dir = random_direction();
        double rad = uni(rng) < 0.3 ? R : R * std::pow(uni(rng), 1.0 / dim);
        Point c{dir[0] * rad, dir[1] * rad, 0.0};
        double width = 0.02 * std::pow(30.0, uni(rng));
        bumps.push_back({c, width, (uni(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * uni(rng))});
    }
    return field_from(grid, [&](const Point& x) {
        double v = offset;
        for (const auto& w : waves) {
            double dot = w.dir[0] * x[0] + w.dir[1] * x[1];
            v += w.amp * std::cos(w.k * dot + w.phase);
        }
        for (const auto& b : bumps) v += bump_at(b, x);
        return v;
    });
}

SobolevEstimate compute_sobolev_constant(const GridPtr& grid, std::uint64_t seed, int trials) {
    SobolevEstimate est;
    double best = 0.0;
    for (int i = 0; i < trials; ++i) best = std::max(best, sobolev_ratio(*grid, sobolev_trial_field(grid, seed, i)));
    // Single bumps centered on the boundary and at the origin, on top of a constant.
    const double R = grid->domain.radius;
    const double offsets[] = {0.0, 0.25, 0.5, 1.0, 2.0};
    int scanned = 0;
    for (double cx : {-R, 0.0}) {
        for (int j = 0; j < 24; ++j) {
            double width = 0.01 * std::pow(100.0, j / 23.0);
            Bump b{{cx, 0.0, 0.0}, width, 1.0};
            for (double off : offsets) {
                auto f = field_from(grid, [&](const Point& x) { return off + bump_at(b, x); });
                best = std::max(best, sobolev_ratio(*grid, f));
                ++scanned;
            }
        }
    }
    est.best_ratio = best;
    est.trials = trials + scanned;
    est.value = std::max(1.0, 1.1 * best);
    return est;
}

LedgerInputs ledger_inputs(const SimConfig& config) {
    config.validate();
    LedgerInputs in;
    in.dim = config.dim;
    in.resolution = config.resolution;
    in.d1 = config.d1;
    in.d2 = config.d2;
    in.x0_norm = config.weight.x0_norm;
    in.r = config.weight.r;
    Catalyst cat(config.catalyst, 0.0);
    in.k_sup = cat.sup();
    in.k_floor = cat.floor_on_ball();
    in.T = config.weight.T;
    in.seed = config.seed;
    auto grid = build_grid(Domain::unit_ball(config.dim), config.resolution);
    auto init = init_state(config, grid);
    in.B0 = init.B0;
    double l3 = 0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double a = init.state.a[i], b = init.state.b[i];
        l3 += grid->volumes[i] * (a * a * a + b * b * b);
    }
    in.l3_initial = l3;
    return in;
}

ConstantLedger compute_analysis_constants(const LedgerInputs& in) {
    if (!(in.d1 > 0 && in.d2 > 0)) throw std::invalid_argument("ledger: diffusivities must be positive");
    if (!(in.B0 > 0)) throw std::invalid_argument("ledger: B0 must be positive");
    ConstantLedger L;
    L.inputs = in;
    WeightParams wp;
    wp.dim = in.dim;
    wp.x0_norm = in.x0_norm;
    wp.r = in.r;
    L.geometry = geometry_constants(wp, in.probe_resolution);
    const auto& g = L.geometry;

    auto grid = build_grid(Domain::unit_ball(in.dim), in.resolution);
    L.lambda1 = neumann_eigenvalue_1(*grid).value;
    L.Cp = 1.0 / L.lambda1;
    L.C_Sob = compute_sobolev_constant(grid, in.seed, in.sobolev_trials).value;
    L.K0 = compute_K0(in.l3_initial, in.k_sup);
    L.B0 = in.B0;

    const double dmax = std::max(in.d1, in.d2), dmin = std::min(in.d1, in.d2);
    L.s0 = std::min(1.0, 2.0 / (g.c1 * dmax));
    L.C2 = dmax * (g.max_hess_psi + g.max_grad_laplacian_psi);
    L.C3 = std::max(2.5 * L.C2, 0.5 * L.C2 * dmax);
    L.C4 = g.max_laplacian_psi;
    L.C5 = std::max(dmax * L.C4, L.C4 * L.C4 * (in.d1 * in.d1 + in.d2 * in.d2));
    L.C6 = g.max_psi + dmax * g.max_grad_psi_sq;
    L.C7 = dmax * L.C6 / (g.c2 * g.c3 * g.c3);
    L.s1 = 0.375 / (0.5 * dmax * g.max_hess_psi + L.C5);
    L.s2 = std::min({L.s0, L.s1, 1.0 / (L.C3 + L.C5), g.c2 / dmin});
    L.C0 = 1.0 - dmin * L.s2 / (4.0 * g.c2);
    L.C1 = std::max({1.0, L.C3 + L.C5 + L.C7, 4.0 * L.K0 * (1.0 + L.K0 * L.C_Sob),
                     4.0 * L.K0 * L.K0 * L.C_Sob / dmin});
    if (!(L.s2 > 0 && L.s2 <= 1)) throw std::runtime_error("ledger: s2 outside (0, 1]; inconsistent geometry sampling");
    if (!(L.C0 > 0 && L.C0 < 1)) throw std::runtime_error("ledger: C0 outside (0, 1); inconsistent geometry sampling");
    return L;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// ln(e^x - 1) for x > 0.
double log_expm1(double x) { return x > 30 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

// Integral of e^{f(u)} over [0, U] with a breakpoint, by adaptive Gauss-Kronrod.
double integrate_exp(auto f, double U, double breakpoint) {
    auto g = [&](double u) { return std::exp(f(u)); };
    double sum = 0.0, err = 0.0;
    double a = 0.0;
    for (double b : {breakpoint, U}) {
        if (!(b > a) || b > U) continue;
        sum += gauss_kronrod<double, 61>::integrate(g, a, b, 12, 1e-11, &err);
        a = b;
    }
    return sum;
}

}  // namespace

double log_M_ell_bound(double C0, double C1, double log_ell) {
    double L = log_ell + std::log1p(std::exp(-log_ell));
    return std::log(3.0) + C1 + C0 * L - std::log(-std::expm1(C0 * std::log(2.0 / 3.0)));
}

double log_M_ell(double C0, double kappa, double log_ell) {
    // With t = T - h(e^u - 1) the common factor e^{C1 T} h^{-C0} cancels and
    //   J1 = int_0^{ln(1+ell)} exp(-C0 u - (kappa/ell) (e^u - 1)) du
    //   J2 = e^{-C0 ln(1+ell) - kappa} int_0^W exp(-C0 w - kappa (1 + 1/ell)(e^w - 1)) dw
    // with W = ln((1 + 2 ell)/(1 + ell)).
    if (!(kappa > 0)) throw std::invalid_argument("M_ell: kappa must be positive");
    const double L1 = log_ell + std::log1p(std::exp(-log_ell));
    const double log_rate = std::log(kappa) - log_ell;  // ln(kappa / ell)
    auto f1 = [&](double u) { return -C0 * u - (u > 0 ? std::exp(log_rate + log_expm1(u)) : 0.0); };
    // Past these points the integrand is below e^-60 of its value at 0.
    double U1 = std::min({L1, 60.0 / C0, std::log1p(std::exp(std::log(60.0) - log_rate))});
    double u_star = std::log1p(std::exp(-log_rate));
    double J1 = integrate_exp(f1, U1, std::min(u_star, U1));

    const double inv_ell = std::exp(-log_ell);
    const double W = std::log1p(1.0 / (1.0 + inv_ell));
    auto f2 = [&](double w) { return -C0 * w - kappa * (1.0 + inv_ell) * std::expm1(w); };
    double U2 = std::min(W, std::log1p(80.0 / kappa));
    double I2 = integrate_exp(f2, U2, std::min(U2, std::log1p(1.0 / kappa)));
    double log_J2 = -C0 * L1 - kappa + std::log(I2);
    return std::log(3.0) + std::log(J1) - log_J2;
}

double search_log_ell(double C0, double C1, double mu0, double mu1) {
    auto excess = [&](double L) {  // L = ln(ell + 1)
        double log_ell = L + std::log1p(-std::exp(-L));
        return std::log(mu1) + softplus(log_M_ell_bound(C0, C1, log_ell)) - L - std::log(mu0 / 2.0);
    };
    double lo = std::log(3.0);
    if (excess(lo) <= 0) return std::log(2.0);
    double hi = 2.0 * lo;
    while (excess(hi) > 0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw std::runtime_error("ledger: no ell satisfies the interpolation-depth condition");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0 ? lo : hi) = mid;
    }
    if (hi < 700) {
        double ell = std::max(2.0, std::ceil(std::expm1(hi) - 1e-9));
        while (excess(std::log1p(ell)) > 0) ell += 1.0;
        return std::log(ell);
    }
    // ell + 1 = e^hi; integer rounding is far below the resolution of ln(ell).
    return hi + std::log1p(-std::exp(-hi));
}

ExtReal ConstantLedger::exp_or_zero(const ExtReal& x) { return ExtReal::exp(x); }

void compute_chain(ConstantLedger& L) {
    const auto& g = L.geometry;
    const double T = L.inputs.T;
    if (!(T > 0)) throw std::invalid_argument("ledger: T must be positive");
    if (!(L.inputs.k_floor > 0)) throw std::invalid_argument("ledger: k0 on the observation ball must be positive");
    const ExtReal one = ExtReal::from_double(1.0);
    const ExtReal two = ExtReal::from_double(2.0);
    const double ln2 = std::log(2.0);

    L.log_ell = search_log_ell(L.C0, L.C1, g.mu0, g.mu1);
    L.ell = ExtReal::from_log(L.log_ell);
    const double ell_h = std::min(0.25, T / 8.0);
    L.h_ext = ExtReal::from_log(std::log(ell_h) - L.log_ell);
    L.h = L.h_ext.to_double();
    // ln(2 ell + 1) and 1 + 2 ell + 8 ell^2
    const double log_2ell1 = L.log_ell + std::log(2.0 + std::exp(-L.log_ell));
    const ExtReal poly = one + two * L.ell + ExtReal::from_double(8.0) * L.ell * L.ell;

    auto chain_at = [&](double kappa, ExtReal& M, ExtReal& D, ExtReal& logK) {
        M = ExtReal::from_log(log_M_ell(L.C0, kappa, L.log_ell));
        D = ExtReal::from_double(3.0 * L.C1) * (one + M) * poly;
        logK = D + ExtReal::from_double(3.0 * L.C0 * log_2ell1) * (one + M);
    };
    chain_at(L.C1 * ell_h, L.M_ell, L.D_ell, L.log_K_ell);
    L.M_ell_bound = ExtReal::from_log(log_M_ell_bound(L.C0, L.C1, L.log_ell));
    // M_ell grows with kappa = C1 ell h; its supremum over h < min(1/(2 ell), T/(4 ell))
    // and all T sits at kappa = C1 / 2.
    chain_at(0.5 * L.C1, L.M_sup, L.D_sup, L.log_K_sup);

    const ExtReal s = ExtReal::from_double(L.s2);
    L.mu2 = two * s * ExtReal::from_double(g.mu0) * L.ell;
    L.mu3 = max(L.mu2, (one + L.M_sup) * ExtReal::from_double(ln2) + L.log_K_sup);
    L.M = one + two * L.M_sup;
    L.c = two * L.mu3 + ExtReal::from_double(std::log(4.0));

    const double dmin_rate = std::max(L.Cp / (2.0 * L.inputs.d1), L.Cp / (2.0 * L.inputs.d2));
    L.beta1 = std::max(dmin_rate, 1.0 / (8.0 * L.B0 * L.inputs.k_floor));

    // theta = (1 + x)^(-1/M) with x = e^{-2c} M / beta1, so |ln theta| = log1p(x) / M.
    const ExtReal log_M = L.M.log();
    const ExtReal log_x = -(two * L.c) + log_M - ExtReal::from_double(std::log(L.beta1));
    ExtReal log_log1p_x;
    if (!log_x.fits_double() || log_x.to_double() < -30.0) {
        log_log1p_x = log_x;  // log1p(x) = x to double precision
    } else {
        double lx = log_x.to_double();
        double l1p = lx > 30.0 ? lx + std::log1p(std::exp(-lx)) : std::log1p(std::exp(lx));
        log_log1p_x = ExtReal::from_double(std::log(l1p));
    }
    L.log_abs_log_theta = log_log1p_x - log_M;
    L.log_log_gamma = L.log_abs_log_theta;
    L.log_beta = L.log_abs_log_theta - ExtReal::from_double(ln2);
}

ConstantLedger compute_ledger(const LedgerInputs& in) {
    auto L = compute_analysis_constants(in);
    compute_chain(L);
    return L;
}

std::vector<LedgerEntry> ConstantLedger::entries() const {
    auto d = [](double v) { return ExtReal::from_double(v); };
    const auto& g = geometry;
    std::vector<LedgerEntry> e = {
        {"c01", d(g.c01), Encoding::plain, "sampled min of (psi(x0) - psi)/|grad psi|^2 near x0, / 1.05",
         "quadratic sandwich near the peak of psi"},
        {"c02", d(g.c02), Encoding::plain, "sampled max of (psi(x0) - psi)/|grad psi|^2 near x0, * 1.05",
         "quadratic sandwich near the peak of psi"},
        {"c1", d(g.c1), Encoding::plain, "max(1.05 * sampled max |grad phi_i|^2/|phi_i|, 1/c01)",
         "gradient bound of the shifted weights"},
        {"c2", d(g.c2), Encoding::plain, "max(1.05 * sampled max |phi_i|/|grad phi_i|^2, c02)",
         "gradient lower bound on the annulus"},
        {"c3", d(g.c3), Encoding::plain, "sampled min of 2 psi over |x| <= rho, / 1.05", "separation of phi_3 and phi_1"},
        {"rho", d(g.rho), Encoding::plain, "(|x0| + R) / 2", "inner radius of the annulus"},
        {"mu0", d(g.mu0), Encoding::plain, "sampled min of psi(x0) - psi off B(x0, r), / 1.05",
         "decay of the weight off the observation ball"},
        {"mu1", d(g.mu1), Encoding::plain, "2 |x0| R", "sup of -phi_1"},
        {"lambda1", d(lambda1), Encoding::plain, "smallest nonzero discrete Neumann eigenvalue", "Poincare-Wirtinger"},
        {"Cp", d(Cp), Encoding::plain, "1 / lambda1", "Poincare-Wirtinger constant"},
        {"C_Sob", d(C_Sob), Encoding::plain, "max(1, 1.1 * max sampled (int g^6)^(1/3) / (int g^2 + int |grad g|^2))",
         "H1 into L6 embedding, per component"},
        {"K0", d(K0), Encoding::plain, "max([4 int(a0^3 + b0^3) + 4]^(2/3), 32 sup(k)^2)", "data bound"},
        {"B0", d(B0), Encoding::plain, "cellwise min of a0 and b0", "minimum principle floor"},
        {"C2", d(C2), Encoding::plain, "max d * (max |Hess psi| + max |grad lap psi|)", "commutator derivative bound"},
        {"C3", d(C3), Encoding::plain, "max(5 C2 / 2, C2 * max d / 2)", "commutator Young-inequality constant"},
        {"C4", d(C4), Encoding::plain, "max |lap psi|", "Laplacian of the weight"},
        {"C5", d(C5), Encoding::plain, "max(max d * C4, C4^2 (d1^2 + d2^2))", "boundary commutator constant"},
        {"C6", d(C6), Encoding::plain, "max psi + max d * max |grad psi|^2", "bound on eta_i off the annulus"},
        {"C7", d(C7), Encoding::plain, "max d * C6 / (c2 c3^2)", "absorption off the annulus"},
        {"s0", d(s0), Encoding::plain, "min(1, 2 / (c1 * max d))", "sign of eta_i"},
        {"s1", d(s1), Encoding::plain, "(3/8) / (max d * max |Hess psi| / 2 + C5)", "commutator positivity"},
        {"s2", d(s2), Encoding::plain, "min(s0, s1, 1 / (C3 + C5), c2 / min d)", "convexity parameter s"},
        {"C0", d(C0), Encoding::plain, "1 - min d * s2 / (4 c2)", "frequency growth, 1/Gamma coefficient"},
        {"C1", d(C1), Encoding::plain, "max(1, C3 + C5 + C7, 4 K0 (1 + K0 C_Sob), 4 K0^2 C_Sob / min d)",
         "frequency growth, constant coefficient"},
        {"ell", ell, Encoding::plain,
         "smallest integer > 1 with mu1 (1 + 3 e^C1 (ell+1)^C0 / (1 - (2/3)^C0)) / (ell + 1) <= mu0 / 2",
         "interpolation depth"},
        {"h", h_ext, Encoding::plain, "min(1 / (2 ell), T / (4 ell)) / 2", "time shift of Gamma"},
        {"M_ell", M_ell, Encoding::plain, "3 J(T - ell h, T) / J(T - 2 ell h, T - ell h), Gauss-Kronrod",
         "three-time interpolation exponent"},
        {"M_ell_bound", M_ell_bound, Encoding::plain, "3 e^C1 (ell+1)^C0 / (1 - (2/3)^C0)",
         "closed-form bound on M_ell"},
        {"D_ell", D_ell, Encoding::plain, "3 C1 (1 + M_ell)(1 + 2 ell + 8 ell^2)", "interpolation prefactor exponent"},
        {"K_ell", log_K_ell, Encoding::exp, "e^D_ell (2 ell + 1)^(3 C0 (1 + M_ell))", "interpolation prefactor"},
        {"M_sup", M_sup, Encoding::plain, "M_ell at C1 ell h = C1 / 2 (sup over admissible h and T)",
         "h-uniform interpolation exponent"},
        {"K_sup", log_K_sup, Encoding::exp, "K_ell with M_sup", "h-uniform interpolation prefactor"},
        {"mu2", mu2, Encoding::plain, "2 s2 mu0 ell", "large-h branch exponent"},
        {"mu3", mu3, Encoding::plain, "max(mu2, (1 + M_sup) ln 2 + ln K_sup)", "all-h exponent"},
        {"M", M, Encoding::plain, "1 + 2 M_sup", "observation-estimate exponent"},
        {"c", c, Encoding::plain, "2 mu3 + ln 4", "observation-estimate constant"},
        {"beta1", d(beta1), Encoding::plain, "max(Cp / (2 d1), Cp / (2 d2), 1 / (8 B0 k0))", "dissipation lower bound"},
        {"theta", log_abs_log_theta, Encoding::exp_neg_exp, "(1 + e^(-2c) M / beta1)^(-1/M)", "two-step contraction"},
        {"gamma", log_log_gamma, Encoding::exp_exp, "1 / theta", "decay prefactor"},
        {"beta", log_beta, Encoding::exp, "|ln theta| / 2", "decay rate"},
    };
    return e;
}

nlohmann::json ext_to_json(const ExtReal& v) {
    if (v.fits_double()) return v.to_double();
    return v.str(12);
}

namespace {

std::string encoding_name(Encoding e) {
    switch (e) {
        case Encoding::plain: return "plain";
        case Encoding::exp: return "exp";
        case Encoding::exp_neg_exp: return "exp-neg-exp";
        case Encoding::exp_exp: return "exp-exp";
    }
    return "?";
}

// The constant itself as JSON: a number when possible, otherwise a closed expression.
nlohmann::json entry_value(const LedgerEntry& e) {
    switch (e.encoding) {
        case Encoding::plain: return ext_to_json(e.value);
        case Encoding::exp: {
            if (!e.value.fits_double()) return "exp(" + e.value.str(12) + ")";
            return ext_to_json(ExtReal::from_log(e.value.to_double()));
        }
        case Encoding::exp_neg_exp: {
            if (!e.value.fits_double()) return "exp(-exp(" + e.value.str(12) + "))";
            double gap = std::exp(e.value.to_double());
            if (gap > 1e-12) return std::exp(-gap);
            return "1 - " + ExtReal::from_log(e.value.to_double()).str(12);
        }
        case Encoding::exp_exp: {
            if (!e.value.fits_double()) return "exp(exp(" + e.value.str(12) + "))";
            double lg = std::exp(e.value.to_double());
            if (lg > 1e-12) return ext_to_json(ExtReal::from_log(lg));
            return "1 + " + ExtReal::from_log(e.value.to_double()).str(12);
        }
    }
    return nullptr;
}

}  // namespace

nlohmann::json ConstantLedger::to_json() const {
    nlohmann::json out;
    out["format_version"] = 1;
    out["inputs"] = {{"dim", inputs.dim},       {"resolution", inputs.resolution}, {"d1", inputs.d1},
                     {"d2", inputs.d2},         {"x0", inputs.x0_norm},            {"r", inputs.r},
                     {"k_sup", inputs.k_sup},   {"k0", inputs.k_floor},           {"B0", inputs.B0},
                     {"l3_initial", inputs.l3_initial}, {"T", inputs.T},           {"seed", inputs.seed}};
    auto arr = nlohmann::json::array();
    for (const auto& e : entries()) {
        nlohmann::json j = {{"name", e.name},
                            {"value", entry_value(e)},
                            {"provenance", e.provenance},
                            {"reference", e.reference}};
        if (e.encoding != Encoding::plain) {
            j["encoding"] = encoding_name(e.encoding);
            j["stored"] = ext_to_json(e.value);
        }
        arr.push_back(j);
    }
    out["constants"] = arr;
    return out;
}

bool ledger_is_reproducible(const ConstantLedger& ledger) {
    auto again = compute_ledger(ledger.inputs);
    auto a = ledger.entries(), b = again.entries();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].encoding != b[i].encoding) return false;
        if (a[i].value.sign() != b[i].value.sign()) return false;
        double x = a[i].value.log_abs(), y = b[i].value.log_abs();
        if (std::memcmp(&x, &y, sizeof x) != 0) return false;
    }
    return true;
}

}  // namespace degrd
