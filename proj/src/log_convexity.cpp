#include "degrd/log_convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace degrd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double log_sum_exp(const std::vector<double>& terms) {
    double top = -std::numeric_limits<double>::infinity();
    for (double x : terms) top = std::max(top, x);
    if (!std::isfinite(top)) return top;
    double sum = 0.0;
    for (double x : terms) sum += std::exp(x - top);
    return top + std::log(sum);
}

const StatePair& snapshot_at(const RunOutput& run, double t) {
    for (const auto& s : run.snapshots)
        if (std::fabs(s.t - t) <= 1e-9 * std::max(1.0, t)) return s;
    throw std::out_of_range("no snapshot at t = " + std::to_string(t));
}

std::size_t sample_index(const std::vector<double>& times, double t) {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return i;
    throw std::out_of_range("t = " + std::to_string(t) + " is not a sample time");
}

}  // namespace

TiltedState tilt(const StatePair& state, const WeightParams& p, const Catalyst& catalyst, double t, double d1,
                 double d2) {
    p.validate();
    const GridPtr& grid = state.a.grid;
    if (!grid || grid->dim() != p.dim) throw std::invalid_argument("tilt: grid and weight disagree on dimension");
    if (t < 0 || t > p.T) throw std::invalid_argument("tilt: time outside [0, T]");
    TiltedState ts;
    ts.grid = grid;
    ts.params = p;
    ts.t = t;
    ts.d = {d1, d2, d1, d2};
    const std::size_t n = grid->size();
    ts.u = {Field(grid), Field(grid)};
    for (std::size_t c = 0; c < n; ++c) {
        ts.u[0][c] = state.a[c] - 1.0;
        ts.u[1][c] = state.b[c] - 1.0;
    }
    ts.grad_u = {neumann_gradient(*grid, ts.u[0]), neumann_gradient(*grid, ts.u[1])};
    for (int i = 0; i < 4; ++i) {
        ts.f[i] = ts.v[i] = ts.Phi[i] = ts.eta[i] = ts.lap_Phi[i] = Field(grid);
        ts.grad_Phi[i].assign(n, Point{});
    }
    const double G = p.gamma(t);
    const double peak = psi_peak(p);
    for (std::size_t c = 0; c < n; ++c) {
        const Point& x = grid->centers[c];
        const double psi = eval_psi(p, x);
        const Point g = grad_psi(p, x);
        const double lap = laplacian_psi(p, x);
        const double u1 = ts.u[0][c], u2 = ts.u[1][c];
        const double v1 = catalyst.at(x, state.t) * (u1 + u2 + 2.0) * (u2 - u1);
        for (int i = 0; i < 4; ++i) {
            const double sign = uses_phi3(i) ? -1.0 : 1.0;
            const double phi = sign * psi - peak;
            const double Phi = p.s * phi / G;
            ts.Phi[i][c] = Phi;
            for (int k = 0; k < 3; ++k) ts.grad_Phi[i][c][k] = sign * p.s * g[k] / G;
            ts.lap_Phi[i][c] = sign * p.s * lap / G;
            ts.eta[i][c] = p.s / (G * G) * (-0.5 * std::fabs(phi) + 0.25 * ts.d[i] * p.s * dot(g, g));
            const double w = std::exp(0.5 * Phi);
            ts.f[i][c] = ts.u[species_of(i)][c] * w;
            ts.v[i][c] = (species_of(i) == 0 ? v1 : -v1);
        }
    }
    return ts;
}

QuadraticForms quadratic_forms(const TiltedState& ts) {
    const Grid& g = *ts.grid;
    QuadraticForms q;
    for (int i = 0; i < 4; ++i) {
        const int sp = species_of(i);
        const double d = ts.d[i];
        const Field& f = ts.f[i];
        // grad f_i = e^{Phi/2} (grad u + u grad Phi / 2), exact given the cell gradient of u.
        std::vector<Point> gf(g.size());
        double grad2 = 0, eta_f2 = 0, a = 0;
        for (std::size_t c = 0; c < g.size(); ++c) {
            const double w = std::exp(0.5 * ts.Phi[i][c]);
            const double u = ts.u[sp][c];
            for (int k = 0; k < 3; ++k) gf[c][k] = w * (ts.grad_u[sp][c][k] + 0.5 * u * ts.grad_Phi[i][c][k]);
            const double V = g.volumes[c];
            grad2 += V * dot(gf[c], gf[c]);
            eta_f2 += V * ts.eta[i][c] * f[c] * f[c];
            a += V * (-d * dot(ts.grad_Phi[i][c], gf[c]) - 0.5 * d * ts.lap_Phi[i][c] * f[c]) * f[c];
            const double F = ts.v[i][c] * w;
            q.F2 += V * F * F;
            q.F_dot_f += V * F * f[c];
            q.norm2 += V * f[c] * f[c];
            if (i < 2) q.norm2_12 += V * f[c] * f[c];
        }
        q.Sff += d * grad2 - eta_f2;
        q.Aff += a;

        // Finite-volume -int (Lap f) f: interior fluxes plus the Robin flux
        // d_n f = (d_n Phi / 2) f on the sphere, with f extrapolated to the face.
        double stiff = dirichlet_form(g, f);
        double robin = 0;
        const WeightParams& p = ts.params;
        const double G = p.gamma(ts.t);
        const double sign = uses_phi3(i) ? -1.0 : 1.0;
        const double R = g.domain.radius;
        for (const auto& b : g.boundary) {
            const Point& xc = g.centers[b.cell];
            Point n{b.center[0] / R, b.center[1] / R, b.center[2] / R};
            Point gpsi = grad_psi(p, b.center);
            const double dn_Phi = sign * p.s * dot(gpsi, n) / G;
            Point off{b.center[0] - xc[0], b.center[1] - xc[1], b.center[2] - xc[2]};
            const double fb = f[b.cell] + dot(gf[b.cell], off);
            robin += b.area * 0.5 * dn_Phi * fb * f[b.cell];
        }
        q.Sff_direct += d * (stiff - robin) - eta_f2;
    }
    return q;
}

Derivative differentiate(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = y.size();
    Derivative out{std::vector<double>(n, kNaN), std::vector<double>(n, kNaN)};
    if (n < 3 || t.size() != n) return out;
    auto ok = [&](long i) { return i >= 0 && i < long(n) && std::isfinite(y[i]); };
    for (long i = 0; i < long(n); ++i) {
        if (!ok(i)) continue;
        double fine = kNaN, coarse = kNaN;
        if (ok(i - 1) && ok(i + 1)) {
            fine = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
            coarse = ok(i - 2) && ok(i + 2) ? (y[i + 2] - y[i - 2]) / (t[i + 2] - t[i - 2])
                                            : (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
        } else if (ok(i + 1) && ok(i + 2)) {
            double dt = t[i + 1] - t[i];
            fine = (-3 * y[i] + 4 * y[i + 1] - y[i + 2]) / (2 * dt);
            coarse = (y[i + 1] - y[i]) / dt;
        } else if (ok(i - 1) && ok(i - 2)) {
            double dt = t[i] - t[i - 1];
            fine = (3 * y[i] - 4 * y[i - 1] + y[i - 2]) / (2 * dt);
            coarse = (y[i] - y[i - 1]) / dt;
        }
        out.value[i] = fine;
        if (std::isfinite(fine) && std::isfinite(coarse))
            out.error[i] = std::fabs(fine - coarse) + 1e-12 * std::fabs(fine);
    }
    return out;
}

std::size_t FrequencyTrace::defined() const {
    return std::count_if(N.begin(), N.end(), [](double x) { return std::isfinite(x); });
}

FrequencyTrace frequency_trace(const RunOutput& run, const WeightParams& p, double C0, double C1) {
    p.validate();
    if (run.snapshots.empty()) throw std::invalid_argument("frequency trace needs stored snapshots");
    FrequencyTrace tr;
    tr.params = p;
    tr.C0 = C0;
    tr.C1 = C1;
    Catalyst cat(run.config.catalyst, run.grid->spacing);
    for (const auto& s : run.snapshots) {
        if (s.t > p.T + 1e-12) break;
        auto ts = tilt(s, p, cat, std::min(s.t, p.T), run.config.d1, run.config.d2);
        auto q = quadratic_forms(ts);
        tr.times.push_back(s.t);
        tr.Sff.push_back(q.Sff);
        tr.Sff_direct.push_back(q.Sff_direct);
        tr.Aff.push_back(q.Aff);
        tr.F2.push_back(q.F2);
        tr.F_dot_f.push_back(q.F_dot_f);
        tr.norm2.push_back(q.norm2);
        tr.norm2_12.push_back(q.norm2_12);
        tr.N.push_back(q.norm2 > kNormFloor ? q.Sff / q.norm2 : kNaN);
    }
    std::vector<double> y = tr.norm2;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!(y[i] > kNormFloor)) y[i] = kNaN;
    tr.dnorm2 = differentiate(tr.times, y);
    tr.dN = differentiate(tr.times, tr.N);

    const double h = p.h;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double t = tr.times[i];
        const double yv = y[i];
        tr.energy_residual.push_back(0.5 * tr.dnorm2.value[i] + tr.Sff[i] - tr.F_dot_f[i]);
        if (!std::isfinite(yv)) continue;
        const double round = 1e-10 * (std::fabs(tr.Sff[i]) + yv / h);
        if (tr.Sff[i] < -round) tr.negative_Sff.push_back(t);
        if (tr.F2[i] > C1 * (yv + tr.Sff[i]) + round) tr.prop2_violations.push_back(t);
        if (std::isfinite(tr.dnorm2.value[i])) {
            double lhs = std::fabs(0.5 * tr.dnorm2.value[i] + tr.Sff[i]);
            double rhs = 0.5 * tr.Sff[i] + C1 / h * yv;
            if (lhs > rhs + 0.5 * tr.dnorm2.error[i] + round) tr.two_sided_violations.push_back(t);
        }
        if (std::isfinite(tr.dN.value[i])) {
            double bound = ((1.0 + C0) / p.gamma(t) + C1) * tr.N[i] + 2.0 * C1 / (h * h);
            if (tr.dN.value[i] > bound + tr.dN.error[i] + 1e-10 * std::fabs(bound)) tr.growth_violations.push_back(t);
        }
    }
    return tr;
}

void add_frequency_channels(RunOutput& run, const FrequencyTrace& tr) {
    struct Col {
        const char* name;
        const char* definition;
        const std::vector<double>* values;
    };
    const Col cols[] = {
        {"N_t", "frequency function Sff / ||f||^2 of the tilted components", &tr.N},
        {"tilted_norm2", "||f||^2, sum over the four tilted components", &tr.norm2},
        {"Sff", "sum d_i int |grad f_i|^2 - int eta_i f_i^2", &tr.Sff},
        {"Aff_residual", "discrete value of the antisymmetric form, zero in the continuum", &tr.Aff},
        {"F_norm2", "sum int v_i^2 e^{Phi_i}", &tr.F2},
    };
    for (const auto& c : cols) {
        auto& ch = run.series.channels[run.series.add_channel(c.name, c.definition, "tilted system")];
        ch.values.assign(run.series.times.size(), kNaN);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            ch.values[sample_index(run.series.times, tr.times[i])] = (*c.values)[i];
        }
    }
}

WeightParams resolved_weight(const SimConfig& config, const ConstantLedger& ledger) {
    WeightParams p = config.weight;
    p.dim = config.dim;
    if (p.s == 0) p.s = ledger.s2;
    return p;
}

double log_weight_integral(double C0, double C1, double T, double h, double a, double b, int intervals) {
    if (!(b > a)) throw std::invalid_argument("weight integral: empty interval");
    const double dt = (b - a) / intervals;
    std::vector<double> terms(intervals + 1);
    for (int k = 0; k <= intervals; ++k) {
        double t = a + k * dt;
        terms[k] = t * C1 - (1.0 + C0) * std::log(T - t + h) + ((k == 0 || k == intervals) ? std::log(0.5) : 0.0);
    }
    return log_sum_exp(terms) + std::log(dt);
}

LembpReport lembp_check(const LembpInput& in) {
    const std::size_t n = in.times.size();
    if (n < 5 || in.y.size() != n || in.N.size() != n || in.F1.size() != n || in.F2.size() != n)
        throw std::invalid_argument("lembp: need at least 5 samples with equal-length series");
    if (!(in.t1 < in.t2 && in.t2 < in.t3)) throw std::invalid_argument("lembp: need t1 < t2 < t3");
    if (in.t1 < -1e-12 || in.t3 > in.T + 1e-12) throw std::invalid_argument("lembp: times outside [0, T]");
    if (!(in.h > 0) || in.C0 < 0 || in.C1 < 0) throw std::invalid_argument("lembp: need h > 0, C0, C1 >= 0");
    for (std::size_t i = 0; i < n; ++i)
        if (!(in.y[i] >= 0) || !(in.N[i] >= 0)) throw std::invalid_argument("lembp: y and N must be nonnegative");
    const std::size_t i1 = sample_index(in.times, in.t1), i2 = sample_index(in.times, in.t2),
                      i3 = sample_index(in.times, in.t3);

    LembpReport r;
    auto dy = differentiate(in.times, in.y);
    auto dN = differentiate(in.times, in.N);
    for (std::size_t i = i1; i <= i3; ++i) {
        const double t = in.times[i];
        const double G = in.T - t + in.h;
        const double y = in.y[i], N = in.N[i];
        const double lhs1 = std::fabs(0.5 * dy.value[i] + N * y);
        const double rhs1 = (0.5 * N + in.C0 / G + in.C1) * y + in.F1[i] * y;
        if (lhs1 > rhs1 + 0.5 * dy.error[i] + 1e-12 * (lhs1 + rhs1)) r.hyp1_violations.push_back(t);
        const double rhs2 = ((1.0 + in.C0) / G + in.C1) * N + in.F2[i];
        if (dN.value[i] > rhs2 + dN.error[i] + 1e-12 * std::fabs(rhs2)) r.hyp2_violations.push_back(t);
        if (y > 0) r.fd_error = std::max(r.fd_error, dy.error[i] / y);
        ++r.samples_checked;
    }

    r.M = 3.0 * std::exp(log_weight_integral(in.C0, in.C1, in.T, in.h, in.t2, in.t3) -
                         log_weight_integral(in.C0, in.C1, in.T, in.h, in.t1, in.t2));
    double int_F1 = 0, int_F2 = 0;
    for (std::size_t i = i1; i < i3; ++i) {
        const double dt = in.times[i + 1] - in.times[i];
        int_F1 += 0.5 * dt * (std::fabs(in.F1[i]) + std::fabs(in.F1[i + 1]));
        int_F2 += 0.5 * dt * (std::fabs(in.F2[i]) + std::fabs(in.F2[i + 1]));
    }
    r.D = 3.0 * (1.0 + r.M) * ((in.t3 - in.t1) * (in.C1 + int_F2) + int_F1);

    const double ly1 = std::log(in.y[i1]), ly2 = std::log(in.y[i2]), ly3 = std::log(in.y[i3]);
    const double log_ratio = std::log((in.T - in.t1 + in.h) / (in.T - in.t3 + in.h));
    const double prefactor = r.D + 3.0 * in.C0 * (1.0 + r.M) * log_ratio;
    r.log_lhs = (1.0 + r.M) * ly2;
    r.log_rhs = prefactor + ly3 + r.M * ly1;
    if (in.y[i2] == 0) {
        r.margin = std::numeric_limits<double>::infinity();
    } else if (in.y[i1] == 0 || in.y[i3] == 0) {
        r.margin = -std::numeric_limits<double>::infinity();
    } else {
        // Grouped so that a constant y gives exactly zero.
        r.margin = prefactor + (ly3 - ly2) + r.M * (ly1 - ly2);
    }
    return r;
}

bool ObservationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
}

namespace {

InequalityCheck make_check(std::string id, std::string description, const ExtReal& log_lhs, const ExtReal& log_rhs,
                           double tolerance = 0.0) {
    InequalityCheck c{std::move(id), std::move(description), log_lhs, log_rhs, log_rhs - log_lhs, tolerance, false};
    c.pass = c.margin >= ExtReal::from_double(-tolerance);
    return c;
}

// Both sides vanish: margin zero by convention.
InequalityCheck trivial_check(std::string id, std::string description) {
    return {std::move(id), std::move(description), ExtReal::zero(), ExtReal::zero(), ExtReal::zero(), 0.0, true};
}

}  // namespace

void check_data_hypotheses(const RunOutput& run, double K0) {
    for (const char* name : {"l3_norm_a", "l3_norm_b"}) {
        const auto& ch = run.series.channel(name);
        for (std::size_t i = 0; i < ch.values.size(); ++i)
            if (ch.values[i] > K0)
                throw std::runtime_error(std::string("L3 bound ||u_i||_{L3}^2 <= K0 violated (") + name + " = " +
                                         std::to_string(ch.values[i]) + " at t = " +
                                         std::to_string(run.series.times[i]) + ")");
    }
    Catalyst cat(run.config.catalyst, run.grid->spacing);
    for (const auto& s : run.snapshots) {
        for (std::size_t c = 0; c < run.grid->size(); ++c) {
            const double u1 = s.a[c] - 1.0, u2 = s.b[c] - 1.0;
            const double v1 = cat.at(run.grid->centers[c], s.t) * (u1 + u2 + 2.0) * (u2 - u1);
            const double u2n = u1 * u1 + u2 * u2;
            if (2.0 * v1 * v1 > K0 * (u2n + u2n * u2n) * (1.0 + 1e-12) + 1e-300)
                throw std::runtime_error("pointwise reaction bound |v|^2 <= K0 (|u|^2 + |u|^4) violated at t = " +
                                         std::to_string(s.t));
        }
    }
}

ObservationReport observation_estimate_check(const RunOutput& run, const ConstantLedger& L,
                                             const std::vector<double>& horizons,
                                             const std::vector<std::pair<double, double>>& windows) {
    check_data_hypotheses(run, L.K0);
    const auto& times = run.series.times;
    const auto& dist = run.series.channel("l2_dist").values;
    const auto& ball = run.series.channel("l2_ball").values;
    const ExtReal one = ExtReal::from_double(1.0);
    ObservationReport rep;

    // The interpolation inequality assumes a nonincreasing L2 distance.
    {
        double worst = 0;
        for (std::size_t i = 1; i < dist.size(); ++i) worst = std::max(worst, dist[i] - dist[i - 1]);
        InequalityCheck c{"l2_nonincreasing", "largest increase of ||u||^2 between samples (plain, not logs)",
                          ExtReal::from_double(worst), ExtReal::zero(), ExtReal::from_double(-worst), 1e-8, false};
        c.pass = worst <= c.tolerance;
        rep.checks.push_back(c);
    }

    auto window_check = [&](double t1, double t, const std::string& id) {
        const std::size_t i1 = sample_index(times, t1), i = sample_index(times, t);
        const std::string desc = "(1+M) ln|u(" + std::to_string(t) + ")|^2 <= c (1 + 1/" + std::to_string(t - t1) +
                                 ") + ln|u|_B^2 + M ln|u(" + std::to_string(t1) + ")|^2";
        if (dist[i] == 0) {
            rep.checks.push_back(trivial_check(id, desc));
            return;
        }
        if (ball[i] == 0 || dist[i1] == 0) {
            rep.checks.push_back(make_check(id, desc, ExtReal::from_double(std::log(dist[i])) * (one + L.M),
                                            ExtReal::from_log(std::numeric_limits<double>::max())));
            rep.checks.back().pass = false;
            return;
        }
        ExtReal lhs = (one + L.M) * ExtReal::from_double(std::log(dist[i]));
        ExtReal rhs = L.c * ExtReal::from_double(1.0 + 1.0 / (t - t1)) + ExtReal::from_double(std::log(ball[i])) +
                      L.M * ExtReal::from_double(std::log(dist[i1]));
        rep.checks.push_back(make_check(id, desc, lhs, rhs));
    };
    for (double T : horizons) window_check(0.0, T, "observation_T=" + std::to_string(T));
    for (auto [t1, t] : windows)
        window_check(t1, t, "observation_window=" + std::to_string(t1) + ".." + std::to_string(t));
    return rep;
}

ExtReal log_tilted_norm(const Grid& grid, const StatePair& s, const WeightParams& p, const ExtReal& lambda) {
    if (lambda.sign() <= 0) throw std::invalid_argument("tilted norm: lambda must be positive");
    const double R = grid.domain.radius;
    const double peak = psi_peak(p);
    // psi ~ psi(x0) - H |x - x0|^2 / 2 near x0.
    const double H = 4.0 * p.x0_norm * R / (R * R - p.x0_norm * p.x0_norm);
    const double log_var = -(lambda.log_abs() + std::log(H));  // ln of the Gaussian variance
    const bool narrow = log_var < 2.0 * std::log(grid.spacing / 20.0);

    std::size_t home = 0;
    double best = std::numeric_limits<double>::infinity();
    const Point x0 = p.x0();
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const Point& x = grid.centers[c];
        double d2 = (x[0] - x0[0]) * (x[0] - x0[0]) + (x[1] - x0[1]) * (x[1] - x0[1]);
        if (d2 < best) best = d2, home = c;
    }
    std::vector<double> terms;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const double u1 = s.a[c] - 1.0, u2 = s.b[c] - 1.0;
        const double w = u1 * u1 + u2 * u2;
        if (w == 0) continue;
        if (narrow && c == home) {
            terms.push_back(std::log(w) + 0.5 * grid.dim() * (std::log(2.0 * std::numbers::pi) + log_var));
            continue;
        }
        const double phi1 = eval_psi(p, grid.centers[c]) - peak;
        if (phi1 == 0) {
            terms.push_back(std::log(w * grid.volumes[c]));
            continue;
        }
        ExtReal expo = lambda * ExtReal::from_double(phi1);
        if (!expo.fits_double()) continue;  // e^{expo} is below any representable scale
        terms.push_back(std::log(w * grid.volumes[c]) + expo.to_double());
    }
    double out = log_sum_exp(terms);
    if (!std::isfinite(out)) return ExtReal::from_log(std::numeric_limits<double>::max(), -1);
    return ExtReal::from_double(out);
}

ObservationReport interpolation_step_check(const RunOutput& run, const ConstantLedger& L) {
    const double T = L.inputs.T;
    const double ell_h = std::min(0.25, T / 8.0);
    WeightParams p;
    p.dim = L.inputs.dim;
    p.x0_norm = L.inputs.x0_norm;
    p.r = L.inputs.r;
    p.s = L.s2;
    p.T = T;
    const Grid& grid = *run.grid;
    const ExtReal one = ExtReal::from_double(1.0);
    const ExtReal s = ExtReal::from_double(L.s2);
    const double ln2 = std::log(2.0);

    const auto& sT = snapshot_at(run, T);
    const auto& s1 = snapshot_at(run, T - ell_h);
    const auto& s2 = snapshot_at(run, T - 2 * ell_h);
    // Gamma = T - t + h; at T it is h itself, elsewhere h is far below double resolution of Gamma.
    const double inv_ell = std::exp(-L.log_ell);
    const ExtReal lam_T = s / L.h_ext;
    const ExtReal lam_1 = ExtReal::from_double(L.s2 / (ell_h * (1.0 + inv_ell)));
    const ExtReal lam_2 = ExtReal::from_double(L.s2 / (ell_h * (2.0 + inv_ell)));
    const ExtReal yT = log_tilted_norm(grid, sT, p, lam_T);
    const ExtReal y1 = log_tilted_norm(grid, s1, p, lam_1);
    const ExtReal y2 = log_tilted_norm(grid, s2, p, lam_2);

    const auto& times = run.series.times;
    const auto& dist = run.series.channel("l2_dist").values;
    const auto& ball = run.series.channel("l2_ball").values;
    const double uT = dist[sample_index(times, T)], uB = ball[sample_index(times, T)], u0 = dist[0];

    ObservationReport rep;
    if (u0 == 0) {
        rep.checks.push_back(trivial_check("step_f1", "u = 0"));
        return rep;
    }
    // (|f12(T - ell h)|^2)^{1+M_ell} <= K_ell (2 |f12(T)|^2)(2 |f12(T - 2 ell h)|^2)^{M_ell}
    rep.checks.push_back(make_check(
        "step_three_time", "(1+M_ell) ln|f12(T-ell h)|^2 <= ln K_ell + ln 2|f12(T)|^2 + M_ell ln 2|f12(T-2 ell h)|^2",
        (one + L.M_ell) * y1, L.log_K_ell + ExtReal::from_double(ln2) + yT + L.M_ell * (ExtReal::from_double(ln2) + y2)));
    // |f12(T - 2 ell h)|^2 <= |u(0)|^2
    rep.checks.push_back(make_check("step_initial_bound", "ln|f12(T-2 ell h)|^2 <= ln|u(0)|^2", y2,
                                    ExtReal::from_double(std::log(u0))));
    // |f12(T)|^2 <= |u(T)|_B^2 + e^{-s mu0 / h} |u(0)|^2
    {
        ExtReal tail = ExtReal::from_double(std::log(u0)) - s * ExtReal::from_double(L.geometry.mu0) / L.h_ext;
        double lb = uB > 0 ? std::log(uB) : -std::numeric_limits<double>::infinity();
        ExtReal rhs = tail;
        if (std::isfinite(lb)) {
            // ln(e^{lb} + e^{tail})
            ExtReal gap = tail - ExtReal::from_double(lb);
            rhs = gap.fits_double() ? ExtReal::from_double(log_add(lb, tail.to_double()))
                                    : (gap.sign() < 0 ? ExtReal::from_double(lb) : tail);
        }
        rep.checks.push_back(make_check("step_ball", "ln|f12(T)|^2 <= ln(|u(T)|_B^2 + e^{-s mu0/h} |u(0)|^2)", yT, rhs));
    }
    // |u(T)|^2 <= e^{s mu1 / ((ell+1) h)} |f12(T - ell h)|^2
    if (uT > 0) {
        rep.checks.push_back(make_check("step_unweight", "ln|u(T)|^2 <= s mu1 / ((ell+1) h) + ln|f12(T-ell h)|^2",
                                        ExtReal::from_double(std::log(uT)),
                                        lam_1 * ExtReal::from_double(L.geometry.mu1) + y1));
    } else {
        rep.checks.push_back(trivial_check("step_unweight", "u(T) = 0"));
    }
    return rep;
}

}  // namespace degrd
