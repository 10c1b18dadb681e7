#include "degrd/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace degrd {

void WeightParams::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("weight: unsupported dimension " + std::to_string(dim));
    const double R = radius();
    if (!(x0_norm > 0)) throw std::invalid_argument("weight: |x0| must be positive (psi vanishes identically at x0 = 0)");
    if (!(r > 0)) throw std::invalid_argument("weight: observation radius must be positive");
    if (!(x0_norm + r < R)) throw std::invalid_argument("weight: B(x0, r) must lie inside the domain (|x0| + r < R)");
    if (!(s > 0 && s <= 1)) throw std::invalid_argument("weight: s must lie in (0, 1]");
    if (!(h > 0 && h <= 1)) throw std::invalid_argument("weight: h must lie in (0, 1]");
    if (!(T > 0)) throw std::invalid_argument("weight: T must be positive");
}

namespace {

struct PsiParts {
    double a, R, den, poly;  // den = a^2 + R^2 - 2 a x1, poly = R^2 - |x|^2
};

PsiParts parts(const WeightParams& p, const Point& x) {
    const double R = p.radius();
    double norm2 = 0.0;
    for (int k = 0; k < p.dim; ++k) norm2 += x[k] * x[k];
    if (norm2 > R * R * (1.0 + 2e-12)) throw std::domain_error("psi: point lies outside the closed ball");
    const double a = p.x0_norm;
    return {a, R, a * a + R * R - 2.0 * a * x[0], R * R - norm2};
}

}  // namespace

double psi_peak(const WeightParams& p) { return 2.0 * p.x0_norm * p.radius(); }

double eval_psi(const WeightParams& p, const Point& x) {
    auto q = parts(p, x);
    return 2.0 * q.a * q.R * q.poly / q.den;
}

Point grad_psi(const WeightParams& p, const Point& x) {
    auto q = parts(p, x);
    Point g{0.0, 0.0, 0.0};
    const double c = 4.0 * q.a * q.R;
    for (int k = 0; k < p.dim; ++k) g[k] = -c * x[k] / q.den;
    g[0] += q.poly * 4.0 * q.a * q.a * q.R / (q.den * q.den);
    return g;
}

Mat3 hess_psi(const WeightParams& p, const Point& x) {
    auto q = parts(p, x);
    Mat3 H{};
    const double pre = 2.0 * q.a * q.R;
    const double D = q.den;
    for (int j = 0; j < p.dim; ++j) {
        for (int k = 0; k < p.dim; ++k) {
            double v = j == k ? -2.0 / D : 0.0;
            if (j == 0) v -= 4.0 * q.a * x[k] / (D * D);
            if (k == 0) v -= 4.0 * q.a * x[j] / (D * D);
            if (j == 0 && k == 0) v += 8.0 * q.a * q.a * q.poly / (D * D * D);
            H[j][k] = pre * v;
        }
    }
    return H;
}

double laplacian_psi(const WeightParams& p, const Point& x) {
    auto q = parts(p, x);
    const double D = q.den;
    return 2.0 * q.a * q.R *
           (-2.0 * p.dim / D - 8.0 * q.a * x[0] / (D * D) + 8.0 * q.a * q.a * q.poly / (D * D * D));
}

Point grad_laplacian_psi(const WeightParams& p, const Point& x) {
    auto q = parts(p, x);
    const double a = q.a, D = q.den;
    const double D2 = D * D, D3 = D2 * D, D4 = D3 * D;
    const double pre = 2.0 * a * q.R;
    Point g{0.0, 0.0, 0.0};
    for (int j = 0; j < p.dim; ++j) g[j] = pre * (-16.0 * a * a * x[j] / D3);
    g[0] += pre * (-4.0 * p.dim * a / D2 - 8.0 * a / D2 - 32.0 * a * a * x[0] / D3 +
                   48.0 * a * a * a * q.poly / D4);
    return g;
}

PhiEta eval_Phi_eta(const WeightParams& p, int which, const Point& x, double t, double d1, double d2) {
    if (which < 1 || which > 4) throw std::invalid_argument("eval_Phi_eta: component must be 1..4");
    if (t < 0 || t > p.T) throw std::invalid_argument("eval_Phi_eta: time outside [0, T]");
    const double psi = eval_psi(p, x);
    const double peak = psi_peak(p);
    const double phi = which <= 2 ? psi - peak : -psi - peak;
    auto g = grad_psi(p, x);
    const double g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    const double d = which % 2 == 1 ? d1 : d2;
    const double G = p.gamma(t);
    return {p.s * phi / G, p.s / (G * G) * (-0.5 * std::fabs(phi) + 0.25 * d * p.s * g2)};
}

WeightFields weight_fields(const WeightParams& p, const GridPtr& grid) {
    if (grid->dim() != p.dim) throw std::invalid_argument("weight_fields: grid and parameters disagree on dimension");
    WeightFields w{Field(grid), Field(grid), Field(grid), Field(grid), {}, {}};
    const double peak = psi_peak(p);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const Point& x = grid->centers[i];
        double v = eval_psi(p, x);
        w.psi[i] = v;
        w.phi1[i] = v - peak;
        w.phi3[i] = -v - peak;
        w.laplacian_psi[i] = laplacian_psi(p, x);
        w.grad_psi.push_back(grad_psi(p, x));
        w.hess_psi.push_back(hess_psi(p, x));
    }
    return w;
}

std::vector<Point> geometry_samples(const WeightParams& p, int count) {
    using std::numbers::pi;
    const double R = p.radius();
    const double a = p.x0_norm;
    std::vector<Point> pts;
    if (p.dim == 1) {
        for (int i = 0; i < count; ++i) pts.push_back({-R + 2.0 * R * i / (count - 1), 0.0, 0.0});
        pts.push_back({a - p.r, 0.0, 0.0});
        pts.push_back({a + p.r, 0.0, 0.0});
        pts.push_back({(a + R) / 2, 0.0, 0.0});
        pts.push_back({-(a + R) / 2, 0.0, 0.0});
        pts.push_back({a, 0.0, 0.0});
        return pts;
    }
    const int side = static_cast<int>(std::ceil(std::sqrt(double(count))));
    for (int i = 0; i < side; ++i) {
        double rr = R * i / (side - 1);
        for (int j = 0; j < side; ++j) {
            double th = pi * j / (side - 1);
            pts.push_back({rr * std::cos(th), rr * std::sin(th), 0.0});
            if (i == 0) break;
        }
    }
    const double rho = (a + R) / 2;
    for (int j = 0; j < 4 * side; ++j) {
        double al = pi * j / (4 * side - 1);
        pts.push_back({a + p.r * std::cos(al), p.r * std::sin(al), 0.0});
        pts.push_back({rho * std::cos(al), rho * std::sin(al), 0.0});
    }
    pts.push_back({a, 0.0, 0.0});
    return pts;
}

std::vector<Point> neighborhood_samples(const WeightParams& p, int count) {
    using std::numbers::pi;
    const double a = p.x0_norm;
    const double rad = (p.radius() - a) / 2;
    std::vector<Point> pts;
    if (p.dim == 1) {
        for (int i = 1; i <= count / 2; ++i) {
            double d = rad * i / (count / 2);
            pts.push_back({a - d, 0.0, 0.0});
            pts.push_back({a + d, 0.0, 0.0});
        }
        return pts;
    }
    const int side = static_cast<int>(std::ceil(std::sqrt(double(count))));
    for (int i = 1; i <= side; ++i) {
        double d = rad * i / side;
        for (int j = 0; j < side; ++j) {
            double al = pi * j / (side - 1);
            pts.push_back({a + d * std::cos(al), d * std::sin(al), 0.0});
        }
    }
    return pts;
}

namespace {

double norm2(const Point& g) { return g[0] * g[0] + g[1] * g[1] + g[2] * g[2]; }

double dist(const Point& x, const Point& y) {
    return std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) + (x[2] - y[2]) * (x[2] - y[2]));
}

// Past this the sampled ratio is treated as unbounded.
constexpr double kRatioCeiling = 1e12;

GeometryConstants sample_constants(const WeightParams& p, int count) {
    const double R = p.radius();
    const double a = p.x0_norm;
    const double peak = psi_peak(p);
    const double f = kGeometrySafety;
    const Point x0 = p.x0();
    GeometryConstants gc;
    gc.rho = (a + R) / 2;
    gc.mu1 = peak;
    gc.exclusion = p.dim == 1 ? 2.0 * R / (count - 1) : R / (std::ceil(std::sqrt(double(count))) - 1);

    // Limit of (psi(x0) - psi)/|grad psi|^2 at x0, from the isotropic Hessian there.
    const double hess_at_peak = 4.0 * a * R / (R * R - a * a);
    const double limit_ratio = 1.0 / (2.0 * hess_at_peak);
    double c01 = limit_ratio, c02 = limit_ratio;
    for (const auto& x : neighborhood_samples(p, count)) {
        double g2 = norm2(grad_psi(p, x));
        double gap = peak - eval_psi(p, x);
        if (g2 <= 0) continue;
        c01 = std::min(c01, gap / g2);
        c02 = std::max(c02, gap / g2);
    }
    gc.c01 = c01 / f;
    gc.c02 = c02 * f;

    double c1 = 0.0, c2 = 0.0, c3 = std::numeric_limits<double>::infinity();
    double mu0 = std::numeric_limits<double>::infinity();
    double mg2 = 0, mh = 0, ml = 0, mgl = 0;
    auto samples = geometry_samples(p, count);
    gc.samples = static_cast<int>(samples.size());
    for (const auto& x : samples) {
        double psi = eval_psi(p, x);
        double g2 = norm2(grad_psi(p, x));
        double abs_phi1 = peak - psi;
        double abs_phi3 = peak + psi;
        double rn = std::sqrt(norm2(x));
        bool near_peak = dist(x, x0) < gc.exclusion;
        bool annulus = rn >= gc.rho;

        c1 = std::max(c1, g2 / abs_phi3);
        if (!near_peak) c1 = std::max(c1, g2 / abs_phi1);

        if (annulus) {
            if (g2 * kRatioCeiling < abs_phi3 || g2 * kRatioCeiling < abs_phi1)
                throw std::runtime_error("geometry: |phi_i| <= c2 |grad phi_i|^2 on the annulus fails; gradient vanishes (|x0| too small)");
            c2 = std::max({c2, abs_phi1 / g2, abs_phi3 / g2});
        }
        if (rn <= gc.rho) {
            c3 = std::min(c3, 2.0 * psi);
            if (!near_peak) {
                if (g2 * kRatioCeiling < abs_phi1)
                    throw std::runtime_error("geometry: |phi_1| <= c2 |grad phi_1|^2 off the annulus fails; ratio unbounded");
                c2 = std::max(c2, abs_phi1 / g2);
            }
        }
        if (dist(x, x0) >= p.r * (1.0 - 1e-12)) mu0 = std::min(mu0, abs_phi1);

        mg2 = std::max(mg2, g2);
        auto H = hess_psi(p, x);
        double hf = 0.0;
        for (auto& row : H)
            for (double v : row) hf += v * v;
        mh = std::max(mh, std::sqrt(hf));
        ml = std::max(ml, std::fabs(laplacian_psi(p, x)));
        mgl = std::max(mgl, std::sqrt(norm2(grad_laplacian_psi(p, x))));
    }
    gc.c1 = std::max(c1 * f, 1.0 / gc.c01);
    gc.c2 = std::max(c2 * f, gc.c02);
    gc.c3 = c3 / f;
    gc.mu0 = mu0 / f;
    gc.max_psi = peak;
    gc.max_grad_psi_sq = mg2 * f;
    gc.max_hess_psi = mh * f;
    gc.max_laplacian_psi = ml * f;
    gc.max_grad_laplacian_psi = mgl * f;
    if (!(gc.c3 > 0)) throw std::runtime_error("geometry: phi_3 - phi_1 <= -c3 requires c3 > 0");
    if (!(gc.mu0 > 0)) throw std::runtime_error("geometry: mu0 must be positive");
    return gc;
}

double rel_change(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

}  // namespace

GeometryConstants geometry_constants(const WeightParams& p, int probe_resolution) {
    if (probe_resolution < 1000) throw std::invalid_argument("geometry: probe_resolution must be at least 1000");
    p.validate();
    auto prev = sample_constants(p, probe_resolution);
    for (int k = 1, n = probe_resolution * 2; k <= 8; ++k, n *= 2) {
        auto next = sample_constants(p, n);
        double worst = std::max({rel_change(prev.c01, next.c01), rel_change(prev.c02, next.c02),
                                 rel_change(prev.c1, next.c1), rel_change(prev.c2, next.c2),
                                 rel_change(prev.c3, next.c3), rel_change(prev.mu0, next.mu0),
                                 rel_change(prev.max_grad_psi_sq, next.max_grad_psi_sq),
                                 rel_change(prev.max_hess_psi, next.max_hess_psi),
                                 rel_change(prev.max_laplacian_psi, next.max_laplacian_psi),
                                 rel_change(prev.max_grad_laplacian_psi, next.max_grad_laplacian_psi)});
        prev = next;
        if (worst < 0.01) break;
    }
    return prev;
}

}  // namespace degrd
