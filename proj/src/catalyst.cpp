#include "degrd/catalyst.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace degrd {

CatalystKind parse_catalyst_kind(const std::string& s) {
    if (s == "constant") return CatalystKind::constant;
    if (s == "bump") return CatalystKind::bump;
    if (s == "annular-zero") return CatalystKind::annular_zero;
    if (s == "time-modulated-bump") return CatalystKind::time_modulated_bump;
    throw std::invalid_argument("unknown catalyst kind '" + s + "'");
}

std::string to_string(CatalystKind k) {
    switch (k) {
        case CatalystKind::constant: return "constant";
        case CatalystKind::bump: return "bump";
        case CatalystKind::annular_zero: return "annular-zero";
        case CatalystKind::time_modulated_bump: return "time-modulated-bump";
    }
    return "?";
}

double smooth_drop(double z) {
    if (z <= 0) return 1.0;
    if (z >= 1) return 0.0;
    return 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
}

void CatalystSpec::validate(double R) const {
    if (!(k0 >= 0)) throw std::invalid_argument("catalyst: k0 must be nonnegative");
    if (!(k_max >= k0)) throw std::invalid_argument("catalyst: k_max must be at least k0");
    if (smoothness < 0) throw std::invalid_argument("catalyst: smoothness must be nonnegative");
    if (kind == CatalystKind::constant) return;
    if (!(r > 0)) throw std::invalid_argument("catalyst: r must be positive");
    if (std::fabs(x0) >= R) throw std::invalid_argument("catalyst: x0 must lie inside the domain");
    if (kind == CatalystKind::annular_zero && !(outer_radius > std::fabs(x0) + r && outer_radius < R))
        throw std::invalid_argument("catalyst: outer_radius must lie between |x0| + r and R");
    if (kind == CatalystKind::time_modulated_bump && !(period > 0 && k0 > 0))
        throw std::invalid_argument("catalyst: time modulation needs period > 0 and k0 > 0");
}

Catalyst::Catalyst(CatalystSpec spec, double grid_spacing)
    : spec_(spec), width_(spec.smoothness > 0 ? spec.smoothness : 2.0 * grid_spacing) {}

double Catalyst::at(const Point& x, double t) const {
    const auto& s = spec_;
    if (s.kind == CatalystKind::constant) return s.k0;
    double d = std::sqrt((x[0] - s.x0) * (x[0] - s.x0) + x[1] * x[1] + x[2] * x[2]);
    double bump = s.k0 * smooth_drop((d - s.r) / width_);
    switch (s.kind) {
        case CatalystKind::bump: return bump;
        case CatalystKind::annular_zero: {
            double rn = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            return bump + s.k_max * (1.0 - smooth_drop((rn - (s.outer_radius - width_)) / width_));
        }
        case CatalystKind::time_modulated_bump: {
            double m = 1.0 + (s.k_max / s.k0 - 1.0) * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t / s.period));
            return bump * m;
        }
        default: return bump;
    }
}

Field Catalyst::sample(const GridPtr& grid, double t) const {
    Field k(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) k[i] = at(grid->centers[i], t);
    return k;
}

double Catalyst::sup() const {
    switch (spec_.kind) {
        case CatalystKind::constant:
        case CatalystKind::bump: return spec_.k0;
        default: return std::max(spec_.k0, spec_.k_max);
    }
}

}  // namespace degrd
