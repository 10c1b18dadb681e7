#pragma once

#include <string>

#include "degrd/grid.hpp"

namespace degrd {

enum class CatalystKind { constant, bump, annular_zero, time_modulated_bump };

CatalystKind parse_catalyst_kind(const std::string& s);
std::string to_string(CatalystKind k);

// Reaction coefficient k(x, t).
//   constant:            k = k0 everywhere.
//   bump:                k0 on B(x0, r), smooth drop to 0 over a shell of the given width.
//   annular_zero:        the bump plus k_max near the sphere (|x| >= outer_radius), zero between.
//   time_modulated_bump: the bump times 1 + (k_max/k0 - 1)(1 - cos(2 pi t / period))/2.
struct CatalystSpec {
    CatalystKind kind = CatalystKind::bump;
    double k0 = 1.0;
    double k_max = 1.0;
    double x0 = 0.25;  // distance of the bump center from the origin along the first axis
    double r = 0.1;
    double smoothness = 0.0;  // transition width; 0 selects 2 * grid spacing
    double outer_radius = 0.0;
    double period = 1.0;

    void validate(double domain_radius) const;
};

class Catalyst {
public:
    Catalyst(CatalystSpec spec, double grid_spacing);

    double at(const Point& x, double t) const;
    Field sample(const GridPtr& grid, double t) const;
    // Global supremum of k.
    double sup() const;
    // Lower bound of k on B(x0, r) for all t.
    double floor_on_ball() const { return spec_.k0; }
    double width() const { return width_; }
    const CatalystSpec& spec() const { return spec_; }

private:
    CatalystSpec spec_;
    double width_;
};

// 1 for z <= 0, 0 for z >= 1, quintic smoothstep in between (C^2).
double smooth_drop(double z);

}  // namespace degrd
