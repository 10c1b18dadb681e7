#pragma once

#include <array>
#include <vector>

#include "degrd/grid.hpp"

namespace degrd {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Observation point x0 = (x0_norm, 0, ...), observation radius r, and the
// tilting parameters s (strength), h (time shift), T (horizon).
struct WeightParams {
    int dim = 1;
    double x0_norm = 0.25;
    double r = 0.1;
    double s = 1.0;
    double h = 1.0;
    double T = 1.0;

    double radius() const { return Domain::unit_ball(dim).radius; }
    Point x0() const { return {x0_norm, 0.0, 0.0}; }
    // Gamma(t) = T - t + h.
    double gamma(double t) const { return T - t + h; }
    // Throws std::invalid_argument naming the broken condition.
    void validate() const;
};

// psi(x) = (R^2 - |x|^2) * 2|x0|R / (|x0|^2 + R^2 - 2|x0| x_1): positive inside, zero on
// the sphere, with a single nondegenerate maximum at x0.
double eval_psi(const WeightParams& p, const Point& x);
Point grad_psi(const WeightParams& p, const Point& x);
Mat3 hess_psi(const WeightParams& p, const Point& x);
double laplacian_psi(const WeightParams& p, const Point& x);
Point grad_laplacian_psi(const WeightParams& p, const Point& x);
// psi(x0) = 2|x0|R.
double psi_peak(const WeightParams& p);

struct PhiEta {
    double Phi;
    double eta;
};

// Exponent Phi_i = s phi_i / Gamma and multiplier eta_i for component i in 1..4.
// Components 1, 2 use phi_1 = psi - psi(x0); 3, 4 use phi_3 = -psi - psi(x0).
// Diffusivity of components 1, 3 is d1 and of 2, 4 is d2.
PhiEta eval_Phi_eta(const WeightParams& p, int which, const Point& x, double t, double d1, double d2);

struct WeightFields {
    Field psi, phi1, phi3, laplacian_psi;
    std::vector<Point> grad_psi;
    std::vector<Mat3> hess_psi;
};

WeightFields weight_fields(const WeightParams& p, const GridPtr& grid);

struct GeometryConstants {
    double c01 = 0, c02 = 0;
    double c1 = 0, c2 = 0, c3 = 0;
    double rho = 0;
    double mu0 = 0, mu1 = 0;
    // Sampled maxima over the closed ball (with the same safety factor).
    double max_psi = 0;
    double max_grad_psi_sq = 0;
    double max_hess_psi = 0;  // Frobenius norm
    double max_laplacian_psi = 0;
    double max_grad_laplacian_psi = 0;
    // Exclusion radius used around x0 and the final sample count.
    double exclusion = 0;
    int samples = 0;
};

inline constexpr double kGeometrySafety = 1.05;

// Sample points of the closed ball: the full set for n = 1, a meridian half-disk for
// n >= 2 (psi is symmetric about the x0 axis). Includes the sphere |x - x0| = r.
std::vector<Point> geometry_samples(const WeightParams& p, int count);
// Points of B(x0, (R - |x0|)/2) used for the quadratic sandwich around x0.
std::vector<Point> neighborhood_samples(const WeightParams& p, int count);

// Sampled constants; the sample count starts at probe_resolution and doubles until every
// constant moves by less than 1%.
GeometryConstants geometry_constants(const WeightParams& p, int probe_resolution = 10000);

}  // namespace degrd
