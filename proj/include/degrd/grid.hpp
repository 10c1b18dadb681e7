#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include <json.hpp>

namespace degrd {

using Point = std::array<double, 3>;

// The ball centered at the origin with unit measure.
struct Domain {
    int dim = 1;
    double radius = 0.5;

    static Domain unit_ball(int dim);
};

// Face shared by two cells. transmissibility = face measure / center distance.
struct Face {
    std::size_t left;
    std::size_t right;
    double transmissibility;
};

// Face on the sphere |x| = R.
struct BoundaryFace {
    std::size_t cell;
    double area;
    Point center;
};

// Cell-centered finite-volume discretization of the ball.
// n = 1: uniform cells on [-1/2, 1/2].
// n = 2: a center disk of radius dr plus nr - 1 rings of n_theta cells each.
class Grid {
public:
    Domain domain;
    int resolution = 0;
    double spacing = 0.0;
    std::vector<Point> centers;
    std::vector<double> volumes;
    std::vector<Face> faces;
    std::vector<BoundaryFace> boundary;
    // Polar layout (n = 2 only).
    int n_radial = 0;
    int n_theta = 0;

    std::size_t size() const { return volumes.size(); }
    int dim() const { return domain.dim; }
    nlohmann::json summary() const;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const Domain& domain, int resolution);

// One real per cell, tied to its grid.
struct Field {
    GridPtr grid;
    std::vector<double> values;

    Field() = default;
    Field(GridPtr g, double fill = 0.0);
    Field(GridPtr g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    bool all_finite() const;
};

void require_same_grid(const Field& a, const Field& b);

Field neumann_laplacian(const Grid& grid, const Field& field, double diffusivity);
double integrate(const Grid& grid, const Field& field);
// Volume-weighted inner product.
double inner(const Grid& grid, const Field& a, const Field& b);
// Sum over faces of T (v_j - v_i)^2, the discrete counterpart of the integral of |grad v|^2.
double dirichlet_form(const Grid& grid, const Field& field);

// Cell-centered gradient of a field with zero normal derivative on the boundary.
// Second order in the interior and in boundary cells of the n = 1 grid.
std::vector<Point> neumann_gradient(const Grid& grid, const Field& field);

struct EigenResult {
    double value;
    double residual;
    int iterations;
};

// Smallest nonzero eigenvalue of -Laplacian with Neumann conditions (unit diffusivity).
EigenResult neumann_eigenvalue_1(const Grid& grid, double tol = 1e-12, int max_iter = 500);

}  // namespace degrd
