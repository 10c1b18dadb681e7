#include "degrd/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace degrd {

Domain Domain::unit_ball(int dim) {
    using std::numbers::pi;
    switch (dim) {
        case 1: return {1, 0.5};
        case 2: return {2, 1.0 / std::sqrt(pi)};
        case 3: return {3, std::cbrt(3.0 / (4.0 * pi))};
        default: throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
    }
}

nlohmann::json Grid::summary() const {
    return {{"dim", domain.dim},
            {"radius", domain.radius},
            {"resolution", resolution},
            {"spacing", spacing},
            {"cells", size()}};
}

namespace {

GridPtr build_interval(const Domain& domain, int n) {
    auto g = std::make_shared<Grid>();
    g->domain = domain;
    g->resolution = n;
    g->spacing = 1.0 / n;
    const double dx = g->spacing;
    for (int i = 0; i < n; ++i) {
        g->centers.push_back({-0.5 + (i + 0.5) * dx, 0.0, 0.0});
        g->volumes.push_back(dx);
    }
    for (int i = 0; i + 1 < n; ++i) g->faces.push_back({std::size_t(i), std::size_t(i + 1), 1.0 / dx});
    g->boundary.push_back({0, 1.0, {-0.5, 0.0, 0.0}});
    g->boundary.push_back({std::size_t(n - 1), 1.0, {0.5, 0.0, 0.0}});
    return g;
}

GridPtr build_polar(const Domain& domain, int nr) {
    using std::numbers::pi;
    auto g = std::make_shared<Grid>();
    g->domain = domain;
    g->resolution = nr;
    g->n_radial = nr;
    g->n_theta = 4 * nr;
    const int nt = g->n_theta;
    const double R = domain.radius;
    const double dr = R / nr;
    const double dth = 2.0 * pi / nt;
    g->spacing = dr;

    g->centers.push_back({0.0, 0.0, 0.0});
    g->volumes.push_back(pi * dr * dr);
    for (int j = 1; j < nr; ++j) {
        double rc = (j + 0.5) * dr;
        for (int k = 0; k < nt; ++k) {
            double th = (k + 0.5) * dth;
            g->centers.push_back({rc * std::cos(th), rc * std::sin(th), 0.0});
            g->volumes.push_back(rc * dr * dth);
        }
    }
    auto idx = [&](int j, int k) { return std::size_t(1 + (j - 1) * nt + ((k % nt) + nt) % nt); };

    // Center-to-ring distance chosen so the flux is exact for quadratics.
    const double rc1 = 1.5 * dr;
    const double center_dist = rc1 * rc1 / (2.0 * dr);
    for (int k = 0; k < nt; ++k) g->faces.push_back({0, idx(1, k), dr * dth / center_dist});
    for (int j = 1; j < nr; ++j) {
        double rc = (j + 0.5) * dr;
        for (int k = 0; k < nt; ++k) {
            g->faces.push_back({idx(j, k), idx(j, k + 1), dr / (rc * dth)});
            if (j + 1 < nr) g->faces.push_back({idx(j, k), idx(j + 1, k), (j + 1) * dr * dth / dr});
        }
    }
    for (int k = 0; k < nt; ++k) {
        double th = (k + 0.5) * dth;
        g->boundary.push_back({idx(nr - 1, k), R * dth, {R * std::cos(th), R * std::sin(th), 0.0}});
    }
    return g;
}

}  // namespace

GridPtr build_grid(const Domain& domain, int resolution) {
    if (resolution < 8) throw std::invalid_argument("grid resolution must be at least 8");
    if (domain.dim == 1) return build_interval(domain, resolution);
    if (domain.dim == 2) return build_polar(domain, resolution);
    throw std::invalid_argument("unsupported dimension " + std::to_string(domain.dim) +
                                " for PDE grids");
}

Field::Field(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw std::invalid_argument("field size does not match grid");
}

bool Field::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_same_grid(const Field& a, const Field& b) {
    if (a.grid != b.grid || a.size() != b.size()) throw std::invalid_argument("fields live on different grids");
}

namespace {
void require_on(const Grid& grid, const Field& f) {
    if (f.grid.get() != &grid || f.size() != grid.size())
        throw std::invalid_argument("field does not belong to this grid");
}
}  // namespace

Field neumann_laplacian(const Grid& grid, const Field& field, double diffusivity) {
    require_on(grid, field);
    if (!(diffusivity > 0)) throw std::invalid_argument("diffusivity must be positive");
    Field out(field.grid, 0.0);
    for (const auto& f : grid.faces) {
        double flux = f.transmissibility * (field[f.right] - field[f.left]);
        out[f.left] += flux;
        out[f.right] -= flux;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] *= diffusivity / grid.volumes[i];
    return out;
}

double integrate(const Grid& grid, const Field& field) {
    require_on(grid, field);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) s += grid.volumes[i] * field[i];
    return s;
}

double inner(const Grid& grid, const Field& a, const Field& b) {
    require_on(grid, a);
    require_on(grid, b);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) s += grid.volumes[i] * a[i] * b[i];
    return s;
}

double dirichlet_form(const Grid& grid, const Field& field) {
    require_on(grid, field);
    double s = 0.0;
    for (const auto& f : grid.faces) {
        double d = field[f.right] - field[f.left];
        s += f.transmissibility * d * d;
    }
    return s;
}

std::vector<Point> neumann_gradient(const Grid& grid, const Field& field) {
    require_on(grid, field);
    const std::size_t n = grid.size();
    std::vector<Point> g(n, Point{0.0, 0.0, 0.0});
    if (grid.dim() == 1) {
        const double dx = grid.spacing;
        for (std::size_t i = 0; i < n; ++i) {
            double right = i + 1 < n ? (field[i + 1] - field[i]) / dx : 0.0;
            double left = i > 0 ? (field[i] - field[i - 1]) / dx : 0.0;
            g[i][0] = 0.5 * (left + right);
        }
        return g;
    }
    const int nr = grid.n_radial, nt = grid.n_theta;
    const double dr = grid.spacing;
    const double dth = 2.0 * std::numbers::pi / nt;
    auto idx = [&](int j, int k) { return std::size_t(1 + (j - 1) * nt + ((k % nt) + nt) % nt); };
    const double rc1 = 1.5 * dr;
    const double center_dist = rc1 * rc1 / (2.0 * dr);

    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < nt; ++k) {
        double th = (k + 0.5) * dth;
        double diff = field[idx(1, k)] - field[0];
        gx += diff * std::cos(th);
        gy += diff * std::sin(th);
    }
    g[0] = {2.0 * gx / (nt * rc1), 2.0 * gy / (nt * rc1), 0.0};

    for (int j = 1; j < nr; ++j) {
        double rc = (j + 0.5) * dr;
        for (int k = 0; k < nt; ++k) {
            double th = (k + 0.5) * dth;
            std::size_t c = idx(j, k);
            double outer = j + 1 < nr ? (field[idx(j + 1, k)] - field[c]) / dr : 0.0;
            double inner_d = j > 1 ? (field[c] - field[idx(j - 1, k)]) / dr : (field[c] - field[0]) / center_dist;
            double gr = 0.5 * (outer + inner_d);
            double gt = (field[idx(j, k + 1)] - field[idx(j, k - 1)]) / (2.0 * rc * dth);
            double cs = std::cos(th), sn = std::sin(th);
            g[c] = {gr * cs - gt * sn, gr * sn + gt * cs, 0.0};
        }
    }
    return g;
}

EigenResult neumann_eigenvalue_1(const Grid& grid, double tol, int max_iter) {
    using SpMat = Eigen::SparseMatrix<double>;
    const auto n = static_cast<Eigen::Index>(grid.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(grid.faces.size() * 4 + grid.size());
    for (const auto& f : grid.faces) {
        auto l = static_cast<Eigen::Index>(f.left), r = static_cast<Eigen::Index>(f.right);
        trip.emplace_back(l, l, f.transmissibility);
        trip.emplace_back(r, r, f.transmissibility);
        trip.emplace_back(l, r, -f.transmissibility);
        trip.emplace_back(r, l, -f.transmissibility);
    }
    SpMat K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd V(n);
    for (Eigen::Index i = 0; i < n; ++i) V[i] = grid.volumes[i];

    // Shift-invert with shift -1: (K + V) x = V y amplifies the lowest modes.
    SpMat A = K;
    for (Eigen::Index i = 0; i < n; ++i) A.coeffRef(i, i) += V[i];
    Eigen::SimplicialLDLT<SpMat> solver(A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solve: factorization failed");

    auto project = [&](Eigen::VectorXd& x) {
        double mean = V.dot(x) / V.sum();
        x.array() -= mean;
        x /= std::sqrt(x.dot(V.cwiseProduct(x)));
    };
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = grid.centers[i][0] + 0.1 * grid.centers[i][1];
    project(x);

    double lambda = x.dot(K * x);
    double residual = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd y = solver.solve(V.cwiseProduct(x));
        project(y);
        x = y;
        double next = x.dot(K * x);
        Eigen::VectorXd r = K * x - next * V.cwiseProduct(x);
        residual = std::sqrt(r.dot(r.cwiseQuotient(V))) / next;
        bool settled = std::fabs(next - lambda) <= tol * next;
        lambda = next;
        if (settled && residual < std::sqrt(tol)) return {lambda, residual, it};
    }
    throw std::runtime_error("neumann_eigenvalue_1 did not converge; relative residual " + std::to_string(residual));
}

}  // namespace degrd
