#include "tvpl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvpl {

Grid Grid::line(int cells, double a, double b) {
    Grid g;
    g.dim = 1;
    g.cells = {cells, 0};
    g.spacing = {(b - a) / cells, 1.0};
    g.origin = {a, 0.0};
    g.validate();
    return g;
}

Grid Grid::rectangle(int nx, int ny, double x0, double x1, double y0, double y1) {
    Grid g;
    g.dim = 2;
    g.cells = {nx, ny};
    g.spacing = {(x1 - x0) / nx, (y1 - y0) / ny};
    g.origin = {x0, y0};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw InvalidGrid("grid dimension must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (cells[a] < 2) throw InvalidGrid("need at least 2 cells per axis");
        if (!(spacing[a] > 0.0)) throw InvalidGrid("spacing must be positive");
    }
}

bool Grid::is_boundary_node(int i, int j) const {
    if (i == 0 || i == cells[0]) return true;
    if (dim == 2 && (j == 0 || j == cells[1])) return true;
    return false;
}

bool Grid::operator==(const Grid& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
        if (cells[a] != o.cells[a] || spacing[a] != o.spacing[a] || origin[a] != o.origin[a])
            return false;
    return true;
}

ScalarField::ScalarField(const Grid& g, double fill, BoundaryMode mode)
    : grid(g), values(g.node_count(), fill), boundary(mode) {
    g.validate();
}

namespace {

// 1D lerp on the zero-extended nodal line: index coordinate s in node units,
// virtual zero nodes one spacing beyond each end.
double lerp_line(const double* v, int n, double s) {
    if (s <= -1.0 || s >= n) return 0.0;
    int k = static_cast<int>(std::floor(s));
    double t = s - k;
    double a = (k >= 0 && k < n) ? v[k] : 0.0;
    double b = (k + 1 >= 0 && k + 1 < n) ? v[k + 1] : 0.0;
    return a + t * (b - a);
}

} // namespace

double ScalarField::interpolate(double px, double py) const {
    double sx = (px - grid.origin[0]) / grid.spacing[0];
    if (grid.dim == 1) {
        if (boundary != BoundaryMode::zero_extension) {
            sx = std::clamp(sx, 0.0, static_cast<double>(grid.cells[0]));
        }
        return lerp_line(values.data(), grid.nodes_x(), sx);
    }
    double sy = (py - grid.origin[1]) / grid.spacing[1];
    if (boundary != BoundaryMode::zero_extension) {
        sx = std::clamp(sx, 0.0, static_cast<double>(grid.cells[0]));
        sy = std::clamp(sy, 0.0, static_cast<double>(grid.cells[1]));
    }
    if (sx <= -1.0 || sx >= grid.nodes_x() || sy <= -1.0 || sy >= grid.nodes_y()) return 0.0;
    int j = static_cast<int>(std::floor(sy));
    double t = sy - j;
    auto row = [&](int jj) -> double {
        if (jj < 0 || jj >= grid.nodes_y()) return 0.0;
        return lerp_line(values.data() + grid.node_index(0, jj), grid.nodes_x(), sx);
    };
    return row(j) + t * (row(j + 1) - row(j));
}

VectorField::VectorField(const Grid& g, double fill) : grid(g) {
    g.validate();
    comp[0].assign(static_cast<long>(g.cells[0]) * g.nodes_y(), fill);
    if (g.dim == 2) comp[1].assign(static_cast<long>(g.nodes_x()) * g.cells[1], fill);
}

int VectorField::edges(int axis) const {
    return static_cast<int>(comp[axis].size());
}

VectorField grad_h(const ScalarField& u) {
    const Grid& g = u.grid;
    VectorField out(g);
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int e = 0; e < g.cells[0]; ++e)
            out.x_at(e, j) = (u.at(e + 1, j) - u.at(e, j)) / g.spacing[0];
    if (g.dim == 2)
        for (int e = 0; e < g.cells[1]; ++e)
            for (int i = 0; i < g.nodes_x(); ++i)
                out.y_at(i, e) = (u.at(i, e + 1) - u.at(i, e)) / g.spacing[1];
    return out;
}

ScalarField div_h(const VectorField& z) {
    const Grid& g = z.grid;
    ScalarField out(g, 0.0);
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i) {
            double zr = i < g.cells[0] ? z.x_at(i, j) : 0.0;
            double zl = i > 0 ? z.x_at(i - 1, j) : 0.0;
            out.at(i, j) = (zr - zl) / g.spacing[0];
        }
    if (g.dim == 2)
        for (int j = 0; j < g.nodes_y(); ++j)
            for (int i = 0; i < g.nodes_x(); ++i) {
                double zu = j < g.cells[1] ? z.y_at(i, j) : 0.0;
                double zd = j > 0 ? z.y_at(i, j - 1) : 0.0;
                out.at(i, j) += (zu - zd) / g.spacing[1];
            }
    return out;
}

ScalarField difference_quotient(const ScalarField& u, int axis, double step) {
    if (step == 0.0) throw ZeroStep{};
    if (axis < 0 || axis >= u.grid.dim) throw InvalidGrid("axis out of range");
    ScalarField ext = u;
    ext.boundary = BoundaryMode::zero_extension;
    ScalarField out(u.grid, 0.0, BoundaryMode::zero_extension);
    for (int j = 0; j < u.grid.nodes_y(); ++j)
        for (int i = 0; i < u.grid.nodes_x(); ++i) {
            double px = u.grid.x(i) + (axis == 0 ? step : 0.0);
            double py = u.grid.dim == 2 ? u.grid.y(j) + (axis == 1 ? step : 0.0) : 0.0;
            out.at(i, j) = (ext.interpolate(px, py) - u.at(i, j)) / step;
        }
    return out;
}

double lp_norm(const ScalarField& u, double p) {
    if (!(p >= 1.0)) throw InvalidExponent("p must be >= 1");
    const Grid& g = u.grid;
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    int jmax = g.dim == 2 ? g.cells[1] : 1;
    for (int j = 0; j < jmax; ++j)
        for (int i = 0; i < g.cells[0]; ++i)
            acc += std::pow(std::abs(u.at(i, j)), p);
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

namespace {

double cell_magnitude(const VectorField& z, int i, int j) {
    double gx = z.x_at(i, j);
    if (z.grid.dim == 1) return std::abs(gx);
    double gy = z.y_at(i, j);
    return std::hypot(gx, gy);
}

} // namespace

double lp_norm(const VectorField& z, double p) {
    if (!(p >= 1.0)) throw InvalidExponent("p must be >= 1");
    const Grid& g = z.grid;
    int jmax = g.dim == 2 ? g.cells[1] : 1;
    if (std::isinf(p)) {
        double m = 0.0;
        for (int j = 0; j < jmax; ++j)
            for (int i = 0; i < g.cells[0]; ++i) m = std::max(m, cell_magnitude(z, i, j));
        return m;
    }
    double acc = 0.0;
    for (int j = 0; j < jmax; ++j)
        for (int i = 0; i < g.cells[0]; ++i) acc += std::pow(cell_magnitude(z, i, j), p);
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double dot(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("fields live on different grids");
    double acc = 0.0;
    for (size_t k = 0; k < a.values.size(); ++k) acc += a.values[k] * b.values[k];
    return acc * a.grid.cell_volume();
}

double dot(const VectorField& a, const VectorField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("fields live on different grids");
    double acc = 0.0;
    for (int ax = 0; ax < a.grid.dim; ++ax)
        for (size_t k = 0; k < a.comp[ax].size(); ++k) acc += a.comp[ax][k] * b.comp[ax][k];
    return acc * a.grid.cell_volume();
}

} // namespace tvpl
