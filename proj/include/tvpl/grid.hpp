#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tvpl/errors.hpp"

namespace tvpl {

/// Uniform tensor grid on an interval (dim 1) or rectangle (dim 2).
/// `cells` counts cells per axis; nodes per axis are cells+1.
struct Grid {
    int dim = 1;
    std::array<int, 2> cells{2, 2};
    std::array<double, 2> spacing{1.0, 1.0};
    std::array<double, 2> origin{0.0, 0.0};

    static Grid line(int cells, double a, double b);
    static Grid rectangle(int nx, int ny, double x0, double x1, double y0, double y1);

    void validate() const;

    int nodes(int axis) const { return cells[axis] + 1; }
    int nodes_x() const { return cells[0] + 1; }
    int nodes_y() const { return dim == 2 ? cells[1] + 1 : 1; }
    long node_count() const { return static_cast<long>(nodes_x()) * nodes_y(); }
    long node_index(int i, int j = 0) const { return static_cast<long>(j) * nodes_x() + i; }
    bool is_boundary_node(int i, int j = 0) const;
    double x(int i) const { return origin[0] + spacing[0] * i; }
    double y(int j) const { return origin[1] + spacing[1] * j; }
    double cell_volume() const { return dim == 2 ? spacing[0] * spacing[1] : spacing[0]; }

    bool operator==(const Grid& o) const;
};

enum class BoundaryMode { dirichlet, zero_extension };

struct ScalarField {
    Grid grid;
    std::vector<double> values;
    BoundaryMode boundary = BoundaryMode::dirichlet;

    ScalarField() = default;
    ScalarField(const Grid& g, double fill = 0.0,
                BoundaryMode mode = BoundaryMode::dirichlet);

    double& at(int i, int j = 0) { return values[grid.node_index(i, j)]; }
    double at(int i, int j = 0) const { return values[grid.node_index(i, j)]; }

    /// Piecewise-linear interpolation (bilinear in 2D). In zero-extension
    /// mode the field ramps to 0 over one spacing beyond the boundary;
    /// otherwise coordinates must stay inside the domain.
    double interpolate(double x, double y = 0.0) const;
};

/// Staggered edge field: component a lives on forward edges of axis a.
/// Axis-0 edges: cells[0] per row, nodes_y rows; axis-1 edges: nodes_x per
/// column, cells[1] columns.
struct VectorField {
    Grid grid;
    std::array<std::vector<double>, 2> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g, double fill = 0.0);

    int edges(int axis) const;
    double& x_at(int e, int j = 0) { return comp[0][static_cast<long>(j) * grid.cells[0] + e]; }
    double x_at(int e, int j = 0) const { return comp[0][static_cast<long>(j) * grid.cells[0] + e]; }
    double& y_at(int i, int e) { return comp[1][static_cast<long>(e) * grid.nodes_x() + i]; }
    double y_at(int i, int e) const { return comp[1][static_cast<long>(e) * grid.nodes_x() + i]; }
};

/// Forward differences per axis; exact on affine fields.
VectorField grad_h(const ScalarField& u);

/// Backward differences with zero flux outside the domain; the exact
/// negative adjoint of grad_h: <grad_h u, Z> + <u, div_h Z> = 0.
ScalarField div_h(const VectorField& z);

/// (u_bar(x + step e_axis) - u(x)) / step nodewise, with u_bar the
/// zero extension of u.
ScalarField difference_quotient(const ScalarField& u, int axis, double step);

/// Unweighted Riemann sums anchored at the lower node of each cell;
/// pass p = infinity for the max norm (over all nodes).
double lp_norm(const ScalarField& u, double p);
/// Cell-anchored Euclidean magnitude of the staggered components.
double lp_norm(const VectorField& z, double p);

double dot(const ScalarField& a, const ScalarField& b);
double dot(const VectorField& a, const VectorField& b);

} // namespace tvpl
