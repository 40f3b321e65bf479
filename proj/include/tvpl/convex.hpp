#pragma once

#include <Eigen/Dense>

#include "tvpl/grid.hpp"

namespace tvpl {

/// Midpoint convexity over aligned node pairs at distances 2h and 4h per
/// direction (axes, plus diagonals in 2D); exact for piecewise-linear
/// interpolants in 1D.
bool is_convex(const ScalarField& u, double tol);

struct SubdifferentialEstimate {
    std::array<double, 2> point{0.0, 0.0};
    std::array<double, 2> lower{0.0, 0.0}; // backward slopes per axis
    std::array<double, 2> upper{0.0, 0.0}; // forward slopes per axis
    bool is_singleton = false;
    std::array<double, 2> witness{0.0, 0.0}; // interval midpoints
    int dim = 1;
};

/// Per-axis one-sided difference slopes at an interior node.
SubdifferentialEstimate subdifferential_at(const ScalarField& u, int i, int j, double tol);
SubdifferentialEstimate subdifferential_at(const ScalarField& u, int i, double tol);

struct FacetReport {
    std::vector<std::uint8_t> facet_mask; // per node
    double min_value = 0.0;
    std::vector<long> boundary_nodes; // facet nodes adjacent to the complement
    double tol = 0.0;
    bool touches_boundary = false; // degenerate: facet meets the domain boundary
    bool connected = true;
    long facet_size = 0;
};

/// Argmin characterization F = {u <= min u + tol}; valid exactly for convex u.
FacetReport facet_detect(const ScalarField& u, double tol);

/// 10 h Lip(u), with Lip estimated from the max discrete gradient.
double default_facet_tol(const ScalarField& u);

enum class BlowUpLimit { zero, affine, unresolved };

struct BlowUpSequence {
    std::array<double, 2> center{0.0, 0.0};
    std::vector<double> scales;
    std::vector<ScalarField> rescaled;  // on a shared window grid
    std::vector<double> deviations;     // sup |u_{a_N} - u_{a_{N+1}}|
    BlowUpLimit kind = BlowUpLimit::unresolved;
    Eigen::VectorXd affine_slope;       // fitted at the smallest scale
};

/// u_a(x) = (u(a(x - x0) + x0) - u(x0)) / a sampled by linear interpolation
/// on a fixed window of radius window_radius around x0.
BlowUpSequence blow_up(const ScalarField& u, const std::array<double, 2>& x0,
                       const std::vector<double>& scales, double window_radius);

/// <z2, nu> >= (u(x2) - u(x1))/d - tol with nu = (x2 - x1)/d; z2 a
/// subgradient witness at node (i2, j2).
bool slope_bound_check(const ScalarField& u, int i1, int j1, int i2, int j2,
                       const Eigen::VectorXd& z2, double tol);

struct GradientModulus {
    double max_jump = 0.0;
    // (node distance, max gradient oscillation within that distance)
    std::vector<std::pair<double, double>> modulus_table;
};

/// Gradient oscillation between nearby edges, restricted to nodes where
/// region_mask is set (empty mask = whole domain).
GradientModulus gradient_modulus(const ScalarField& u,
                                 const std::vector<std::uint8_t>& region_mask = {});

} // namespace tvpl
