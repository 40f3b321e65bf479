#pragma once

#include <limits>

#include "tvpl/energy.hpp"
#include "tvpl/grid.hpp"

namespace tvpl {

struct ProblemInstance {
    EnergyModel model;
    Grid grid;
    ScalarField f;          // source term, nodal
    ScalarField dirichlet;  // boundary trace (interior values ignored)
    double q_exponent = std::numeric_limits<double>::infinity(); // f in L^q, informational

    void validate() const;
};

struct ResidualReport {
    double weak_residual_max = 0.0;   // worst interior nodal hat-function residual
    double complementarity_gap = 0.0; // max_e |g_e| - <Z_e, g_e>
    double z_norm_excess = 0.0;       // max_e (|Z_e| - 1)_+
};

struct WeakPair {
    ScalarField u;
    VectorField z;     // subgradient field, per edge, |Z| <= 1
    VectorField flux;  // b Z + |grad u|^{p-2} grad u
    ResidualReport residual;
    long iterations = 0;
    bool converged = false;
    std::vector<double> energy_history; // filled when opts.record_energy
};

struct SolveOptions {
    long max_iters = 50000;
    double tol_primal = 1e-10;   // complementarity gap target
    double tol_residual = 1e-9;  // weak residual target
    double step_ratio = 1.0;     // primal/dual step balance
    int check_every = 25;
    bool record_energy = false;
};

/// Minimizes sum_e E(grad u) - sum f u with the Dirichlet trace pinned, via
/// a primal-dual splitting with one dual variable per edge for each of the
/// Psi and W parts. The Psi dual is projected onto [-b, b] every iteration,
/// so |Z| <= 1 holds exactly for all iterates.
WeakPair solve(const ProblemInstance& instance, const SolveOptions& opts = {});

/// Discrete energy of a field against an instance (diagnostic).
double discrete_energy(const ProblemInstance& instance, const ScalarField& u);

ResidualReport weak_residual(const ScalarField& u, const VectorField& z,
                             const ProblemInstance& instance);
ResidualReport weak_residual(const WeakPair& pair, const ProblemInstance& instance);

/// Comparison principle check: requires u_minus <= u_plus + tol on the
/// boundary (else BoundaryOrderViolated), returns whether the ordering holds
/// at every node.
bool comparison_check(const ScalarField& u_minus, const ScalarField& u_plus, double tol);

struct OracleSolution {
    ScalarField u;     // nodal, u(left end) = 0
    VectorField z;     // per-edge, sampled at edge midpoints
    VectorField flux;  // q(x) = anchor_flux - int f, sampled at edge midpoints
};

/// Exact 1D solution by flux integration: q' = -f, u' = sign(q) max(|q|-b,0)^{1/(p-1)},
/// Z = clamp(q/b, -1, 1) on the facet and sign(u') elsewhere. The scalar flux
/// map inversion makes the triple satisfy the 1D weak formulation up to
/// quadrature (exactly, for piecewise-linear f).
OracleSolution oracle_solve_1d(const EnergyModel& model, const Grid& grid,
                               const std::vector<double>& f_nodes, double anchor_flux);
OracleSolution oracle_solve_1d(const EnergyModel& model, const Grid& grid, double f_constant,
                               double anchor_flux);

} // namespace tvpl
