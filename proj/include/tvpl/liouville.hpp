#pragma once

#include "tvpl/energy.hpp"

namespace tvpl {

/// The three piecewise-linear candidates that survive the facet-shape
/// classification: max{t1 x1, 0}, max{t1 x1, -t2 x1},
/// max{t1 x1, 0, -t2 (x1 + l0)}.
struct PLCandidate {
    enum class Kind { type1, type2, type3 };
    Kind kind = Kind::type1;
    double t1 = 1.0;
    double t2 = 1.0; // kinds 2, 3
    double l0 = 1.0; // kind 3
    int n = 2;

    static PLCandidate type1(double t1, int n);
    static PLCandidate type2(double t1, double t2, int n);
    static PLCandidate type3(double t1, double t2, double l0, int n);
};

double eval_candidate(const PLCandidate& cand, const Vec& x);

struct FacetDescriptor {
    enum class Shape { halfspace, hyperplane, slab };
    Shape shape;
    double lo; // -inf for the halfspace
    double hi;
};

FacetDescriptor facet_of_candidate(const PLCandidate& cand);

/// Product test bump phi1(x1) phi2(x') on Q = (-d, d) x (-1, 1)^{n-1} with
/// phi1 = cos^2(pi x1 / 2d), phi2 = prod cos^2(pi x_i / 2); the gradient mass
/// is the per-axis L1 total (2 per axis).
struct TestBump {
    double d = 0.0;
    double phi1_at_0 = 1.0;
    double norm_phi2_L1 = 1.0;
    double norm_grad_phi2_L1 = 0.0;
    bool canonical = true;
    int n = 2;
};

TestBump canonical_bumps(double d, int n); // InvalidDimension for n = 1

/// phi1(0) (b d |grad phi2|_1 - t1^{p-1} |phi2|_1); negative certifies the
/// candidate is not a weak solution. Type 3 requires d < l0.
double type1_residual_bound(const PLCandidate& cand, const EnergyModel& model,
                            const TestBump& bump);

/// Half the closed-form threshold d* = t1^{p-1} |phi2|_1 / (b |grad phi2|_1),
/// capped at 0.99 l0 for type 3.
double choose_d(const PLCandidate& cand, const EnergyModel& model, const TestBump& prototype);

/// Exact closed form -phi1(0) (2b + t1^{p-1} + t2^{p-1}) |phi2|_1 < 0.
double type2_residual(const PLCandidate& cand, const EnergyModel& model, const TestBump& bump);

struct GeneralizedResiduals {
    double mu1 = 0.0;          // <A(t1 e1), e1>
    double mu2 = 0.0;          // <A(-t2 e1), -e1> (type 2 only)
    double psi_line_mass = 0.0; // |Psi(0, grad' phi2)|_{L1(Q')}
    double value = 0.0;        // bound (types 1, 3) or exact residual (type 2)
    bool is_bound = true;
};

GeneralizedResiduals generalized_residuals(const PLCandidate& cand, const EnergyModel& model,
                                           const TestBump& bump);

/// Numerical evaluation of the tested weak form over Q with the candidate's
/// exact Z off the facet and the worst admissible Z on it; composite Simpson
/// with about grid_resolution sample points.
double quadrature_crosscheck(const PLCandidate& cand, const EnergyModel& model,
                             const TestBump& bump, long grid_resolution);

} // namespace tvpl
