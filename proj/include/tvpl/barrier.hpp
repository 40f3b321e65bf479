#pragma once

#include "tvpl/energy.hpp"

namespace tvpl {

enum class BarrierVariant { exponential, power };

/// Inputs shared by both barrier constructions: the affine part has slope c,
/// the comparison gap on the inner sphere is m, the annulus is
/// E_R(center) = B_R \ closure(B_{R/2}).
struct BarrierContext {
    EnergyModel model;     // standard (b, p) in the fixtures
    Vec c;                 // affine slope, nonzero
    double m = 1.0;
    double R = 1.0;
    Vec center;

    static BarrierContext make(const EnergyModel& model, const Vec& c, double m, double R,
                               const Vec& center);
    static BarrierContext make(const EnergyModel& model, const Vec& c, double m, double R);
    int dim() const { return model.dim(); }
};

struct BarrierSpec {
    BarrierVariant variant = BarrierVariant::exponential;
    double alpha = 0.0;
    double beta = 1.0;     // 1 for the exponential variant
    BarrierContext context;
    EllipticityBounds bounds; // from mu0 = |c|/2, M0 = 3|c|/2
};

struct ConditionReport {
    bool satisfied = false;
    double margin = 0.0; // >= 0 (or > 0 where strict) when satisfied
};

/// The four exponential-variant conditions at a given alpha; margins are the
/// slack of each inequality.
struct ExponentialConditions {
    ConditionReport c1;    // m >= e^{-a R^2/4} - e^{-a R^2}
    ConditionReport c2;    // a e^{-a R^2/4} <= |c|/(4R)
    ConditionReport c3;    // a > 2/R^2
    ConditionReport pucci; // lambda (R^2 a/2 - 1) - (n-1) Lambda > 0
    bool all() const {
        return c1.satisfied && c2.satisfied && c3.satisfied && pucci.satisfied;
    }
};

ExponentialConditions exponential_conditions(double alpha, const BarrierContext& ctx,
                                             const EllipticityBounds& bounds);

/// Smallest alpha (to 1e-9 relative) satisfying all four conditions, found by
/// bracket doubling plus bisection.
BarrierSpec construct_exponential(const BarrierContext& ctx);

/// alpha = Pucci threshold + 1, beta = 0.99 min of the two upper bounds.
BarrierSpec construct_power(const BarrierContext& ctx);

struct BarrierEval {
    double h = 0.0;
    Vec grad;
    Mat hess;
    double eig_parallel = 0.0;
    double eig_perp = 0.0; // multiplicity n-1
};

BarrierEval eval_barrier(const BarrierSpec& spec, const Vec& x);

struct SamplePoint {
    Vec x;
    double value = 0.0;
};

struct BarrierCertificate {
    bool pass = false;
    long sample_count = 0;
    // annulus extrema
    double h_min = 0.0, h_max = 0.0;
    double grad_h_max = 0.0;
    double pucci_min = 0.0;
    double trace_min = 0.0; // tr(hess E(grad v) hess h), v = h + <c, x>
    double grad_v_min = 0.0, grad_v_max = 0.0;
    // sphere extrema
    double h_sphere_max_abs = 0.0;
    double dnu_h_max = 0.0; // must stay < 0
    // construction conditions (exponential: c1..c3 + pucci; power: the two
    // beta bounds + pucci)
    ExponentialConditions conditions;
    SamplePoint worst_pucci, worst_trace, worst_grad;
};

/// Deterministic low-discrepancy verification over the annulus and the outer
/// sphere; fails on the first strict inequality violated at any sample.
BarrierCertificate verify_barrier(const BarrierSpec& spec, long sample_count);

} // namespace tvpl
