#include "tvpl/barrier.hpp"

#include <cmath>

namespace tvpl {

BarrierContext BarrierContext::make(const EnergyModel& model, const Vec& c, double m, double R,
                                    const Vec& center) {
    if (c.size() != model.dim() || c.isZero(0.0))
        throw InvalidModel("affine slope must be a nonzero n-vector");
    if (!(m > 0.0) || !(R > 0.0)) throw InvalidRange("need m > 0 and R > 0");
    BarrierContext ctx{model, c, m, R, center};
    if (center.size() != model.dim()) throw InvalidModel("center dimension mismatch");
    return ctx;
}

BarrierContext BarrierContext::make(const EnergyModel& model, const Vec& c, double m, double R) {
    return make(model, c, m, R, Vec::Zero(model.dim()));
}

namespace {

EllipticityBounds context_bounds(const BarrierContext& ctx) {
    double cn = ctx.c.norm();
    return lambda_Lambda_bounds(ctx.model, cn / 2.0, 3.0 * cn / 2.0);
}

} // namespace

ExponentialConditions exponential_conditions(double alpha, const BarrierContext& ctx,
                                             const EllipticityBounds& bounds) {
    double R = ctx.R, R2 = R * R;
    int n = ctx.dim();
    ExponentialConditions c;
    // m e^{aR^2} >= e^{3aR^2/4} - 1, rescaled by e^{-aR^2} for stability
    c.c1.margin = ctx.m - (std::exp(-alpha * R2 / 4.0) - std::exp(-alpha * R2));
    c.c1.satisfied = c.c1.margin >= 0.0;
    c.c2.margin = ctx.c.norm() / (4.0 * R) - alpha * std::exp(-alpha * R2 / 4.0);
    c.c2.satisfied = c.c2.margin >= 0.0;
    c.c3.margin = alpha - 2.0 / R2;
    c.c3.satisfied = c.c3.margin > 0.0;
    c.pucci.margin = bounds.lambda * (R2 * alpha / 2.0 - 1.0) - (n - 1) * bounds.Lambda;
    c.pucci.satisfied = c.pucci.margin > 0.0;
    return c;
}

BarrierSpec construct_exponential(const BarrierContext& ctx) {
    EllipticityBounds bounds = context_bounds(ctx);
    auto feasible = [&](double a) { return exponential_conditions(a, ctx, bounds).all(); };

    double hi = 1.0;
    while (!feasible(hi)) {
        hi *= 2.0;
        if (hi > 1e300) throw Error("no feasible alpha found");
    }
    double lo = hi / 2.0;
    // keep [lo, hi] with hi feasible; stop at 1e-9 relative
    while (hi - lo > 1e-9 * hi) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return BarrierSpec{BarrierVariant::exponential, hi, 1.0, ctx, bounds};
}

BarrierSpec construct_power(const BarrierContext& ctx) {
    EllipticityBounds bounds = context_bounds(ctx);
    int n = ctx.dim();
    double threshold = (n - 1) * bounds.Lambda / bounds.lambda - 1.0;
    double alpha = std::max(threshold + 1.0, 1.0);
    // beta caps, computed in log space to survive large alpha
    double log_b1 = std::log(ctx.m) + alpha * std::log(ctx.R) -
                    (alpha * std::log(2.0) + std::log1p(-std::pow(2.0, -alpha)));
    double log_b2 =
        std::log(ctx.c.norm()) + (alpha + 1.0) * std::log(ctx.R / 2.0) - std::log(2.0 * alpha);
    double beta = 0.99 * std::exp(std::min(log_b1, log_b2));
    if (!(beta > 0.0))
        throw InvalidRange("barrier amplitude underflowed; ellipticity ratio too extreme");
    return BarrierSpec{BarrierVariant::power, alpha, beta, ctx, bounds};
}

BarrierEval eval_barrier(const BarrierSpec& spec, const Vec& x) {
    const BarrierContext& ctx = spec.context;
    int n = ctx.dim();
    Vec d = x - ctx.center;
    double r2 = d.squaredNorm();
    if (r2 == 0.0) throw CenterSingularity{};
    double r = std::sqrt(r2);
    Vec dhat = d / r;
    double a = spec.alpha;

    BarrierEval ev;
    if (spec.variant == BarrierVariant::exponential) {
        double e = std::exp(-a * r2);
        ev.h = e - std::exp(-a * ctx.R * ctx.R);
        ev.grad = -2.0 * a * e * d;
        ev.hess = -2.0 * a * e * Mat::Identity(n, n) + 4.0 * a * a * e * d * d.transpose();
        ev.eig_parallel = 4.0 * a * a * r2 * e - 2.0 * a * e;
        ev.eig_perp = -2.0 * a * e;
    } else {
        double beta = spec.beta;
        double pw = std::pow(r, -a - 2.0);
        ev.h = beta * (std::pow(r, -a) - std::pow(ctx.R, -a));
        ev.grad = -a * beta * pw * d;
        ev.hess = a * beta * pw * ((a + 2.0) * dhat * dhat.transpose() - Mat::Identity(n, n));
        ev.eig_parallel = (a + 1.0) * a * beta * pw;
        ev.eig_perp = -a * beta * pw;
    }
    return ev;
}

namespace {

double halton(long index, int base) {
    double f = 1.0, r = 0.0;
    long i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

Vec direction_from(double t1, double t2, int n) {
    Vec d(n);
    if (n == 1) {
        d[0] = t1 < 0.5 ? -1.0 : 1.0;
    } else if (n == 2) {
        double th = 2.0 * M_PI * t1;
        d << std::cos(th), std::sin(th);
    } else {
        double z = 2.0 * t1 - 1.0;
        double th = 2.0 * M_PI * t2;
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        d << s * std::cos(th), s * std::sin(th), z;
    }
    return d;
}

} // namespace

BarrierCertificate verify_barrier(const BarrierSpec& spec, long sample_count) {
    if (sample_count < 1) throw InvalidRange("need at least one sample");
    const BarrierContext& ctx = spec.context;
    int n = ctx.dim();
    double R = ctx.R;
    double cn = ctx.c.norm();

    BarrierCertificate cert;
    cert.sample_count = sample_count;
    cert.conditions = spec.variant == BarrierVariant::exponential
                          ? exponential_conditions(spec.alpha, ctx, spec.bounds)
                          : ExponentialConditions{};
    if (spec.variant == BarrierVariant::power) {
        // reuse the report slots: c1/c2 are the beta caps, pucci the closed form
        double b1 = ctx.m * std::pow(R, spec.alpha) / (std::pow(2.0, spec.alpha) - 1.0);
        double b2 = cn * std::pow(R / 2.0, spec.alpha + 1.0) / (2.0 * spec.alpha);
        cert.conditions.c1 = {spec.beta <= b1, b1 - spec.beta};
        cert.conditions.c2 = {spec.beta <= b2, b2 - spec.beta};
        cert.conditions.c3 = {spec.alpha > 0.0, spec.alpha};
        double pm = (spec.alpha + 1.0) * spec.bounds.lambda - (n - 1) * spec.bounds.Lambda;
        cert.conditions.pucci = {pm > 0.0, pm};
    }

    bool first = true;
    for (long k = 1; k <= sample_count; ++k) {
        double t0 = halton(k, 2), t1 = halton(k, 3), t2 = halton(k, 5);
        double r = R / 2.0 + (R / 2.0) * t0;
        Vec x = ctx.center + r * direction_from(t1, t2, n);
        BarrierEval ev = eval_barrier(spec, x);
        Vec grad_v = ev.grad + ctx.c;
        double gv = grad_v.norm();
        double gh = ev.grad.norm();
        double pucci = pucci_minus(ev.hess, spec.bounds);
        double trace = (hessian_energy(ctx.model, grad_v) * ev.hess).trace();

        if (first) {
            cert.h_min = cert.h_max = ev.h;
            cert.grad_h_max = gh;
            cert.pucci_min = pucci;
            cert.trace_min = trace;
            cert.grad_v_min = cert.grad_v_max = gv;
            cert.worst_pucci = {x, pucci};
            cert.worst_trace = {x, trace};
            cert.worst_grad = {x, gh};
            first = false;
        } else {
            cert.h_min = std::min(cert.h_min, ev.h);
            cert.h_max = std::max(cert.h_max, ev.h);
            if (gh > cert.grad_h_max) {
                cert.grad_h_max = gh;
                cert.worst_grad = {x, gh};
            }
            if (pucci < cert.pucci_min) {
                cert.pucci_min = pucci;
                cert.worst_pucci = {x, pucci};
            }
            if (trace < cert.trace_min) {
                cert.trace_min = trace;
                cert.worst_trace = {x, trace};
            }
            cert.grad_v_min = std::min(cert.grad_v_min, gv);
            cert.grad_v_max = std::max(cert.grad_v_max, gv);
        }
    }

    // outer-sphere samples: h = 0 and the outward normal derivative is negative
    long sphere_samples = std::max<long>(1, sample_count / 10);
    bool dnu_first = true;
    for (long k = 1; k <= sphere_samples; ++k) {
        double t1 = halton(k, 3), t2 = halton(k, 5);
        Vec nu = direction_from(t1, t2, n);
        Vec x = ctx.center + R * nu;
        BarrierEval ev = eval_barrier(spec, x);
        double dnu = ev.grad.dot(nu);
        cert.h_sphere_max_abs = std::max(cert.h_sphere_max_abs, std::abs(ev.h));
        if (dnu_first || dnu > cert.dnu_h_max) {
            cert.dnu_h_max = dnu;
            dnu_first = false;
        }
    }

    cert.pass = cert.h_min >= 0.0 && cert.h_max <= ctx.m && cert.grad_h_max <= cn / 2.0 &&
                cert.pucci_min > 0.0 && cert.trace_min > 0.0 && cert.dnu_h_max < 0.0 &&
                cert.h_sphere_max_abs <= 1e-12 * (1.0 + ctx.m);
    return cert;
}

} // namespace tvpl
