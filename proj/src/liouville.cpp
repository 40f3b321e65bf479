#include "tvpl/liouville.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tvpl {

namespace {

void check_params(double t1, double t2, double l0, int n) {
    if (!(t1 > 0.0) || !(t2 > 0.0) || !(l0 > 0.0))
        throw InvalidRange("candidate slopes and slab width must be positive");
    if (n < 1 || n > 3) throw InvalidDimension("dimension must be 1, 2 or 3");
}

} // namespace

PLCandidate PLCandidate::type1(double t1, int n) {
    check_params(t1, 1.0, 1.0, n);
    return {Kind::type1, t1, 1.0, 1.0, n};
}

PLCandidate PLCandidate::type2(double t1, double t2, int n) {
    check_params(t1, t2, 1.0, n);
    return {Kind::type2, t1, t2, 1.0, n};
}

PLCandidate PLCandidate::type3(double t1, double t2, double l0, int n) {
    check_params(t1, t2, l0, n);
    return {Kind::type3, t1, t2, l0, n};
}

double eval_candidate(const PLCandidate& cand, const Vec& x) {
    double x1 = x[0];
    switch (cand.kind) {
    case PLCandidate::Kind::type1:
        return std::max(cand.t1 * x1, 0.0);
    case PLCandidate::Kind::type2:
        return std::max(cand.t1 * x1, -cand.t2 * x1);
    case PLCandidate::Kind::type3:
        return std::max({cand.t1 * x1, 0.0, -cand.t2 * (x1 + cand.l0)});
    }
    return 0.0;
}

FacetDescriptor facet_of_candidate(const PLCandidate& cand) {
    switch (cand.kind) {
    case PLCandidate::Kind::type1:
        return {FacetDescriptor::Shape::halfspace, -std::numeric_limits<double>::infinity(), 0.0};
    case PLCandidate::Kind::type2:
        return {FacetDescriptor::Shape::hyperplane, 0.0, 0.0};
    case PLCandidate::Kind::type3:
        return {FacetDescriptor::Shape::slab, -cand.l0, 0.0};
    }
    return {FacetDescriptor::Shape::hyperplane, 0.0, 0.0};
}

TestBump canonical_bumps(double d, int n) {
    if (n < 2) throw InvalidDimension("product bumps need n >= 2");
    if (n > 3) throw InvalidDimension("dimension must be at most 3");
    if (!(d > 0.0)) throw InvalidRange("half-width must be positive");
    // int cos^2(pi t/2) over (-1,1) is 1 per axis; int |(cos^2)'| is 2 per axis
    return {d, 1.0, 1.0, 2.0 * (n - 1), true, n};
}

double type1_residual_bound(const PLCandidate& cand, const EnergyModel& model,
                            const TestBump& bump) {
    if (cand.kind == PLCandidate::Kind::type2)
        throw InvalidRange("bound applies to type 1 and type 3 candidates");
    if (cand.kind == PLCandidate::Kind::type3 && bump.d >= cand.l0)
        throw SlabTooNarrow("need d < l0 so the test cube avoids the second kink");
    double t1p = std::pow(cand.t1, model.p() - 1.0);
    return bump.phi1_at_0 *
           (model.b() * bump.d * bump.norm_grad_phi2_L1 - t1p * bump.norm_phi2_L1);
}

double choose_d(const PLCandidate& cand, const EnergyModel& model, const TestBump& prototype) {
    double t1p = std::pow(cand.t1, model.p() - 1.0);
    double cap = cand.kind == PLCandidate::Kind::type3
                     ? 0.99 * cand.l0
                     : std::numeric_limits<double>::infinity();
    if (prototype.norm_grad_phi2_L1 == 0.0) return std::min(0.5, cap);
    double d_star = t1p * prototype.norm_phi2_L1 / (model.b() * prototype.norm_grad_phi2_L1);
    return std::min(0.5 * d_star, cap);
}

double type2_residual(const PLCandidate& cand, const EnergyModel& model, const TestBump& bump) {
    if (cand.kind != PLCandidate::Kind::type2)
        throw InvalidRange("closed form applies to type 2 candidates");
    double p = model.p();
    return -bump.phi1_at_0 *
           (2.0 * model.b() + std::pow(cand.t1, p - 1.0) + std::pow(cand.t2, p - 1.0)) *
           bump.norm_phi2_L1;
}

namespace {

// composite Simpson weights for N panels (N even) over [a, b]
struct Simpson {
    double a, h;
    int points; // N + 1
    Simpson(double a_, double b_, int panels) : a(a_), h((b_ - a_) / panels), points(panels + 1) {}
    double node(int k) const { return a + h * k; }
    double weight(int k) const {
        if (k == 0 || k == points - 1) return h / 3.0;
        return (k % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    }
};

int round_up_even(int k) { return k + (k % 2); }

double dphi2_axis(double t) { return -0.5 * M_PI * std::sin(M_PI * t); } // (cos^2(pi t/2))'
double phi2_axis(double t) {
    double c = std::cos(0.5 * M_PI * t);
    return c * c;
}

} // namespace

GeneralizedResiduals generalized_residuals(const PLCandidate& cand, const EnergyModel& model,
                                           const TestBump& bump) {
    if (model.variant() != EnergyVariant::generalized)
        throw NotGeneralized("use the standard closed forms for the (b, p) model");
    if (!bump.canonical) throw InvalidRange("generalized residuals expect the canonical bumps");
    int n = cand.n;
    if (model.dim() != n) throw InvalidModel("model and candidate dimensions differ");
    if (n < 2) throw InvalidDimension("generalized residuals need n >= 2");

    Vec e1 = Vec::Zero(n);
    e1[0] = 1.0;

    GeneralizedResiduals out;
    out.mu1 = model.grad_w(cand.t1 * e1).dot(e1);
    if (!(out.mu1 > 0.0)) throw Error("strict monotonicity of grad W failed");

    // |Psi(0, grad' phi2)|_{L1(Q')} by composite Simpson; kinks of the
    // integrand sit on panel boundaries
    int panels = n == 2 ? 8192 : 512;
    if (n == 2) {
        Simpson s(-1.0, 1.0, panels);
        double acc = 0.0;
        for (int k = 0; k < s.points; ++k) {
            Vec g = Vec::Zero(n);
            g[1] = dphi2_axis(s.node(k));
            acc += s.weight(k) * model.psi(g);
        }
        out.psi_line_mass = acc;
    } else {
        Simpson s(-1.0, 1.0, panels);
        double acc = 0.0;
        for (int k2 = 0; k2 < s.points; ++k2)
            for (int k3 = 0; k3 < s.points; ++k3) {
                double a2 = s.node(k2), a3 = s.node(k3);
                Vec g = Vec::Zero(n);
                g[1] = dphi2_axis(a2) * phi2_axis(a3);
                g[2] = phi2_axis(a2) * dphi2_axis(a3);
                acc += s.weight(k2) * s.weight(k3) * model.psi(g);
            }
        out.psi_line_mass = acc;
    }

    if (cand.kind == PLCandidate::Kind::type2) {
        out.mu2 = model.grad_w(-cand.t2 * e1).dot(-e1);
        if (!(out.mu2 > 0.0)) throw Error("strict monotonicity of grad W failed");
        out.is_bound = false;
        out.value = -bump.phi1_at_0 *
                    (model.psi(e1) + model.psi(-e1) + out.mu1 + out.mu2) * bump.norm_phi2_L1;
    } else {
        if (cand.kind == PLCandidate::Kind::type3 && bump.d >= cand.l0)
            throw SlabTooNarrow("need d < l0");
        out.is_bound = true;
        out.value =
            bump.phi1_at_0 * (bump.d * out.psi_line_mass - out.mu1 * bump.norm_phi2_L1);
    }
    return out;
}

double quadrature_crosscheck(const PLCandidate& cand, const EnergyModel& model,
                             const TestBump& bump, long grid_resolution) {
    if (!bump.canonical) throw InvalidRange("crosscheck expects the canonical bumps");
    int n = cand.n;
    if (n < 2) throw InvalidDimension("crosscheck needs n >= 2");
    if (model.dim() != n) throw InvalidModel("model and candidate dimensions differ");
    if (cand.kind == PLCandidate::Kind::type3 && bump.d >= cand.l0)
        throw SlabTooNarrow("need d < l0");

    double d = bump.d;
    Vec e1 = Vec::Zero(n);
    e1[0] = 1.0;
    Vec flux_r = model.grad_psi(e1) + model.grad_w(cand.t1 * e1);
    Vec flux_l = Vec::Zero(n);
    bool worst_case_left = cand.kind != PLCandidate::Kind::type2;
    if (!worst_case_left) flux_l = model.grad_psi(-e1) + model.grad_w(-cand.t2 * e1);

    int per_axis = std::max(8, static_cast<int>(std::floor(
                                   std::pow(static_cast<double>(grid_resolution), 1.0 / n))));
    int n1 = round_up_even(std::max(4, per_axis / 2)); // panels per half of the x1 axis
    int nper = round_up_even(per_axis);

    auto phi1 = [&](double t) {
        double c = std::cos(0.5 * M_PI * t / d);
        return c * c;
    };
    auto dphi1 = [&](double t) { return -0.5 * M_PI / d * std::sin(M_PI * t / d); };

    // integrand at x = (x1, x'): exact flux off the facet, the admissible
    // worst case sup_Z <Z, grad phi> = Psi(grad phi) on it
    auto integrand = [&](bool right, double x1, double p2, const Vec& dp2) {
        Vec grad_phi(n);
        grad_phi[0] = dphi1(x1) * p2;
        for (int a = 1; a < n; ++a) grad_phi[a] = phi1(x1) * dp2[a - 1];
        if (right) return flux_r.dot(grad_phi);
        if (worst_case_left) return model.psi(grad_phi);
        return flux_l.dot(grad_phi);
    };

    Simpson sl(-d, 0.0, n1), sr(0.0, d, n1), sp(-1.0, 1.0, nper);
    double acc = 0.0;
    if (n == 2) {
        for (int k = 0; k < sp.points; ++k) {
            double t = sp.node(k);
            double p2 = phi2_axis(t);
            Vec dp2(1);
            dp2[0] = dphi2_axis(t);
            double inner = 0.0;
            for (int m = 0; m < sl.points; ++m)
                inner += sl.weight(m) * integrand(false, sl.node(m), p2, dp2);
            for (int m = 0; m < sr.points; ++m)
                inner += sr.weight(m) * integrand(true, sr.node(m), p2, dp2);
            acc += sp.weight(k) * inner;
        }
    } else {
        for (int k2 = 0; k2 < sp.points; ++k2)
            for (int k3 = 0; k3 < sp.points; ++k3) {
                double a2 = sp.node(k2), a3 = sp.node(k3);
                double p2 = phi2_axis(a2) * phi2_axis(a3);
                Vec dp2(2);
                dp2[0] = dphi2_axis(a2) * phi2_axis(a3);
                dp2[1] = phi2_axis(a2) * dphi2_axis(a3);
                double inner = 0.0;
                for (int m = 0; m < sl.points; ++m)
                    inner += sl.weight(m) * integrand(false, sl.node(m), p2, dp2);
                for (int m = 0; m < sr.points; ++m)
                    inner += sr.weight(m) * integrand(true, sr.node(m), p2, dp2);
                acc += sp.weight(k2) * sp.weight(k3) * inner;
            }
    }
    return acc;
}

} // namespace tvpl
