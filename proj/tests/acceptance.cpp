// Acceptance battery: prints one pass/fail line per criterion and exits with
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "tvpl/barrier.hpp"
#include "tvpl/convex.hpp"
#include "tvpl/liouville.hpp"
#include "tvpl/solver.hpp"

using namespace tvpl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;

void report(int criterion, const char* what, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s] %s%s%s\n", criterion, pass ? "PASS" : "FAIL", what,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

struct SolveStats {
    double sup_err = 0.0;
    double jump = 0.0;
    double seconds = 0.0;
};

SolveStats run_fixture(double p, int cells) {
    auto model = EnergyModel::standard(1.0, p, 1);
    Grid g = Grid::line(cells, -1.0, 1.0);
    auto oracle = oracle_solve_1d(model, g, -1.0, 0.0);
    ProblemInstance inst{model, g, ScalarField(g, -1.0), oracle.u, kInf};
    SolveOptions opts;
    opts.max_iters = 600000;
    opts.tol_primal = p == 2.0 ? 1e-10 : 1e-8;
    opts.tol_residual = p == 2.0 ? 1e-9 : 1e-8;

    auto t0 = std::chrono::steady_clock::now();
    WeakPair sol = solve(inst, opts);
    SolveStats st;
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (int i = 0; i < g.nodes_x(); ++i)
        st.sup_err = std::max(st.sup_err, std::abs(sol.u.at(i) - oracle.u.at(i)));
    // gradient oscillation measured across the facet boundary at x = 0
    std::vector<std::uint8_t> near_boundary(g.node_count(), 0);
    for (int i = 0; i < g.nodes_x(); ++i)
        if (std::abs(g.x(i)) <= 0.1) near_boundary[i] = 1;
    st.jump = gradient_modulus(sol.u, near_boundary).max_jump;
    return st;
}

void criterion_1() {
    bool pass = true;
    std::string detail;
    for (double p : {2.0, 3.0}) {
        SolveStats coarse = run_fixture(p, 1024);
        SolveStats fine = run_fixture(p, 2048);
        bool sup_ok = coarse.sup_err <= 5e-3;
        bool jump_ok = coarse.jump <= 2e-2;
        bool time_ok = coarse.seconds <= 10.0 && fine.seconds <= 10.0;
        // halving h halves both; errors at the solver floor (far below the
        // acceptance threshold) count as converged past measurability
        bool sup_halves =
            fine.sup_err <= 0.51 * coarse.sup_err || std::max(fine.sup_err, coarse.sup_err) <= 1e-6;
        bool jump_halves = fine.jump <= 0.51 * coarse.jump;
        pass = pass && sup_ok && jump_ok && time_ok && sup_halves && jump_halves;
        detail += fmt("[p=%g: sup %.2e->%.2e (<=5e-3%s, halves%s) jump %.3e->%.3e (<=2e-2%s, "
                      "halves%s) %.1fs/%.1fs] ",
                      p, coarse.sup_err, fine.sup_err, sup_ok ? "" : " VIOLATED",
                      sup_halves ? "" : " VIOLATED", coarse.jump, fine.jump,
                      jump_ok ? "" : " VIOLATED", jump_halves ? "" : " VIOLATED",
                      coarse.seconds, fine.seconds);
    }
    report(1, "1D C1-regularity reproduction", pass, detail);
}

void criterion_2() {
    int cells = 1024;
    auto model = EnergyModel::standard(1.0, 2.0, 1);
    Grid g = Grid::line(cells, -1.0, 1.0);
    auto oracle = oracle_solve_1d(model, g, -1.0, 0.0);
    ProblemInstance inst{model, g, ScalarField(g, -1.0), oracle.u, kInf};
    SolveOptions opts;
    opts.tol_primal = 1e-10;
    opts.tol_residual = 1e-9;
    opts.max_iters = 400000;
    WeakPair sol = solve(inst, opts);

    double h = g.spacing[0];
    auto rep = facet_detect(sol.u, h * h);
    // oracle facet [-1, 0] = nodes 0 .. cells/2
    long lo = -1, hi = -1;
    for (long k = 0; k < static_cast<long>(rep.facet_mask.size()); ++k)
        if (rep.facet_mask[k]) {
            if (lo < 0) lo = k;
            hi = k;
        }
    bool pass = rep.connected && lo == 0 && std::abs(hi - cells / 2) <= 2;
    report(2, "facet identification within 2 cells", pass,
           fmt("detected nodes [%ld, %ld], oracle [0, %d]", lo, hi, cells / 2));
}

void criterion_3() {
    bool pass = true;
    std::string detail;
    for (double p : {2.0, 3.0}) {
        Vec c = Vec::Zero(2);
        c[0] = 1.0;
        auto ctx = BarrierContext::make(EnergyModel::standard(1.0, p, 2), c, 1.0, 1.0);
        for (auto variant : {BarrierVariant::exponential, BarrierVariant::power}) {
            auto t0 = std::chrono::steady_clock::now();
            BarrierSpec spec = variant == BarrierVariant::exponential
                                   ? construct_exponential(ctx)
                                   : construct_power(ctx);
            auto cert = verify_barrier(spec, 10000);
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            bool ok = cert.pass && cert.h_min >= 0.0 && cert.h_max <= 1.0 &&
                      cert.dnu_h_max < 0.0 && cert.grad_h_max <= 0.5 && cert.pucci_min > 0.0 &&
                      cert.trace_min > 0.0 && secs <= 1.0;
            pass = pass && ok;
            detail += fmt("[p=%g %s: %s %.2fs] ", p,
                          variant == BarrierVariant::exponential ? "exp" : "pow",
                          ok ? "ok" : "VIOLATED", secs);
        }
    }
    // the deliberate sub-threshold alpha fixture must fail with a witness
    Vec c = Vec::Zero(2);
    c[0] = 1.0;
    auto ctx = BarrierContext::make(EnergyModel::standard(1.0, 2.0, 2), c, 1.0, 1.0);
    BarrierSpec broken = construct_exponential(ctx);
    broken.alpha = 0.5;
    auto cert = verify_barrier(broken, 10000);
    bool witness_ok = !cert.pass && cert.pucci_min <= 0.0;
    pass = pass && witness_ok;
    detail += fmt("[sub-threshold alpha rejected: %s]", witness_ok ? "yes" : "NO");
    report(3, "barrier certificates", pass, detail);
}

void criterion_4() {
    bool pass = true;
    std::string detail;

    // exact type-2 form vs quadrature at 10^6 points
    struct Cfg {
        double b, p, t1, t2;
    };
    double worst_rel = 0.0;
    for (Cfg cfg : {Cfg{1.0, 2.0, 1.0, 1.0}, Cfg{0.5, 3.0, 1.0, 2.0}, Cfg{2.0, 2.5, 0.7, 1.3}}) {
        auto model = EnergyModel::standard(cfg.b, cfg.p, 2);
        auto cand = PLCandidate::type2(cfg.t1, cfg.t2, 2);
        auto bump = canonical_bumps(0.25, 2);
        double closed = type2_residual(cand, model, bump);
        double expect = -(2.0 * cfg.b + std::pow(cfg.t1, cfg.p - 1.0) +
                          std::pow(cfg.t2, cfg.p - 1.0));
        double cc = quadrature_crosscheck(cand, model, bump, 1000000);
        double rel = std::abs(cc - closed) / std::abs(closed);
        worst_rel = std::max(worst_rel, rel);
        pass = pass && std::abs(closed - expect) <= 1e-12 * std::abs(expect) && rel <= 1e-8;
    }
    detail += fmt("[type-2 closed form vs quadrature: worst rel %.2e] ", worst_rel);

    // choose_d certifies across a 10^3 random sweep
    std::mt19937_64 rng(0xacce97);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto proto = canonical_bumps(0.5, 2);
    int bad = 0;
    for (int k = 0; k < 1000; ++k) {
        double b = 0.05 + 5.0 * unif(rng);
        double p = 1.05 + 3.0 * unif(rng);
        double t1 = 0.05 + 5.0 * unif(rng);
        double t2 = 0.05 + 5.0 * unif(rng);
        double l0 = 0.05 + 3.0 * unif(rng);
        auto model = EnergyModel::standard(b, p, 2);
        if (k % 2 == 0) {
            auto cand = PLCandidate::type1(t1, 2);
            double d = choose_d(cand, model, proto);
            if (!(type1_residual_bound(cand, model, canonical_bumps(d, 2)) < 0.0)) ++bad;
        } else {
            auto cand = PLCandidate::type3(t1, t2, l0, 2);
            double d = choose_d(cand, model, proto);
            if (!(d < l0) ||
                !(type1_residual_bound(cand, model, canonical_bumps(d, 2)) < 0.0))
                ++bad;
        }
    }
    pass = pass && bad == 0;
    detail += fmt("[choose_d sweep: %d/1000 failures]", bad);
    report(4, "piecewise-linear non-solution certificates", pass, detail);
}

void criterion_5() {
    std::mt19937_64 rng(0xacce95);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto rand_vec = [&](int n) {
        Vec v(n);
        for (int k = 0; k < n; ++k) v[k] = -2.0 + 4.0 * unif(rng);
        if (v.norm() < 1e-3) v[0] += 1.0;
        return v;
    };
    auto rand_spd = [&](int n) {
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = -1.0 + 2.0 * unif(rng);
        return Mat(a * a.transpose() + 0.3 * Mat::Identity(n, n));
    };

    int bad_euler = 0, bad_hom = 0, bad_tri = 0, bad_cs = 0, bad_member = 0, bad_degen = 0;
    for (int k = 0; k < 1000; ++k) {
        int n = 2 + (k % 2);
        EnergyModel model =
            k % 2 == 0 ? EnergyModel::standard(0.2 + 3.0 * unif(rng), 1.2 + 3.0 * unif(rng), n)
                       : EnergyModel::generalized(0.2 + 3.0 * unif(rng),
                                                  1.2 + 3.0 * unif(rng), rand_spd(n));
        Vec z = rand_vec(n);
        if (std::abs(model.grad_psi(z).dot(z) - model.psi(z)) > 1e-10 * (1.0 + model.psi(z)))
            ++bad_euler;
        double lam = 0.01 + 99.99 * unif(rng);
        if ((model.grad_psi(lam * z) - model.grad_psi(z)).norm() >
            1e-10 * (1.0 + model.grad_psi(z).norm()))
            ++bad_hom;
        if ((model.hess_psi(lam * z) - model.hess_psi(z) / lam).norm() >
            1e-10 * (1.0 + model.hess_psi(z).norm() / lam))
            ++bad_hom;
        Vec z2 = rand_vec(n);
        if (model.psi(z + z2) > model.psi(z) + model.psi(z2) + 1e-10 * (1.0 + model.psi(z)))
            ++bad_tri;
        if (z.dot(z2) > model.psi(z) * support_function(model, z2) + 1e-10 * (1.0 + z.norm()))
            ++bad_cs;
        // membership symmetry: grad Psi(z) belongs to dPsi at z, at every
        // positive rescaling of z, and at the origin
        Vec zeta = model.grad_psi(z);
        if (!subdifferential_membership(model, z, zeta, 1e-10)) ++bad_member;
        if (!subdifferential_membership(model, lam * z, zeta, 1e-10)) ++bad_member;
        if (!subdifferential_membership(model, Vec::Zero(n), zeta, 1e-10)) ++bad_member;
        if (subdifferential_membership(model, Vec::Zero(n), Vec(2.0 * zeta), 1e-10))
            ++bad_member;
        if ((model.hess_psi(z) * z).norm() > 1e-12 * (1.0 + model.hess_psi(z).norm()))
            ++bad_degen;
    }
    bool pass = bad_euler + bad_hom + bad_tri + bad_cs + bad_member + bad_degen == 0;
    report(5, "convex-analysis identity suite", pass,
           fmt("euler %d, homogeneity %d, triangle %d, cauchy-schwarz %d, membership %d, "
               "degenerate %d failures of 1000 each",
               bad_euler, bad_hom, bad_tri, bad_cs, bad_member, bad_degen));
}

void criterion_6() {
    std::mt19937_64 rng(0xacce96);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> mdist(1, 6);
    int bad = 0;
    for (int rep = 0; rep < 100; ++rep) {
        bool two = rep % 2 == 0;
        Grid g = two ? Grid::rectangle(10, 8, -1.0, 1.0, -1.0, 1.0) : Grid::line(16, -1.0, 1.0);
        ScalarField u(g, 0.0, BoundaryMode::zero_extension);
        for (int j = 0; j < g.nodes_y(); ++j)
            for (int i = 0; i < g.nodes_x(); ++i)
                u.at(i, j) = g.is_boundary_node(i, j) ? 0.0 : unif(rng);
        for (double p : {1.5, 2.0, 3.0})
            for (int axis = 0; axis < g.dim; ++axis) {
                double step = mdist(rng) * g.spacing[axis] * (rep % 3 == 0 ? -1.0 : 1.0);
                if (lp_norm(difference_quotient(u, axis, step), p) >
                    lp_norm(grad_h(u), p) * (1.0 + 1e-12))
                    ++bad;
            }
    }
    report(6, "difference-quotient Poincare inequality", bad == 0,
           fmt("%d failures of 600 field/exponent/axis combinations", bad));
}

void criterion_7() {
    std::mt19937_64 rng(0xacce98);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_int_distribution<int> node(1, 98);
    int bad = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Grid g = Grid::line(99, -1.0, 1.0);
        std::vector<double> slopes(99);
        for (double& s : slopes) s = unif(rng);
        std::sort(slopes.begin(), slopes.end());
        ScalarField u(g);
        u.at(0) = unif(rng);
        for (int i = 0; i < 99; ++i) u.at(i + 1) = u.at(i) + slopes[i] * g.spacing[0];
        int i2 = node(rng), i1 = node(rng);
        if (i1 == i2) i1 = i2 == 1 ? 2 : i2 - 1;
        auto est = subdifferential_at(u, i2, 1e-12);
        Eigen::VectorXd w(1);
        w << est.witness[0];
        if (!slope_bound_check(u, i1, 0, i2, 0, w, 1e-10)) ++bad;
    }
    report(7, "convexity slope bound", bad == 0, fmt("%d failures of 100", bad));
}

void criterion_8() {
    std::mt19937_64 rng(0xacce99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int bad = 0;
    for (int rep = 0; rep < 50; ++rep) {
        double b = 0.5 + unif(rng);
        double p = 1.5 + 2.0 * unif(rng);
        double f = -2.0 * unif(rng);
        double q0 = -0.5 + unif(rng);
        double delta = 0.05 + unif(rng);
        double shift = unif(rng);
        auto model = EnergyModel::standard(b, p, 1);
        Grid g = Grid::line(257, -1.0, 1.0);
        auto lo = oracle_solve_1d(model, g, f, q0);
        auto hi = oracle_solve_1d(model, g, f, q0 + delta);
        for (double& v : hi.u.values) v += shift;
        try {
            if (!comparison_check(lo.u, hi.u, 1e-10)) ++bad;
        } catch (const BoundaryOrderViolated&) {
            ++bad;
        }
    }
    report(8, "comparison principle on ordered oracle pairs", bad == 0,
           fmt("%d failures of 50", bad));
}

void criterion_9() {
    auto model = EnergyModel::standard(1.0, 2.0, 1);
    Grid g = Grid::line(1024, -1.0, 1.0);
    auto oracle = oracle_solve_1d(model, g, -1.0, 0.0);
    std::vector<double> scales{0.25, 0.125, 0.0625, 0.03125, 0.015625};

    auto monotone = [](const std::vector<double>& d) {
        for (size_t k = 0; k + 1 < d.size(); ++k)
            if (d[k + 1] > d[k] + 1e-14) return false;
        return true;
    };

    auto interior = blow_up(oracle.u, {-0.5, 0.0}, scales, 0.9);
    bool ok_int = interior.kind == BlowUpLimit::zero && monotone(interior.deviations);

    auto boundary = blow_up(oracle.u, {0.0, 0.0}, scales, 0.9);
    bool ok_bnd = boundary.kind == BlowUpLimit::zero && monotone(boundary.deviations);

    auto regular = blow_up(oracle.u, {0.5, 0.0}, scales, 0.9);
    double slope_err = std::abs(regular.affine_slope[0] - 0.5); // oracle u'(0.5)
    bool ok_reg = regular.kind == BlowUpLimit::affine && slope_err <= 1e-3;

    report(9, "blow-up classification", ok_int && ok_bnd && ok_reg,
           fmt("facet interior %s, facet boundary %s, regular point %s (slope err %.1e)",
               ok_int ? "zero" : "WRONG", ok_bnd ? "zero" : "WRONG",
               ok_reg ? "affine" : "WRONG", slope_err));
}

void criterion_10() {
    std::mt19937_64 rng(0xacce9a);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int bad_ratio = 0, bad_sandwich = 0;
    for (int k = 0; k < 1000; ++k) {
        int n = 2 + (k % 2);
        auto model =
            EnergyModel::standard(0.1 + 5.0 * unif(rng), 1.1 + 4.0 * unif(rng), n);
        Vec z(n);
        for (int a = 0; a < n; ++a) z[a] = -2.0 + 4.0 * unif(rng);
        if (z.norm() < 1e-3) z[0] += 1.0;
        auto r = ellipticity_ratio(model, z);
        if (r.exact > r.closed_form_bound * (1.0 + 1e-12)) ++bad_ratio;

        double mu0 = 0.1 + unif(rng);
        double M0 = mu0 + 2.0 * unif(rng);
        auto bounds = lambda_Lambda_bounds(model, mu0, M0);
        Vec dir = z / z.norm();
        Vec za = (mu0 + (M0 - mu0) * unif(rng)) * dir;
        Eigen::SelfAdjointEigenSolver<Mat> es(hessian_energy(model, za));
        if (es.eigenvalues().minCoeff() < bounds.lambda * (1.0 - 1e-10) ||
            es.eigenvalues().maxCoeff() > bounds.Lambda * (1.0 + 1e-10))
            ++bad_sandwich;
    }
    report(10, "ellipticity ledger", bad_ratio + bad_sandwich == 0,
           fmt("ratio-bound %d, eigenvalue-sandwich %d failures of 1000 each", bad_ratio,
               bad_sandwich));
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
