#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "tvpl/energy.hpp"

using namespace tvpl;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    Vec vector(int n, double lo = -2.0, double hi = 2.0) {
        Vec v(n);
        for (int k = 0; k < n; ++k) v[k] = uniform(lo, hi);
        return v;
    }
    Vec nonzero(int n) {
        for (;;) {
            Vec v = vector(n);
            if (v.norm() > 1e-3) return v;
        }
    }
    Mat spd(int n) {
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = uniform(-1.0, 1.0);
        return a * a.transpose() + 0.3 * Mat::Identity(n, n);
    }
};

EnergyModel random_generalized(Rng& rng, int n) {
    return EnergyModel::generalized(rng.uniform(0.2, 3.0), rng.uniform(1.2, 4.0), rng.spd(n));
}

} // namespace

TEST_CASE("energy evaluation") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    CHECK(eval_energy(m, vec2(0, 0)) == 0.0);
    CHECK(eval_energy(m, vec2(1, 0)) == doctest::Approx(1.5).epsilon(1e-14));
    auto m2 = EnergyModel::standard(2.0, 3.0, 2);
    CHECK(eval_energy(m2, vec2(0, 2)) == doctest::Approx(4.0 + 8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("energy gradient") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    Vec g = grad_energy(m, vec2(1, 0));
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g[1] == 0.0);
    auto m3 = EnergyModel::standard(1.0, 3.0, 2);
    Vec g3 = grad_energy(m3, vec2(0, 2));
    CHECK(g3[0] == 0.0);
    CHECK(g3[1] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK_THROWS_AS(grad_energy(m, vec2(0, 0)), ZeroGradientPoint);
}

TEST_CASE("energy hessian closed forms") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    Mat h = hessian_energy(m, vec2(1, 0));
    CHECK(h(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(h(0, 1) == doctest::Approx(0.0));

    // vanishing b leaves the pure Laplacian
    auto mb = EnergyModel::standard(1e-12, 2.0, 2);
    Mat hb = hessian_energy(mb, vec2(0.3, -0.7));
    CHECK((hb - Mat::Identity(2, 2)).norm() < 1e-10);

    auto m3 = EnergyModel::standard(1.0, 3.0, 2);
    Mat h3 = hessian_energy(m3, vec2(2, 0));
    CHECK(h3(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(h3(1, 1) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("hessian eigenvalues match a numerical eigensolver") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    auto eig = hessian_eigenvalues(m, vec2(1, 0));
    CHECK(eig.radial == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.tangential == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.tangential_multiplicity == 1);

    auto big = hessian_eigenvalues(m, vec2(1e8, 0));
    CHECK(big.tangential / big.radial == doctest::Approx(1.0).epsilon(1e-7));

    auto small = hessian_eigenvalues(m, vec2(0.01, 0));
    CHECK(small.tangential / small.radial == doctest::Approx(101.0).epsilon(1e-12));

    Rng rng(11);
    for (int it = 0; it < 200; ++it) {
        int n = 2 + (it % 2);
        auto model = EnergyModel::standard(rng.uniform(0.1, 3.0), rng.uniform(1.2, 4.0), n);
        Vec z = rng.nonzero(n);
        auto cf = hessian_eigenvalues(model, z);
        Eigen::SelfAdjointEigenSolver<Mat> es(hessian_energy(model, z));
        double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
        CHECK(std::min(cf.radial, cf.tangential) == doctest::Approx(lo).epsilon(1e-10));
        CHECK(std::max(cf.radial, cf.tangential) == doctest::Approx(hi).epsilon(1e-10));
    }
}

TEST_CASE("ellipticity ratio and the displayed bound") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    auto r = ellipticity_ratio(m, vec2(1, 0));
    CHECK(r.exact == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.closed_form_bound == doctest::Approx(2.0).epsilon(1e-14));

    auto m4 = EnergyModel::standard(1.0, 4.0, 2);
    auto r4 = ellipticity_ratio(m4, vec2(1, 0));
    CHECK(r4.exact == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r4.closed_form_bound == doctest::Approx(4.0).epsilon(1e-14));

    // both diverge like b |z|^{1-p} as z -> 0
    auto tiny = ellipticity_ratio(m, vec2(1e-8, 0));
    CHECK(tiny.exact > 1e7);
    CHECK(tiny.closed_form_bound > 1e7);

    Rng rng(12);
    for (int it = 0; it < 1000; ++it) {
        auto model = EnergyModel::standard(rng.uniform(0.1, 5.0), rng.uniform(1.1, 5.0), 2);
        Vec z = rng.nonzero(2);
        auto rr = ellipticity_ratio(model, z);
        CHECK(rr.exact <= rr.closed_form_bound * (1.0 + 1e-12));
        CHECK(rr.exact >= 1.0);
    }
}

TEST_CASE("explicit lambda/Lambda bounds") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    auto b = lambda_Lambda_bounds(m, 1.0, 2.0);
    CHECK(b.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.Lambda == doctest::Approx(2.0).epsilon(1e-14));

    auto m3 = EnergyModel::standard(1.0, 3.0, 2);
    auto b3 = lambda_Lambda_bounds(m3, 1.0, 1.0);
    CHECK(b3.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b3.Lambda == doctest::Approx(3.0).epsilon(1e-14));

    CHECK_THROWS_AS(lambda_Lambda_bounds(m, 2.0, 1.0), InvalidRange);
    CHECK_THROWS_AS(lambda_Lambda_bounds(m, 0.0, 1.0), InvalidRange);

    // single-point consistency with the eigenvalues
    Rng rng(13);
    for (int it = 0; it < 100; ++it) {
        auto model = EnergyModel::standard(rng.uniform(0.1, 5.0), rng.uniform(1.1, 4.0), 2);
        double t = rng.uniform(0.2, 3.0);
        auto bb = lambda_Lambda_bounds(model, t, t);
        auto eig = hessian_eigenvalues(model, t * vec2(1, 0));
        CHECK(bb.lambda <= std::min(eig.radial, eig.tangential) + 1e-12);
        CHECK(bb.Lambda >= std::max(eig.radial, eig.tangential) - 1e-12);
    }
}

TEST_CASE("eigenvalue sandwich on an annulus") {
    Rng rng(14);
    for (int it = 0; it < 1000; ++it) {
        int n = 2 + (it % 2);
        bool generalized = it % 3 == 0;
        EnergyModel model = generalized
                                ? random_generalized(rng, n)
                                : EnergyModel::standard(rng.uniform(0.1, 3.0),
                                                        rng.uniform(1.2, 4.0), n);
        double mu0 = rng.uniform(0.1, 1.0);
        double M0 = mu0 + rng.uniform(0.0, 2.0);
        auto bb = lambda_Lambda_bounds(model, mu0, M0);
        Vec dir = rng.nonzero(n);
        dir /= dir.norm();
        Vec z = rng.uniform(mu0, M0) * dir;
        Eigen::SelfAdjointEigenSolver<Mat> es(hessian_energy(model, z));
        CHECK(es.eigenvalues().minCoeff() >= bb.lambda * (1.0 - 1e-10));
        CHECK(es.eigenvalues().maxCoeff() <= bb.Lambda * (1.0 + 1e-10));
    }
}

TEST_CASE("pucci extremal operator") {
    Mat m = Mat::Zero(2, 2);
    m.diagonal() << 1.0, -1.0;
    CHECK(pucci_minus(m, 1.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(pucci_minus(Mat::Zero(3, 3), 1.0, 5.0) == 0.0);
    Mat m3 = Mat::Zero(3, 3);
    m3.diagonal() << 3.0, -2.0, -2.0;
    CHECK(pucci_minus(m3, 1.0, 3.0) == doctest::Approx(-9.0).epsilon(1e-14));

    Mat bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(pucci_minus(bad, 1.0, 2.0), NotSymmetric);

    // equals lambda tr(M) for positive semidefinite M
    Rng rng(15);
    for (int it = 0; it < 100; ++it) {
        Mat a = rng.spd(3);
        CHECK(pucci_minus(a, 0.7, 2.0) == doctest::Approx(0.7 * a.trace()).epsilon(1e-10));
    }
}

TEST_CASE("pucci is a lower bound for tr(AM) over A in [lambda, Lambda]") {
    Rng rng(16);
    for (int it = 0; it < 500; ++it) {
        int n = 2 + (it % 2);
        double lam = rng.uniform(0.2, 1.0), Lam = lam + rng.uniform(0.0, 2.0);
        Mat s(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s(i, j) = rng.uniform(-1.0, 1.0);
        Mat m = 0.5 * (s + s.transpose());
        // A = Q' D Q with spectrum in [lam, Lam]
        Mat q = Eigen::HouseholderQR<Mat>(rng.spd(n)).householderQ();
        Vec d(n);
        for (int k = 0; k < n; ++k) d[k] = rng.uniform(lam, Lam);
        Mat a = q.transpose() * d.asDiagonal() * q;
        CHECK((a * m).trace() >= pucci_minus(m, lam, Lam) - 1e-10);
    }
}

TEST_CASE("support function") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    CHECK(support_function(m, vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(support_function(m, vec2(0, 0)) == 0.0);
    auto m2 = EnergyModel::standard(2.0, 2.0, 2);
    CHECK(support_function(m2, vec2(0, 3)) == doctest::Approx(1.5).epsilon(1e-14));

    // numerical sup over the unit-Psi sphere
    Rng rng(17);
    for (int mode = 0; mode < 2; ++mode) {
        EnergyModel model = mode == 0 ? m2 : random_generalized(rng, 2);
        Vec zeta = rng.nonzero(2);
        double best = 0.0;
        for (int k = 0; k < 10000; ++k) {
            double th = 2.0 * M_PI * k / 10000.0;
            Vec dir = vec2(std::cos(th), std::sin(th));
            Vec z = dir / model.psi(dir); // Psi(z) = 1
            best = std::max(best, zeta.dot(z));
        }
        CHECK(support_function(model, zeta) == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("subdifferential membership") {
    auto m = EnergyModel::standard(1.0, 2.0, 2);
    CHECK(subdifferential_membership(m, vec2(1, 0), vec2(1, 0), 0.0));
    CHECK(subdifferential_membership(m, vec2(0, 0), vec2(0.5, 0.5), 0.0));
    CHECK_FALSE(subdifferential_membership(m, vec2(1, 0), vec2(0, 1), 0.0));

    // symmetry under the scaling z -> lambda z (the subdifferential is
    // 0-homogeneous away from the origin)
    Rng rng(18);
    for (int it = 0; it < 1000; ++it) {
        EnergyModel model = it % 2 == 0 ? EnergyModel::standard(rng.uniform(0.2, 3.0),
                                                                rng.uniform(1.2, 4.0), 2)
                                        : random_generalized(rng, 2);
        Vec z = rng.nonzero(2);
        Vec zeta = model.grad_psi(z);
        double lam = rng.uniform(0.01, 100.0);
        CHECK(subdifferential_membership(model, z, zeta, 1e-10));
        CHECK(subdifferential_membership(model, lam * z, zeta, 1e-10));
        CHECK(subdifferential_membership(model, Vec::Zero(2), zeta, 1e-10));
        Vec outside = zeta * rng.uniform(1.5, 3.0);
        CHECK_FALSE(subdifferential_membership(model, Vec::Zero(2), outside, 1e-10));
    }
}

TEST_CASE("strict monotonicity gap of grad W") {
    auto m2 = EnergyModel::standard(1.0, 2.0, 2);
    CHECK(monotonicity_gap(m2, vec2(0, 0), vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(monotonicity_gap(m2, vec2(0.3, 0.4), vec2(0.3, 0.4)) == 0.0);
    auto m3 = EnergyModel::standard(1.0, 3.0, 2);
    CHECK(monotonicity_gap(m3, vec2(-1, 0), vec2(1, 0)) == doctest::Approx(4.0).epsilon(1e-14));

    Rng rng(19);
    for (int it = 0; it < 500; ++it) {
        EnergyModel model = it % 2 == 0 ? EnergyModel::standard(rng.uniform(0.2, 3.0),
                                                                rng.uniform(1.2, 4.0), 2)
                                        : random_generalized(rng, 2);
        Vec z1 = rng.vector(2), z2 = rng.vector(2);
        if ((z1 - z2).norm() < 1e-6) continue;
        CHECK(monotonicity_gap(model, z1, z2) > 0.0);
    }
}

TEST_CASE("Euler identity, homogeneity, triangle and Cauchy-Schwarz") {
    Rng rng(20);
    for (int it = 0; it < 1000; ++it) {
        int n = 2 + (it % 2);
        EnergyModel model = it % 2 == 0 ? EnergyModel::standard(rng.uniform(0.2, 3.0),
                                                                rng.uniform(1.2, 4.0), n)
                                        : random_generalized(rng, n);
        Vec z = rng.nonzero(n);

        // positive 1-homogeneity of Psi itself
        double lam0 = rng.uniform(0.01, 100.0);
        CHECK(model.psi(lam0 * z) ==
              doctest::Approx(lam0 * model.psi(z)).epsilon(1e-12));

        // Euler: <grad Psi(z), z> = Psi(z)
        CHECK(std::abs(model.grad_psi(z).dot(z) - model.psi(z)) <= 1e-12 * (1.0 + z.norm()));

        // homogeneity of the gradient and Hessian
        double lam = rng.uniform(0.01, 100.0);
        CHECK((model.grad_psi(lam * z) - model.grad_psi(z)).norm() <=
              1e-10 * (1.0 + model.grad_psi(z).norm()));
        CHECK((model.hess_psi(lam * z) - model.hess_psi(z) / lam).norm() <=
              1e-10 * (1.0 + model.hess_psi(z).norm() / lam));

        // triangle inequality
        Vec z2 = rng.vector(n);
        CHECK(model.psi(z + z2) <= model.psi(z) + model.psi(z2) + 1e-12);

        // Cauchy-Schwarz with the support function
        Vec zeta = rng.vector(n);
        CHECK(z.dot(zeta) <=
              model.psi(z) * support_function(model, zeta) + 1e-10 * (1.0 + z.norm()));

        // degenerate direction: hess Psi(z) z = 0
        CHECK((model.hess_psi(z) * z).norm() <= 1e-12 * (1.0 + model.hess_psi(z).norm()));
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(EnergyModel::standard(0.0, 2.0, 2), InvalidModel);
    CHECK_THROWS_AS(EnergyModel::standard(1.0, 1.0, 2), InvalidModel);
    CHECK_THROWS_AS(EnergyModel::standard(1.0, 2.0, 4), InvalidModel);
    Mat notspd(2, 2);
    notspd << 1, 0, 0, -1;
    CHECK_THROWS_AS(EnergyModel::generalized(1.0, 2.0, notspd), InvalidModel);
}
