#include "tvpl/energy.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace tvpl {

namespace {

void check_spd(const Mat& m) {
    if (m.rows() != m.cols() || m.rows() < 1 || m.rows() > 3)
        throw InvalidModel("anisotropy must be a square matrix, 1 <= n <= 3");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
        throw InvalidModel("anisotropy must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw InvalidModel("anisotropy must be positive definite");
}

} // namespace

EnergyModel::EnergyModel(double b, double p, int dim, EnergyVariant v, Mat aniso)
    : b_(b), p_(p), dim_(dim), variant_(v), aniso_(std::move(aniso)) {
    if (!(b_ > 0.0)) throw InvalidModel("b must be positive");
    if (!(p_ > 1.0)) throw InvalidModel("p must exceed 1");
    if (dim_ < 1 || dim_ > 3) throw InvalidModel("dimension must be 1, 2 or 3");
    aniso_inv_ = aniso_.inverse();
}

EnergyModel EnergyModel::standard(double b, double p, int dim) {
    return EnergyModel(b, p, dim, EnergyVariant::standard, Mat::Identity(dim, dim));
}

EnergyModel EnergyModel::generalized(double b, double p, const Mat& anisotropy) {
    check_spd(anisotropy);
    return EnergyModel(b, p, static_cast<int>(anisotropy.rows()), EnergyVariant::generalized,
                       anisotropy);
}

double EnergyModel::psi(const Vec& z) const {
    if (variant_ == EnergyVariant::standard) return b_ * z.norm();
    return b_ * std::sqrt(z.dot(aniso_ * z));
}

Vec EnergyModel::grad_psi(const Vec& z) const {
    if (z.isZero(0.0)) throw ZeroGradientPoint{};
    if (variant_ == EnergyVariant::standard) return b_ * z / z.norm();
    Vec az = aniso_ * z;
    return b_ * az / std::sqrt(z.dot(az));
}

Mat EnergyModel::hess_psi(const Vec& z) const {
    if (z.isZero(0.0)) throw ZeroGradientPoint{};
    if (variant_ == EnergyVariant::standard) {
        double r = z.norm();
        Vec zhat = z / r;
        return (b_ / r) * (Mat::Identity(dim_, dim_) - zhat * zhat.transpose());
    }
    Vec az = aniso_ * z;
    double q = z.dot(az);
    double s = std::sqrt(q);
    return b_ * (aniso_ / s - az * az.transpose() / (q * s));
}

double EnergyModel::w(const Vec& z) const {
    if (variant_ == EnergyVariant::standard) return std::pow(z.norm(), p_) / p_;
    return std::pow(z.dot(aniso_ * z), p_ / 2.0) / p_;
}

Vec EnergyModel::grad_w(const Vec& z) const {
    if (z.isZero(0.0)) return Vec::Zero(dim_);
    if (variant_ == EnergyVariant::standard) return std::pow(z.norm(), p_ - 2.0) * z;
    Vec az = aniso_ * z;
    return std::pow(z.dot(az), p_ / 2.0 - 1.0) * az;
}

Mat EnergyModel::hess_w(const Vec& z) const {
    if (z.isZero(0.0)) {
        if (p_ < 2.0) throw ZeroGradientPoint{};
        if (p_ == 2.0) return aniso_;
        return Mat::Zero(dim_, dim_);
    }
    if (variant_ == EnergyVariant::standard) {
        double r = z.norm();
        Vec zhat = z / r;
        return std::pow(r, p_ - 2.0) *
               (Mat::Identity(dim_, dim_) + (p_ - 2.0) * zhat * zhat.transpose());
    }
    Vec az = aniso_ * z;
    double q = z.dot(az);
    return std::pow(q, p_ / 2.0 - 1.0) * aniso_ +
           (p_ - 2.0) * std::pow(q, p_ / 2.0 - 2.0) * az * az.transpose();
}

double EnergyModel::scalar_flux(double slope) const {
    if (slope == 0.0) return 0.0;
    double s = slope > 0 ? 1.0 : -1.0;
    return s * (b_ + std::pow(std::abs(slope), p_ - 1.0));
}

double EnergyModel::scalar_flux_inverse(double flux) const {
    double mag = std::abs(flux);
    if (mag <= b_) return 0.0;
    double s = flux > 0 ? 1.0 : -1.0;
    return s * std::pow(mag - b_, 1.0 / (p_ - 1.0));
}

double eval_energy(const EnergyModel& model, const Vec& z) {
    return model.psi(z) + model.w(z);
}

Vec grad_energy(const EnergyModel& model, const Vec& z) {
    if (z.isZero(0.0)) throw ZeroGradientPoint{};
    return model.grad_psi(z) + model.grad_w(z);
}

Mat hessian_energy(const EnergyModel& model, const Vec& z) {
    if (z.isZero(0.0)) throw ZeroGradientPoint{};
    return model.hess_psi(z) + model.hess_w(z);
}

HessianEigenvalues hessian_eigenvalues(const EnergyModel& model, const Vec& z) {
    if (z.isZero(0.0)) throw ZeroGradientPoint{};
    int n = model.dim();
    if (model.variant() == EnergyVariant::standard) {
        double r = z.norm();
        double radial = (model.p() - 1.0) * std::pow(r, model.p() - 2.0);
        double tangential = model.b() / r + std::pow(r, model.p() - 2.0);
        return {radial, tangential, n - 1};
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hessian_energy(model, z));
    Vec zhat = z / z.norm();
    int radial_idx = 0;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
        double a = std::abs(es.eigenvectors().col(k).dot(zhat));
        if (a > best) {
            best = a;
            radial_idx = k;
        }
    }
    double tangential = 0.0;
    for (int k = 0; k < n; ++k)
        if (k != radial_idx) tangential = std::max(tangential, es.eigenvalues()[k]);
    if (n == 1) tangential = es.eigenvalues()[radial_idx];
    return {es.eigenvalues()[radial_idx], tangential, n - 1};
}

EllipticityRatio ellipticity_ratio(const EnergyModel& model, const Vec& z) {
    if (z.isZero(0.0)) throw ZeroGradientPoint{};
    double p = model.p();
    double r = z.norm();
    double exact;
    if (model.variant() == EnergyVariant::standard) {
        auto eig = hessian_eigenvalues(model, z);
        double lo = std::min(eig.radial, eig.tangential);
        double hi = std::max(eig.radial, eig.tangential);
        if (model.dim() == 1) {
            lo = hi = eig.radial; // no tangential directions in 1D
        }
        exact = hi / lo;
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(hessian_energy(model, z));
        exact = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    }
    double closed_form_bound =
        (std::max(p - 1.0, 1.0) + model.b() * std::pow(r, 1.0 - p)) / std::min(p - 1.0, 1.0);
    return {exact, closed_form_bound};
}

EllipticityBounds lambda_Lambda_bounds(const EnergyModel& model, double mu0, double M0) {
    if (!(mu0 > 0.0) || !(mu0 <= M0)) throw InvalidRange("need 0 < mu0 <= M0");
    double p = model.p();
    double b = model.b();
    double cmin = std::min(1.0, p - 1.0);
    double cmax = std::max(1.0, p - 1.0);

    double amin = 1.0, amax = 1.0;
    if (model.variant() == EnergyVariant::generalized) {
        Eigen::SelfAdjointEigenSolver<Mat> es(model.anisotropy());
        amin = es.eigenvalues().minCoeff();
        amax = es.eigenvalues().maxCoeff();
    }
    // For |z| = t in the annulus, z'Mz lies between amin t^2 and amax t^2; the
    // bound below extremizes the quadratic form factor accordingly.
    double a_lo = p >= 2.0 ? amin : amax;
    double a_hi = p >= 2.0 ? amax : amin;

    auto lam_at = [&](double t) { return cmin * amin * std::pow(a_lo * t * t, p / 2.0 - 1.0); };
    auto Lam_at = [&](double t) {
        return b * amax / std::sqrt(amin) / t + cmax * amax * std::pow(a_hi * t * t, p / 2.0 - 1.0);
    };

    // t^{p-2} is monotone, so the minimum sits at an endpoint; the maximum of
    // b/t + c t^{p-2} also sits at an endpoint (the interior critical point is
    // a minimum for every p > 1).
    double lambda = std::min(lam_at(mu0), lam_at(M0));
    double Lambda = std::max(Lam_at(mu0), Lam_at(M0));
    return {mu0, M0, lambda, Lambda};
}

double pucci_minus(const Mat& M, double lambda, double Lambda) {
    if (M.rows() != M.cols()) throw NotSymmetric("matrix must be square");
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + M.cwiseAbs().maxCoeff()))
        throw NotSymmetric("matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    double acc = 0.0;
    for (int k = 0; k < M.rows(); ++k) {
        double e = es.eigenvalues()[k];
        acc += e > 0.0 ? lambda * e : Lambda * e;
    }
    return acc;
}

double pucci_minus(const Mat& M, const EllipticityBounds& bounds) {
    return pucci_minus(M, bounds.lambda, bounds.Lambda);
}

double support_function(const EnergyModel& model, const Vec& zeta) {
    if (model.variant() == EnergyVariant::standard) return zeta.norm() / model.b();
    return std::sqrt(zeta.dot(model.anisotropy_inverse() * zeta)) / model.b();
}

bool subdifferential_membership(const EnergyModel& model, const Vec& z, const Vec& zeta,
                                double tol) {
    if (tol < 0.0) throw InvalidRange("tolerance must be nonnegative");
    if (support_function(model, zeta) > 1.0 + tol) return false;
    return std::abs(model.psi(z) - z.dot(zeta)) <= tol * (1.0 + z.norm());
}

double monotonicity_gap(const EnergyModel& model, const Vec& z1, const Vec& z2) {
    return (model.grad_w(z2) - model.grad_w(z1)).dot(z2 - z1);
}

} // namespace tvpl
