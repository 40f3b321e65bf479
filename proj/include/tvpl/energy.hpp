#pragma once

#include <Eigen/Dense>

#include "tvpl/errors.hpp"

namespace tvpl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class EnergyVariant { standard, generalized };

/// Integrand E(z) = Psi(z) + W(z) of the total-variation + p-growth energy.
///
/// Two families are supported:
///   standard     Psi(z) = b|z|,            W(z) = |z|^p / p
///   generalized  Psi(z) = b sqrt(z'Mz),    W(z) = (z'Mz)^{p/2} / p
/// with M symmetric positive definite. Psi is positively 1-homogeneous and
/// C^2 away from 0; W is C^1 with grad W(0) = 0.
class EnergyModel {
public:
    static EnergyModel standard(double b, double p, int dim);
    static EnergyModel generalized(double b, double p, const Mat& anisotropy);

    double b() const { return b_; }
    double p() const { return p_; }
    int dim() const { return dim_; }
    EnergyVariant variant() const { return variant_; }
    const Mat& anisotropy() const { return aniso_; }
    const Mat& anisotropy_inverse() const { return aniso_inv_; }

    // 1-homogeneous part (carries the weight b)
    double psi(const Vec& z) const;
    Vec grad_psi(const Vec& z) const;  // throws ZeroGradientPoint at z = 0
    Mat hess_psi(const Vec& z) const;  // throws ZeroGradientPoint at z = 0

    // p-growth part; grad_w(0) = 0 by definition
    double w(const Vec& z) const;
    Vec grad_w(const Vec& z) const;
    Mat hess_w(const Vec& z) const;    // throws ZeroGradientPoint at z = 0 for p < 2

    /// Scalar version of the standard flux map t -> b sign(t) + |t|^{p-2} t
    /// restricted to t >= 0, and its inverse (used by the 1D oracle).
    double scalar_flux(double slope) const;
    double scalar_flux_inverse(double flux) const;

private:
    EnergyModel(double b, double p, int dim, EnergyVariant v, Mat aniso);

    double b_;
    double p_;
    int dim_;
    EnergyVariant variant_;
    Mat aniso_;      // identity for the standard variant
    Mat aniso_inv_;
};

double eval_energy(const EnergyModel& model, const Vec& z);
Vec grad_energy(const EnergyModel& model, const Vec& z);
Mat hessian_energy(const EnergyModel& model, const Vec& z);

struct HessianEigenvalues {
    double radial;      // eigenvalue in the gradient direction
    double tangential;  // eigenvalue orthogonal to it
    int tangential_multiplicity;
};

/// Closed forms for the standard variant: radial (p-1)|z|^{p-2},
/// tangential b/|z| + |z|^{p-2}. The generalized variant falls back to a
/// dense symmetric eigensolver and classifies by eigenvector alignment.
HessianEigenvalues hessian_eigenvalues(const EnergyModel& model, const Vec& z);

struct EllipticityRatio {
    double exact;       // largest/lowest eigenvalue of hess E(z)
    double closed_form_bound; // (max(p-1,1) + b|z|^{1-p}) / min(p-1,1)
};

EllipticityRatio ellipticity_ratio(const EnergyModel& model, const Vec& z);

struct EllipticityBounds {
    double mu0;
    double M0;
    double lambda;
    double Lambda;
};

/// Uniform ellipticity constants of hess E on the annulus mu0 <= |z| <= M0:
///   lambda = min_t min{1,p-1} t^{p-2},
///   Lambda = max_t (b/t + max{1,p-1} t^{p-2}).
EllipticityBounds lambda_Lambda_bounds(const EnergyModel& model, double mu0, double M0);

/// Pucci minimal operator M^-(M) = lambda * sum_{e>0} e + Lambda * sum_{e<0} e.
double pucci_minus(const Mat& M, double lambda, double Lambda);
double pucci_minus(const Mat& M, const EllipticityBounds& bounds);

/// Support function of {Psi <= 1}: |zeta|/b for the standard variant,
/// sqrt(zeta' M^{-1} zeta)/b for the generalized one.
double support_function(const EnergyModel& model, const Vec& zeta);

/// Membership test zeta in dPsi(z) via the dual characterization
/// supp(zeta) <= 1 and Psi(z) = <z, zeta>; at z = 0 only the ball test remains.
bool subdifferential_membership(const EnergyModel& model, const Vec& z, const Vec& zeta,
                                double tol);

/// <grad W(z2) - grad W(z1), z2 - z1>; strictly positive for z1 != z2.
double monotonicity_gap(const EnergyModel& model, const Vec& z1, const Vec& z2);

} // namespace tvpl
