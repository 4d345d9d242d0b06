#include "vcz/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

namespace vcz {

namespace {

// (1 - e^{-z})/z, stable near zero.
double phi1(double z)
{
    if (std::abs(z) < 1e-8) {
        return 1.0 - 0.5 * z;
    }
    return -std::expm1(-z) / z;
}

} // namespace

Semigroup::Semigroup(Eigen::MatrixXd generator, double tolerance) : generator_(std::move(generator))
{
    if (generator_.rows() != generator_.cols() || generator_.rows() == 0) {
        throw std::invalid_argument("Semigroup: generator must be a nonempty square matrix");
    }
    if (!generator_.allFinite()) {
        throw std::invalid_argument("Semigroup: generator entries must be finite");
    }
    symmetric_ = generator_ == generator_.transpose();
    if (symmetric_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(generator_);
        if (eig.info() != Eigen::Success) {
            throw SemigroupAccuracyError("Semigroup: eigendecomposition failed");
        }
        eigenvalues_ = eig.eigenvalues();
        eigenvectors_ = eig.eigenvectors();
        // Eigenvalues at rounding level are exact zeros (e.g. constants under periodic closure);
        // left alone they make τ^k λ^k e^{-τλ} grow for huge τ.
        const double cutoff = 1e-13 * std::max(eigenvalues_.cwiseAbs().maxCoeff(), 1e-300);
        for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
            if (std::abs(eigenvalues_[i]) <= cutoff) {
                eigenvalues_[i] = 0.0;
            }
        }
    }

    const double scale = std::max(generator_.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    for (double t1 : {0.1, 1.0, 10.0}) {
        for (double t2 : {0.3, 3.0}) {
            const double defect = semigroup_defect(t1 / scale, t2 / scale);
            if (!(defect <= tolerance)) {
                throw SemigroupAccuracyError("Semigroup: relative semigroup defect "
                                             + std::to_string(defect) + " exceeds tolerance");
            }
        }
    }
}

Eigen::MatrixXd Semigroup::spectral(double tau, int power) const
{
    Eigen::VectorXd d(eigenvalues_.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double lam = eigenvalues_[i];
        d[i] = std::pow(-lam, power) * std::exp(-tau * lam);
    }
    return eigenvectors_ * d.asDiagonal() * eigenvectors_.transpose();
}

Eigen::MatrixXd Semigroup::propagator(double tau) const
{
    if (symmetric_) {
        return spectral(tau, 0);
    }
    return Eigen::MatrixXd((-tau * generator_).exp());
}

Eigen::MatrixXd Semigroup::kernel(double tau) const
{
    if (symmetric_) {
        return spectral(tau, 1);
    }
    return -generator_ * propagator(tau);
}

Eigen::MatrixXd Semigroup::kernel_derivative(double tau) const
{
    if (symmetric_) {
        return spectral(tau, 2);
    }
    return generator_ * generator_ * propagator(tau);
}

Eigen::VectorXd Semigroup::apply_kernel(double tau, const Eigen::VectorXd& v) const
{
    if (symmetric_) {
        Eigen::VectorXd w = eigenvectors_.transpose() * v;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double lam = eigenvalues_[i];
            w[i] *= -lam * std::exp(-tau * lam);
        }
        return eigenvectors_ * w;
    }
    return kernel(tau) * v;
}

Semigroup::Step Semigroup::step(double h) const
{
    const Eigen::Index m = size();
    if (symmetric_) {
        Eigen::VectorXd e(m);
        Eigen::VectorXd p(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double z = h * eigenvalues_[i];
            e[i] = std::exp(-z);
            p[i] = phi1(z);
        }
        return {eigenvectors_ * e.asDiagonal() * eigenvectors_.transpose(),
                eigenvectors_ * p.asDiagonal() * eigenvectors_.transpose()};
    }
    // exp([[-hA, I], [0, 0]]) = [[e^{-hA}, phi1(hA)], [0, I]].
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    aug.topLeftCorner(m, m) = -h * generator_;
    aug.topRightCorner(m, m).setIdentity();
    const Eigen::MatrixXd ex = aug.exp();
    return {ex.topLeftCorner(m, m), ex.topRightCorner(m, m)};
}

double Semigroup::semigroup_defect(double t1, double t2) const
{
    const Eigen::MatrixXd a = propagator(t1);
    const Eigen::MatrixXd b = propagator(t2);
    const Eigen::MatrixXd ab = propagator(t1 + t2);
    const double denom = std::max({a.norm() * b.norm(), ab.norm(), 1e-300});
    return (ab - a * b).norm() / denom;
}

} // namespace vcz
