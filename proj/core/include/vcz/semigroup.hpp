#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace vcz {

class SemigroupAccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The matrix semigroup e^{-τA} of a generator A.
///
/// Symmetric generators go through an eigendecomposition computed once at construction;
/// anything else goes through a dense Padé matrix exponential per evaluation. Construction
/// samples the identity e^{-(t1+t2)A} = e^{-t1 A} e^{-t2 A} and throws SemigroupAccuracyError
/// when the relative defect exceeds `tolerance`.
class Semigroup {
public:
    explicit Semigroup(Eigen::MatrixXd generator, double tolerance = 1e-8);

    const Eigen::MatrixXd& generator() const noexcept { return generator_; }
    Eigen::Index size() const noexcept { return generator_.rows(); }
    bool symmetric() const noexcept { return symmetric_; }
    /// Eigenvalues in ascending order (symmetric generators only; empty otherwise).
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

    Eigen::MatrixXd propagator(double tau) const;        ///< e^{-τA}
    Eigen::MatrixXd kernel(double tau) const;            ///< -A e^{-τA}
    Eigen::MatrixXd kernel_derivative(double tau) const; ///< A² e^{-τA}
    Eigen::VectorXd apply_kernel(double tau, const Eigen::VectorXd& v) const;

    /// Exact one-step data for piecewise-constant forcing on a step of length h:
    /// propagator = e^{-hA}, phi1 = (hA)^{-1}(I - e^{-hA}) (analytic continuation on ker A).
    struct Step {
        Eigen::MatrixXd propagator;
        Eigen::MatrixXd phi1;
    };
    Step step(double h) const;

    /// ‖e^{-(t1+t2)A} - e^{-t1 A}e^{-t2 A}‖_F relative to the size of the factors.
    double semigroup_defect(double t1, double t2) const;

private:
    Eigen::MatrixXd spectral(double tau, int power) const;

    Eigen::MatrixXd generator_;
    bool symmetric_ = false;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

} // namespace vcz
