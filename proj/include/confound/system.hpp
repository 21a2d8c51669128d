#pragma once

#include <Eigen/Dense>

namespace confound {

/// Linear plant  dx/dt = A x + B u + E w,  y = C x.
///
/// Construction rejects inconsistent shapes and non-Hurwitz A, so every
/// instance has a unique, globally attracting equilibrium for constant (u, w).
class LinearSystem {
public:
    LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd E, Eigen::MatrixXd C);

    [[nodiscard]] const Eigen::MatrixXd& A() const noexcept { return A_; }
    [[nodiscard]] const Eigen::MatrixXd& B() const noexcept { return B_; }
    [[nodiscard]] const Eigen::MatrixXd& E() const noexcept { return E_; }
    [[nodiscard]] const Eigen::MatrixXd& C() const noexcept { return C_; }

    [[nodiscard]] Eigen::Index states() const noexcept { return A_.rows(); }
    [[nodiscard]] Eigen::Index inputs() const noexcept { return B_.cols(); }
    [[nodiscard]] Eigen::Index disturbances() const noexcept { return E_.cols(); }
    [[nodiscard]] Eigen::Index outputs() const noexcept { return C_.rows(); }

    /// Single input, single disturbance, single output.
    [[nodiscard]] bool is_siso() const noexcept {
        return inputs() == 1 && disturbances() == 1 && outputs() == 1;
    }

private:
    Eigen::MatrixXd A_;
    Eigen::MatrixXd B_;
    Eigen::MatrixXd E_;
    Eigen::MatrixXd C_;
};

/// All eigenvalues strictly in the open left half-plane.
bool is_hurwitz(const Eigen::MatrixXd& A);

/// dx/dt = -3x + u + w, y = 2x.
LinearSystem make_example_system();

struct SteadyState {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

/// Solves A x + B u + E w = 0 and maps the equilibrium through C.
/// Throws SingularSystem when A cannot be inverted.
SteadyState steady_state_map(const LinearSystem& sys, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& w);

/// Scalar-channel convenience wrapper for SISO systems; returns y.
double steady_state_output(const LinearSystem& sys, double u, double w);

/// dy/du at steady state for a SISO system, i.e. -C A^{-1} B.
double steady_state_gain(const LinearSystem& sys);

}  // namespace confound
