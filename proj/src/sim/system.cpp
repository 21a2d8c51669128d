#include "confound/system.hpp"

#include "confound/error.hpp"

#include <string>

namespace confound {

namespace {

std::string shape(const Eigen::MatrixXd& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

LinearSystem::LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd E,
                           Eigen::MatrixXd C)
    : A_(std::move(A)), B_(std::move(B)), E_(std::move(E)), C_(std::move(C)) {
    const Eigen::Index n = A_.rows();
    if (n == 0 || A_.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "A must be square and non-empty, got " + shape(A_));
    if (B_.rows() != n)
        throw Error(ErrorCode::DimensionMismatch, "B has " + shape(B_) + ", needs n=" +
                                                      std::to_string(n) + " rows");
    if (E_.rows() != n)
        throw Error(ErrorCode::DimensionMismatch, "E has " + shape(E_) + ", needs n=" +
                                                      std::to_string(n) + " rows");
    if (C_.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "C has " + shape(C_) + ", needs n=" +
                                                      std::to_string(n) + " columns");
    if (!A_.allFinite() || !B_.allFinite() || !E_.allFinite() || !C_.allFinite())
        throw Error(ErrorCode::NonFinite, "system matrices contain non-finite entries");
    if (!is_hurwitz(A_)) throw Error(ErrorCode::NotHurwitz, "A has an eigenvalue with Re >= 0");
}

bool is_hurwitz(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols() || A.rows() == 0) return false;
    if (!A.allFinite()) return false;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) return false;
    return (solver.eigenvalues().real().array() < 0.0).all();
}

LinearSystem make_example_system() {
    Eigen::MatrixXd A(1, 1), B(1, 1), E(1, 1), C(1, 1);
    A << -3.0;
    B << 1.0;
    E << 1.0;
    C << 2.0;
    return {A, B, E, C};
}

SteadyState steady_state_map(const LinearSystem& sys, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& w) {
    if (u.size() != sys.inputs() || w.size() != sys.disturbances())
        throw Error(ErrorCode::DimensionMismatch, "input/disturbance vector size mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.A());
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "A is numerically singular");
    const Eigen::VectorXd forcing = sys.B() * u + sys.E() * w;
    SteadyState ss;
    ss.x = -lu.solve(forcing);
    ss.y = sys.C() * ss.x;
    return ss;
}

double steady_state_output(const LinearSystem& sys, double u, double w) {
    if (!sys.is_siso()) throw Error(ErrorCode::DimensionMismatch, "system is not SISO");
    return steady_state_map(sys, Eigen::VectorXd::Constant(1, u), Eigen::VectorXd::Constant(1, w))
        .y(0);
}

double steady_state_gain(const LinearSystem& sys) {
    return steady_state_output(sys, 1.0, 0.0) - steady_state_output(sys, 0.0, 0.0);
}

}  // namespace confound
