#include "confound/integrate.hpp"

#include "confound/error.hpp"

#include <cmath>
#include <string>

namespace confound {

std::vector<double> Trajectory::state_component(std::size_t j) const {
    if (j >= state_dim) throw Error(ErrorCode::OutOfBounds, "state component out of range");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i * state_dim + j];
    return out;
}

void Trajectory::check_invariants() const {
    const std::size_t n = t.size();
    if (x.size() != n * state_dim || u.size() != n || w.size() != n || y.size() != n ||
        y_r.size() != n)
        throw Error(ErrorCode::InvalidArgument, "trajectory channel lengths disagree");
    if (n > 1 && !(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    for (std::size_t i = 1; i < n; ++i) {
        const double step = t[i] - t[i - 1];
        if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "time is not strictly increasing");
        if (std::fabs(step - dt) > 1e-9 * std::max(1.0, std::fabs(t[i])))
            throw Error(ErrorCode::InvalidArgument, "time grid is not uniform at index " +
                                                        std::to_string(i));
    }
}

std::size_t step_count(double t_end, double dt) {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
        return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

Trajectory integrate(const LinearSystem& sys, const Controller& ctrl, const SignalGenerator& dist,
                     const SignalGenerator& ref, const Eigen::VectorXd& x0, double t_end, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
    if (!(t_end > dt) || !std::isfinite(t_end))
        throw Error(ErrorCode::InvalidArgument, "t_end must exceed dt");
    if (!sys.is_siso())
        throw Error(ErrorCode::DimensionMismatch, "closed-loop simulation needs a SISO system");
    if (x0.size() != sys.states())
        throw Error(ErrorCode::DimensionMismatch, "x0 has the wrong dimension");
    validate(ctrl);
    validate(dist);
    validate(ref);
    if (const auto* fb = std::get_if<PFeedback>(&ctrl)) {
        const Eigen::MatrixXd closed = sys.A() - fb->kp * sys.B() * sys.C();
        if (!is_hurwitz(closed))
            throw Error(ErrorCode::StabilityCheckFailed,
                        "A - kp*B*C is not Hurwitz for kp=" + std::to_string(fb->kp));
    }

    const Eigen::Index n = sys.states();
    const Eigen::VectorXd b = sys.B().col(0);
    const Eigen::VectorXd e = sys.E().col(0);
    const Eigen::RowVectorXd c = sys.C().row(0);
    const Eigen::MatrixXd& A = sys.A();

    struct Sample {
        double u, w, y, y_r;
    };
    auto sample = [&](double t, const Eigen::VectorXd& x) {
        Sample s{};
        s.w = eval_signal(dist, t);
        s.y_r = eval_signal(ref, t);
        s.y = c.dot(x);
        s.u = eval_controller(ctrl, t, s.y_r, s.w, s.y);
        return s;
    };
    auto rhs = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        const Sample s = sample(t, x);
        dx.noalias() = A * x;
        dx += b * s.u + e * s.w;
    };

    const std::size_t steps = step_count(t_end, dt);
    const std::size_t samples = steps + 1;
    Trajectory traj;
    traj.dt = dt;
    traj.state_dim = static_cast<std::size_t>(n);
    traj.t.resize(samples);
    traj.x.resize(samples * traj.state_dim);
    traj.u.resize(samples);
    traj.w.resize(samples);
    traj.y.resize(samples);
    traj.y_r.resize(samples);

    Eigen::VectorXd x = x0;
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double half = 0.5 * dt;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) * dt;
        if (!x.allFinite())
            throw Error(ErrorCode::NonFinite, "state became non-finite at t=" + std::to_string(t));
        const Sample s = sample(t, x);
        traj.t[i] = t;
        for (Eigen::Index j = 0; j < n; ++j) traj.x[i * traj.state_dim + j] = x(j);
        traj.u[i] = s.u;
        traj.w[i] = s.w;
        traj.y[i] = s.y;
        traj.y_r[i] = s.y_r;
        if (i + 1 == samples) break;

        rhs(t, x, k1);
        tmp = x + half * k1;
        rhs(t + half, tmp, k2);
        tmp = x + half * k2;
        rhs(t + half, tmp, k3);
        tmp = x + dt * k3;
        rhs(t + dt, tmp, k4);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return traj;
}

}  // namespace confound
