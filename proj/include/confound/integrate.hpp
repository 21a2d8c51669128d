#pragma once

#include "confound/controller.hpp"
#include "confound/signal.hpp"
#include "confound/system.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace confound {

/// Uniformly sampled closed-loop record. x is stored row-major with
/// state_dim entries per sample; u, w, y, y_r are scalar channels.
struct Trajectory {
    double dt = 0.0;
    std::size_t state_dim = 1;
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> w;
    std::vector<double> y;
    std::vector<double> y_r;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] bool empty() const noexcept { return t.empty(); }

    [[nodiscard]] std::span<const double> state(std::size_t i) const {
        return {x.data() + i * state_dim, state_dim};
    }

    /// Contiguous copy of one state component over time.
    [[nodiscard]] std::vector<double> state_component(std::size_t j) const;

    /// Throws InvalidArgument when channel lengths disagree or t is not a
    /// uniform, strictly increasing grid with spacing dt.
    void check_invariants() const;
};

/// Number of RK4 steps needed to reach t_end with step dt.
std::size_t step_count(double t_end, double dt);

/// Classical fixed-step RK4 on dx/dt = A x + B u + E w. The controller is
/// re-evaluated at every stage with that stage's time, reference,
/// disturbance and y = C x.
///
/// Requires a SISO system. PFeedback loops are checked for a Hurwitz
/// closed-loop matrix A - kp B C before stepping (StabilityCheckFailed).
/// A non-finite state aborts with NonFinite.
Trajectory integrate(const LinearSystem& sys, const Controller& ctrl, const SignalGenerator& dist,
                     const SignalGenerator& ref, const Eigen::VectorXd& x0, double t_end, double dt);

}  // namespace confound
