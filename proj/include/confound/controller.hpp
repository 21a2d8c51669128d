#pragma once

#include "confound/signal.hpp"

#include <variant>

namespace confound {

/// u = schedule(t); ignores reference, disturbance and output.
struct OpenLoop {
    SignalGenerator schedule;
};

/// u = reference_gain * y_r - disturbance_gain * w + bias; ignores y.
struct Feedforward {
    double reference_gain = 0.0;
    double disturbance_gain = 0.0;
    double bias = 0.0;
};

/// u = kp * (y_r - y); ignores w. Stateless, no integral action.
struct PFeedback {
    double kp = 0.0;
};

using Controller = std::variant<OpenLoop, Feedforward, PFeedback>;

void validate(const Controller& c);

double eval_controller(const Controller& c, double t, double y_r, double w, double y);

}  // namespace confound
