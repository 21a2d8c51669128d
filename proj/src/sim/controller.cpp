#include "confound/controller.hpp"

#include "confound/error.hpp"

#include <cmath>

namespace confound {

void validate(const Controller& c) {
    if (const auto* ol = std::get_if<OpenLoop>(&c)) {
        validate(ol->schedule);
    } else if (const auto* ff = std::get_if<Feedforward>(&c)) {
        if (!std::isfinite(ff->reference_gain) || !std::isfinite(ff->disturbance_gain) ||
            !std::isfinite(ff->bias))
            throw Error(ErrorCode::InvalidArgument, "feedforward gains must be finite");
    } else if (const auto* fb = std::get_if<PFeedback>(&c)) {
        if (!std::isfinite(fb->kp)) throw Error(ErrorCode::InvalidArgument, "Kp must be finite");
    }
}

double eval_controller(const Controller& c, double t, double y_r, double w, double y) {
    if (const auto* ol = std::get_if<OpenLoop>(&c)) return eval_signal(ol->schedule, t);
    if (const auto* ff = std::get_if<Feedforward>(&c))
        return ff->reference_gain * y_r - ff->disturbance_gain * w + ff->bias;
    const auto& fb = std::get<PFeedback>(c);
    return fb.kp * (y_r - y);
}

}  // namespace confound
