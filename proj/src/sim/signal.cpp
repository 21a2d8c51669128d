#include "confound/signal.hpp"

#include "confound/error.hpp"

#include <cmath>

namespace confound {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t scenario_seed, std::uint64_t stream) noexcept {
    return mix64(mix64(scenario_seed) ^ (stream * 0xD1B54A32D192ED03ULL));
}

double piecewise_level(const PiecewiseConstant& g, std::int64_t k) {
    const std::uint64_t bits = mix64(mix64(g.seed) ^ static_cast<std::uint64_t>(k));
    const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
    return g.low + (g.high - g.low) * unit;
}

void validate(const SignalGenerator& g) {
    std::visit(overloaded{
                   [](const Sinusoid& s) {
                       if (!std::isfinite(s.amplitude) || !std::isfinite(s.angular_frequency) ||
                           !std::isfinite(s.phase))
                           throw Error(ErrorCode::InvalidArgument, "sinusoid parameters must be finite");
                       if (s.amplitude < 0.0)
                           throw Error(ErrorCode::InvalidArgument, "sinusoid amplitude must be >= 0");
                   },
                   [](const PiecewiseConstant& p) {
                       if (!(p.switch_interval > 0.0) || !std::isfinite(p.switch_interval))
                           throw Error(ErrorCode::InvalidArgument, "switch_interval must be > 0");
                       if (!std::isfinite(p.low) || !std::isfinite(p.high) || p.low > p.high)
                           throw Error(ErrorCode::InvalidArgument, "need finite low <= high");
                   },
                   [](const Constant& c) {
                       if (!std::isfinite(c.value))
                           throw Error(ErrorCode::InvalidArgument, "constant must be finite");
                   },
               },
               g);
}

double eval_signal(const SignalGenerator& g, double t) {
    return std::visit(
        overloaded{
            [t](const Sinusoid& s) { return s.amplitude * std::sin(s.angular_frequency * t + s.phase); },
            [t](const PiecewiseConstant& p) {
                const auto k = static_cast<std::int64_t>(std::floor(t / p.switch_interval));
                return piecewise_level(p, k);
            },
            [](const Constant& c) { return c.value; },
        },
        g);
}

}  // namespace confound
