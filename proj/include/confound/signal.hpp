#pragma once

#include <cstdint>
#include <variant>

namespace confound {

struct Sinusoid {
    double amplitude = 0.0;
    double angular_frequency = 0.0;  // rad / time
    double phase = 0.0;              // rad
};

/// Holds a level drawn from U[low, high] on each interval
/// [k * switch_interval, (k + 1) * switch_interval). Levels are keyed on
/// (seed, k) so any t can be evaluated without history.
struct PiecewiseConstant {
    std::uint64_t seed = 0;
    double switch_interval = 1.0;
    double low = 0.0;
    double high = 1.0;
};

struct Constant {
    double value = 0.0;
};

using SignalGenerator = std::variant<Sinusoid, PiecewiseConstant, Constant>;

/// Throws InvalidArgument on switch_interval <= 0, amplitude < 0, low > high
/// or non-finite parameters.
void validate(const SignalGenerator& g);

double eval_signal(const SignalGenerator& g, double t);

/// Level of interval k for a piecewise-constant generator.
double piecewise_level(const PiecewiseConstant& g, std::int64_t k);

/// Counter-based mixing (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Derives an independent stream seed from a scenario seed and a stream id.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::uint64_t stream) noexcept;

}  // namespace confound
