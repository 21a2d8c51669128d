#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confound {

enum class ErrorCode {
    DimensionMismatch,
    NotHurwitz,
    SingularSystem,
    NonFinite,
    StabilityCheckFailed,
    InvalidArgument,
    EmptyTrajectory,
    OutOfBounds,
    CyclicGraph,
    OverlappingSets,
    ExogenousIntervention,
    NotUniquelySolvable,
    ShapeMismatch,
    UnknownNode,
    DegenerateDesign,
    EmptyDataset,
    NonPSDPrecision,
    BinMismatch,
    DegenerateInput,
    ConfigParse,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace confound
