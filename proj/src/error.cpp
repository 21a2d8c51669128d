#include "confound/error.hpp"

namespace confound {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotHurwitz: return "NotHurwitz";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::StabilityCheckFailed: return "StabilityCheckFailed";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::CyclicGraph: return "CyclicGraph";
        case ErrorCode::OverlappingSets: return "OverlappingSets";
        case ErrorCode::ExogenousIntervention: return "ExogenousIntervention";
        case ErrorCode::NotUniquelySolvable: return "NotUniquelySolvable";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::DegenerateDesign: return "DegenerateDesign";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::NonPSDPrecision: return "NonPSDPrecision";
        case ErrorCode::BinMismatch: return "BinMismatch";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::ConfigParse: return "ConfigParse";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace confound
