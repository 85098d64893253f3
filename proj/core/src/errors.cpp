#include "lr/errors.hpp"

namespace lr {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonStochasticRow: return "NonStochasticRow";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::BadDiscount: return "BadDiscount";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NonUniqueStationary: return "NonUniqueStationary";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::PremiseViolated: return "PremiseViolated";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::RankFailure: return "RankFailure";
    case ErrorCode::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularSystem: return "SingularSystem";
    }
    return "UnknownError";
}

bool is_numerical_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonFiniteIterate:
    case ErrorCode::NoConvergence:
    case ErrorCode::SingularSystem:
        return true;
    default:
        return false;
    }
}

} // namespace lr
