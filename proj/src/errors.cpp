#include "crparallax/errors.hpp"

namespace crparallax {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::DivisionByZeroGerm: return "DivisionByZeroGerm";
    case ErrorKind::OrderExhausted: return "OrderExhausted";
    case ErrorKind::NotReal: return "NotReal";
    case ErrorKind::NotRankOne: return "NotRankOne";
    case ErrorKind::PivotDegenerate: return "PivotDegenerate";
    case ErrorKind::NotTwoNondegenerate: return "NotTwoNondegenerate";
    case ErrorKind::BranchUnavailable: return "BranchUnavailable";
    case ErrorKind::ExactModeViolation: return "ExactModeViolation";
    }
    return "Unknown";
}

} // namespace crparallax
