#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crparallax {

enum class ErrorKind {
    BaseMismatch,
    DivisionByZeroGerm,
    OrderExhausted,
    NotReal,
    NotRankOne,
    PivotDegenerate,
    NotTwoNondegenerate,
    BranchUnavailable,
    ExactModeViolation,
};

std::string_view to_string(ErrorKind kind);

/// Domain failure raised by the series, frame and invariant layers.
class CrError : public std::runtime_error {
public:
    CrError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace crparallax
