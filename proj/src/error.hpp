#pragma once

#include <stdexcept>
#include <string>

namespace jm {

enum class ErrorCode {
    RealRepresentationViolation = 1,
    SingularKinematics,
    NonConvergence,
    DegenerateOrder,
    EigenFailure,
    QuadratureOrderTooLow,
    OutOfTable,
    PoleHit,
    DivisionDegenerate,
    NoConvergence,
    RegionEmpty,
    OverlapNotPositiveDefinite,
    InvalidArgument,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace jm
