#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace delayctl {

enum class ErrorCode {
    NotHurwitz,
    SingularSystem,
    NoConvergence,
    ImproperTf,
    TailBoundFailure,
    StabilityLost,
    DegenerateInput,
    ConfigInvalid,
    EmptyWindow,
    StartNotConverged,
    ConditionViolatedAtZero,
    ConditionViolatedOnIdentity,
    NoRootInRange,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; every failure in the library goes through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace delayctl
