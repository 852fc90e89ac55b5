#pragma once

#include <stdexcept>
#include <string>

namespace linkdim {

/// Raised for any precondition violation or unrecoverable numerical failure.
/// Carries the name of the stage that produced it so the CLI can report
/// "stage: cause" without re-wrapping.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace linkdim
