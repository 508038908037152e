#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace heli {

// Raised when a right-hand side or integrator stage produces a non-finite
// value. Carries a stage label (which component went bad) and, once a run
// loop catches it, the step index.
class overflow_error : public std::runtime_error {
public:
    overflow_error(const std::string& what, std::string stage, long step = -1)
        : std::runtime_error(what), stage_(std::move(stage)), step_(step) {}

    const std::string& stage() const noexcept { return stage_; }
    long step() const noexcept { return step_; }

private:
    std::string stage_;
    long step_;
};

// Bad scenario file or inconsistent parameter set.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (unwritable output, unreadable input).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace heli
