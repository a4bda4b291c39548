#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace memsteer {

enum class Errc {
    invalid_argument,
    grid_mismatch,
    not_in_h10,
    aliasing,
    instability,
    ill_conditioned,
    mean_zero_violation,
    internal_consistency,
    invalid_config,
    io,
};

const char* errc_name(Errc code) noexcept;

// Every failure raised by the library carries a code and the module that
// raised it so the CLI can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), code_(code), module_(std::move(module)) {}

    Errc code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    Errc code_;
    std::string module_;
};

} // namespace memsteer
