#pragma once

#include <stdexcept>
#include <string>

namespace relutope {

enum class ErrorKind {
    usage,
    parse,
    dimension_mismatch,
    non_finite,
    infeasible,
    degenerate,
    resource_cap,
    iteration_limit,
    io,
    internal,
};

// Every failure raised by the library carries a kind so the CLI can map it
// onto its exit-code contract.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace relutope
