#pragma once

#include <stdexcept>
#include <string>

namespace lbp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by tip()/leftmost()/seen_from_tip() on a configuration with no particles.
struct EmptyConfigurationError : Error {
    EmptyConfigurationError() : Error("configuration is empty") {}
};

// Raised by step() when the total birth rate is zero.
struct FrozenStateError : Error {
    FrozenStateError() : Error("process is frozen: total rate is zero") {}
};

// Enumeration or state-space size exceeds the configured budget.
struct BudgetError : Error {
    explicit BudgetError(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// A post-processing routine was asked for data the trajectory does not carry.
struct MissingDataError : Error {
    explicit MissingDataError(const std::string& what) : Error(what) {}
};

}  // namespace lbp
