#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace msic {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed instance/generator text. `line` is 1-based, 0 if unknown.
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what)
        : Error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what), line(line_) {}
};

/// A structurally well-formed input that violates a model invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// Search space is larger than the caller allowed.
struct BudgetExceeded : Error {
    int dof;
    std::uint64_t budget;
    BudgetExceeded(int dof_, std::uint64_t budget_)
        : Error("assignment space for " + std::to_string(dof_) +
                " degrees of freedom exceeds budget " + std::to_string(budget_)),
          dof(dof_), budget(budget_) {}
};

/// Enumeration cap (subset/cycle/oracle limits) exceeded.
struct CapExceeded : Error {
    using Error::Error;
};

} // namespace msic
