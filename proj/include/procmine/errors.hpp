#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace procmine {

// Malformed textual input (XES, CSV, PNML, rule expressions, tree notation).
// Carries a 1-based line number when one is known, 0 otherwise.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Structurally valid input that violates event log contracts
// (missing required attributes, duplicate case ids, inconsistent value kinds).
class IngestionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration: unknown keys, out-of-range thresholds, contradictory
// column mappings, schema mismatches in rule expressions.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A request that cannot be answered for the given inputs, e.g. reachability
// of an activity the graph does not contain, or conversion of a causal net
// with a dangling node.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke an API precondition, e.g. firing a disabled transition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A bounded search exceeded its node budget. The message names the offending
// trace so callers can exclude or report it.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace procmine
