#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mrp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed text input (map files, JSON documents, solver output).
class ParseError : public Error {
public:
    using Error::Error;
};

// A scenario or bundle violates one or more invariants. Each diagnostic
// names the field and the clause that failed.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> diagnostics);

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

// A primitive was applied to a state that violates one of its preconditions,
// or the result leaves the energy bounds. `clause` names the failed rule,
// e.g. "energy underflow" or "overcharge".
class KinematicsError : public Error {
public:
    KinematicsError(std::string clause, const std::string& detail)
        : Error(clause + ": " + detail), clause_(std::move(clause)) {}

    const std::string& clause() const noexcept { return clause_; }

private:
    std::string clause_;
};

// A constraint program cannot be expressed in the target dialect.
class EncodingError : public Error {
public:
    using Error::Error;
};

// The external solver crashed or produced output we could not interpret.
class BridgeError : public Error {
public:
    BridgeError(const std::string& what, std::string output_excerpt);

    const std::string& output_excerpt() const noexcept { return excerpt_; }

private:
    std::string excerpt_;
};

// A planner could not produce a plan (infeasible instance, search cap hit,
// unreachable worker).
class PlanningError : public Error {
public:
    using Error::Error;
};

}  // namespace mrp
