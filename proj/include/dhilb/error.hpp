#pragma once

#include <stdexcept>
#include <string>

namespace dhilb {

/// Error categories. The numeric values are the CLI exit codes.
enum class ErrorKind : int {
    validation = 1,
    budget = 2,
    mismatch = 3,
    internal = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed input: bad scenario, inhomogeneous generator, non-ideal, Z not in X, ...
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// A configured cap (Harrison weight, operad arity) would be exceeded.
class BudgetError : public Error {
public:
    BudgetError(const std::string& cap, int limit, int requested)
        : Error(ErrorKind::budget, cap + " exceeded: requested " + std::to_string(requested) +
                                       ", limit " + std::to_string(limit)),
          cap_(cap), limit_(limit), requested_(requested) {}
    const std::string& cap() const noexcept { return cap_; }
    int limit() const noexcept { return limit_; }
    int requested() const noexcept { return requested_; }

private:
    std::string cap_;
    int limit_;
    int requested_;
};

/// A structural identity failed (d*d != 0, non-chain map, non-closing restriction).
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

}  // namespace dhilb
