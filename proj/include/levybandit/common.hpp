#pragma once

#include <stdexcept>
#include <string>

namespace levybandit {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Bracket expansion for a root search ran off the representable range.
class NoBracketError : public Error {
public:
    explicit NoBracketError(const std::string& what) : Error(what) {}
};

/// A function sampled as decreasing where monotone increase was required.
class NotMonotoneError : public Error {
public:
    explicit NotMonotoneError(const std::string& what) : Error(what) {}
};

/// Adaptive subdivision budget exhausted without meeting tolerances.
class NonConvergentError : public Error {
public:
    explicit NonConvergentError(const std::string& what) : Error(what) {}
};

/// Inversion or evaluation requested at a degenerate point.
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(what) {}
};

/// Divergent reward integral, signalling an integrability assumption violation.
class IntegrabilityError : public Error {
public:
    explicit IntegrabilityError(const std::string& what) : Error(what) {}
};

/// Malformed configuration input (JSON descriptors, CLI ranges).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace levybandit
