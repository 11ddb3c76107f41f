#pragma once

#include <stdexcept>
#include <string>

namespace implosion {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical procedure did not reach its requested accuracy.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// The orbit of a point could not be certified to lie in the interior of K.
// This is "not known to be inside", not "known to be outside".
class NotCertified : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A request needs more precomputed levels or budget than available.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A randomized validation found a counterexample.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace implosion
