#pragma once

#include <stdexcept>
#include <string>

namespace frex {

// Hard failures are exceptions; soft failures (an estimate exists but is not
// trustworthy) are reported through EvalResult::converged == false instead.

// An integrand returned NaN or +/-inf at a point the engine needed.
class NonFiniteValue : public std::runtime_error {
public:
    explicit NonFiniteValue(const std::string& what) : std::runtime_error(what) {}
};

// A half-line/parity requirement was violated (e.g. an odd-form operator was
// handed an even function, or a full-line operation got an untagged half-line
// function it cannot extend).
class ParityMismatch : public std::runtime_error {
public:
    explicit ParityMismatch(const std::string& what) : std::runtime_error(what) {}
};

// The cancellation-form Hilbert operator requires a (numerically) vanishing
// half-line moment; the input's moment was too large.
class CancellationPreconditionFailed : public std::runtime_error {
public:
    explicit CancellationPreconditionFailed(const std::string& what)
        : std::runtime_error(what) {}
};

// A re-expansion was requested for a function whose source transform is not
// absolutely integrable, so the half-line Hilbert route is not defined.
class PreconditionFailed : public std::runtime_error {
public:
    explicit PreconditionFailed(const std::string& what) : std::runtime_error(what) {}
};

// A condition checker needs an absolutely integrable input and the
// integrability scan said otherwise.
class NotIntegrable : public std::runtime_error {
public:
    explicit NotIntegrable(const std::string& what) : std::runtime_error(what) {}
};

// Amalgam norms are defined here for exponents q in (1, inf].
class InvalidQ : public std::invalid_argument {
public:
    explicit InvalidQ(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace frex
