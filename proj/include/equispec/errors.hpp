#pragma once

#include <stdexcept>
#include <string>

namespace equispec {

/// A block structure (or parameter set) that cannot produce a graph:
/// equitability violated, degree caps exceeded, odd stub parity, ...
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Stub pairing exhausted its restart budget.
class SamplingError : public std::runtime_error {
public:
    SamplingError(const std::string& what, int attempts)
        : std::runtime_error(what), attempts_(attempts) {}

    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

/// Fixed-point iteration stopped above tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Denominator underflow, eigensolver breakdown or a failed internal check.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace equispec
