#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nestspec {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, malformed specs, domain violations detected before any
/// numerical work starts.
class InputError : public Error {
public:
    using Error::Error;
};

/// Base class for failures that occur during a numerical procedure
/// (factorization breakdown, non-convergence, degenerate data).
class NumericError : public Error {
public:
    using Error::Error;
};

/// A Cholesky pivot (or eigenvalue) fell below the rank tolerance.
class SingularMatrixError : public NumericError {
public:
    SingularMatrixError(const std::string& what, std::size_t pivot_index)
        : NumericError(what), pivot_index_(pivot_index) {}

    /// 0-based index of the failing pivot / dependent column.
    std::size_t pivot_index() const { return pivot_index_; }

private:
    std::size_t pivot_index_;
};

/// One step of an iterative fit, kept for post-mortem traces.
struct IterationRecord {
    int iteration;
    double objective;
    double step_norm;
};

/// An iterative solver exhausted its iteration budget.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, std::vector<IterationRecord> trace)
        : NumericError(what), trace_(std::move(trace)) {}

    const std::vector<IterationRecord>& trace() const { return trace_; }

private:
    std::vector<IterationRecord> trace_;
};

/// Complete separation in a binomial fit: fitted probabilities collapsed to
/// 0/1 and the corresponding working weights underflowed.
class SeparationError : public NumericError {
public:
    SeparationError(const std::string& what, std::vector<std::size_t> observations)
        : NumericError(what), observations_(std::move(observations)) {}

    /// Observations whose weights underflowed.
    const std::vector<std::size_t>& observations() const { return observations_; }

private:
    std::vector<std::size_t> observations_;
};

/// The estimate is running away (monotone partial likelihood and the like).
class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A series with no variation where variation is required.
class DegenerateSeriesError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace nestspec
