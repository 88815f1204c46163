#pragma once

#include <stdexcept>
#include <string>

namespace mmce {

/// Mismatched or invalid matrix/vector dimensions at an operation boundary.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside its documented domain (negative variance, infeasible
/// separation, out-of-range index, ...).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure in a linear solve; carries a condition estimate.
class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const { return condition_estimate_; }

private:
    double condition_estimate_;
};

}  // namespace mmce
