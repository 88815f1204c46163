#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace mmce {

using Complex = std::complex<double>;

/// Wrap a real angle onto its canonical representative in [0, 1).
/// Steering vectors are 1-periodic, so this loses nothing.
inline double wrap_unit(double raw) {
    double w = raw - std::floor(raw);
    if (w >= 1.0) w = 0.0;  // rounding of tiny negatives
    return w;
}

/// Circular distance on the unit circle of normalized angles, in [0, 0.5].
inline double circular_distance(double a, double b) {
    const double d = wrap_unit(a - b);
    return std::min(d, 1.0 - d);
}

/// Normalized spatial angle theta = d*sin(phi)/lambda, stored modulo 1.
class NormalizedAngle {
public:
    NormalizedAngle() = default;
    explicit NormalizedAngle(double raw) : value_(wrap_unit(raw)) {}

    double value() const { return value_; }

private:
    double value_ = 0.0;
};

/// Wrap every entry of an angle vector onto [0, 1).
inline Eigen::VectorXd wrap_unit(const Eigen::VectorXd& raw) {
    return raw.unaryExpr([](double x) { return wrap_unit(x); });
}

}  // namespace mmce
