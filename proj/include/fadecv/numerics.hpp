#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fadecv {

/// Gauss-Legendre rule on the reference interval (-1, 1).
struct QuadratureRule {
    std::vector<double> nodes;   // ascending, symmetric about 0
    std::vector<double> weights; // positive, sum to 2
    int order = 0;
};

/// Nodes and weights for an n-point Gauss-Legendre rule, 1 <= n <= 512.
/// Newton iteration on the Legendre recurrence, converged to 1e-15.
QuadratureRule gauss_legendre_rule(int n);

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
double integrate_1d(const std::function<double(double)>& f, double a, double b, int n);

/// Tensor-product Gauss-Legendre integral over an axis-aligned box.
/// The integrand receives one coordinate per axis of `box`.
double integrate_nd(const std::function<double(std::span<const double>)>& f,
                    const std::vector<std::pair<double, double>>& box,
                    int n_per_axis);

struct SearchInterval {
    double lo;
    double hi;
    double tolerance = 1e-6; // on the abscissa
};

struct ScalarMaximum {
    double x = 0;
    double value = 0;
    int evaluations = 0;
};

/// Golden-section maximization of a continuous (assumed unimodal) function.
/// Returns the best probe seen, so a non-unimodal f still yields a usable
/// best-effort result.
ScalarMaximum maximize_scalar(const std::function<double(double)>& f,
                              const SearchInterval& interval);

} // namespace fadecv
