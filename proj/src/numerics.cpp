#include "fadecv/numerics.hpp"
#include "fadecv/errors.hpp"

#include <cmath>
#include <numbers>

namespace fadecv {

QuadratureRule gauss_legendre_rule(int n) {
    if (n < 1 || n > 512)
        throw domain_error("gauss_legendre_rule: order must be in [1, 512]");

    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi-style initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) <= 1e-15)
                break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        // Middle node is exactly 0 by symmetry.
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int n) {
    if (!(a < b))
        throw domain_error("integrate_1d: need a < b");
    const QuadratureRule rule = gauss_legendre_rule(n);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + hw * rule.nodes[i]);
    return hw * sum;
}

double integrate_nd(const std::function<double(std::span<const double>)>& f,
                    const std::vector<std::pair<double, double>>& box,
                    int n_per_axis) {
    if (box.empty())
        throw domain_error("integrate_nd: empty box");
    for (const auto& [a, b] : box)
        if (!(a < b))
            throw domain_error("integrate_nd: need lo < hi on every axis");

    const QuadratureRule rule = gauss_legendre_rule(n_per_axis);
    const std::size_t dims = box.size();
    const std::size_t n = rule.nodes.size();

    std::vector<std::size_t> idx(dims, 0);
    std::vector<double> x(dims, 0.0);
    double jac = 1.0;
    for (const auto& [a, b] : box)
        jac *= 0.5 * (b - a);

    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const auto& [a, b] = box[d];
            x[d] = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[idx[d]];
            w *= rule.weights[idx[d]];
        }
        sum += w * f(std::span<const double>(x));

        std::size_t d = 0;
        while (d < dims && ++idx[d] == n) {
            idx[d] = 0;
            ++d;
        }
        if (d == dims)
            break;
    }
    return jac * sum;
}

ScalarMaximum maximize_scalar(const std::function<double(double)>& f,
                              const SearchInterval& interval) {
    if (!(interval.lo < interval.hi) || !(interval.tolerance > 0))
        throw domain_error("maximize_scalar: invalid search interval");

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;

    double a = interval.lo;
    double b = interval.hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);

    ScalarMaximum best;
    auto probe = [&](double xx) {
        const double v = f(xx);
        ++best.evaluations;
        if (best.evaluations == 1 || v > best.value) {
            best.x = xx;
            best.value = v;
        }
        return v;
    };

    double fc = probe(c);
    double fd = probe(d);
    while (b - a > interval.tolerance) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = probe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = probe(d);
        }
    }
    // A maximum pushed against an interval endpoint is only bracketed to
    // within the tolerance; probing the endpoint itself makes the result
    // dominate both boundary values exactly.
    if (best.x - interval.lo <= interval.tolerance)
        probe(interval.lo);
    if (interval.hi - best.x <= interval.tolerance)
        probe(interval.hi);
    return best;
}

} // namespace fadecv
