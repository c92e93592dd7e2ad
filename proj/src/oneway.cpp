#include "fadecv/oneway.hpp"
#include "fadecv/errors.hpp"
#include "fadecv/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fadecv {

namespace {

void check_point(double mu, double eta, double omega) {
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("oneway: mu must be >= 1");
    if (std::isnan(eta) || eta < 0.0 || eta > 1.0)
        throw domain_error("oneway: eta must lie in [0, 1]");
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("oneway: omega must be >= 1");
}

} // namespace

void OneWayParams::validate() const {
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("oneway: mu must be >= 1");
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("oneway: omega must be >= 1");
    if (std::isnan(beta) || beta < 0.0 || beta > 1.0)
        throw domain_error("oneway: beta must lie in [0, 1]");
    fading.validate();
}

CovarianceMatrix oneway_cm(double mu, double eta, double omega) {
    check_point(mu, eta, omega);
    return thermal_loss_apply(tmsv_cm(mu), 1, eta, omega);
}

double oneway_mutual_info(double mu, double eta, double omega) {
    check_point(mu, eta, omega);
    const double vb = eta * mu + (1.0 - eta) * omega;
    const double vb_cond = eta + (1.0 - eta) * omega;
    return 0.5 * std::log2(vb / vb_cond);
}

double oneway_mutual_info_asym(double mu, double eta, double omega) {
    check_point(mu, eta, omega);
    if (eta == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log2(eta * mu / (eta + (1.0 - eta) * omega));
}

double oneway_holevo(double mu, double eta, double omega) {
    const CovarianceMatrix v_ab = oneway_cm(mu, eta, omega);
    const double s_ab = von_neumann_entropy(v_ab);
    const double s_cond = von_neumann_entropy(homodyne_condition(v_ab, 1, Quadrature::q));
    return s_ab - s_cond;
}

double oneway_holevo_asym(double mu, double eta, double omega) {
    check_point(mu, eta, omega);
    if (eta == 0.0 || eta == 1.0)
        return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log2(eta * (1.0 - eta) * mu / omega) + entropy_h(omega);
}

namespace {

double mutual_info(double mu, double eta, double omega, Kernel kernel) {
    return kernel == Kernel::exact ? oneway_mutual_info(mu, eta, omega)
                                   : oneway_mutual_info_asym(mu, eta, omega);
}

double holevo(double mu, double eta, double omega, Kernel kernel) {
    return kernel == Kernel::exact ? oneway_holevo(mu, eta, omega)
                                   : oneway_holevo_asym(mu, eta, omega);
}

/// Integral of the 0.5*log2(1-eta) part of the asymptotic Holevo kernel.
/// When the support touches eta = 1 the substitution eta = 1 - u^4 removes
/// the endpoint singularity (log2(1-eta) becomes 4 log2 u), and the plain
/// rule converges spectrally again.
double asym_log_loss_integral(double lo, double hi, int nodes) {
    if (hi < 1.0)
        return integrate_1d([](double eta) { return 0.5 * std::log2(1.0 - eta); }, lo, hi,
                            nodes);
    const double w = std::pow(1.0 - lo, 0.25);
    return integrate_1d([](double u) { return 8.0 * u * u * u * std::log2(u); }, 0.0, w,
                        nodes);
}

/// Averaged asymptotic Holevo bound over [lo, hi], singularity-aware.
double asym_holevo_integral(double mu, double omega, double lo, double hi, int nodes) {
    const double smooth = integrate_1d(
        [&](double eta) { return 0.5 * std::log2(eta * mu / omega) + entropy_h(omega); },
        lo, hi, nodes);
    return smooth + asym_log_loss_integral(lo, hi, nodes);
}

} // namespace

double oneway_rate_fixed(const OneWayParams& params, double eta, Kernel kernel) {
    params.validate();
    return params.beta * mutual_info(params.mu, eta, params.omega, kernel) -
           holevo(params.mu, eta, params.omega, kernel);
}

double oneway_rate_fast(const OneWayParams& params, Kernel kernel, int nodes) {
    params.validate();
    const FadingModel& f = params.fading;
    if (f.delta_eta == 0.0)
        return oneway_rate_fixed(params, f.eta_min, kernel);

    const double chi_integral =
        kernel == Kernel::asymptotic
            ? asym_holevo_integral(params.mu, params.omega, f.eta_min, f.eta_max(), nodes)
            : integrate_1d(
                  [&](double eta) { return oneway_holevo(params.mu, eta, params.omega); },
                  f.eta_min, f.eta_max(), nodes);
    return params.beta * mutual_info(params.mu, f.eta_min, params.omega, kernel) -
           chi_integral / f.delta_eta;
}

double oneway_rate_fast_loss_closed(double eta_min, double delta_eta) {
    if (!(eta_min > 0.0) || delta_eta < 0.0 || eta_min + delta_eta > 1.0)
        throw domain_error("oneway_rate_fast_loss_closed: invalid fading support");
    if (delta_eta == 0.0) {
        if (eta_min >= 1.0)
            throw domain_error("oneway_rate_fast_loss_closed: eta = 1 diverges");
        return -0.5 * std::log2(1.0 - eta_min);
    }

    const auto g = [](double x) { return x <= 0.0 ? 0.0 : x * std::log2(x); };
    const double eta_max = eta_min + delta_eta;
    return (g(1.0 - eta_max) - g(1.0 - eta_min)) / (2.0 * delta_eta) -
           (eta_max / (2.0 * delta_eta)) * std::log2(eta_max / eta_min) +
           std::numbers::log2e;
}

double oneway_rate_slow(const OneWayParams& params, Kernel kernel, int nodes) {
    params.validate();
    const FadingModel& f = params.fading;
    if (f.delta_eta == 0.0)
        return oneway_rate_fixed(params, f.eta_min, kernel);

    if (kernel == Kernel::asymptotic) {
        const double smooth = integrate_1d(
            [&](double eta) {
                return params.beta * oneway_mutual_info_asym(params.mu, eta, params.omega) -
                       (0.5 * std::log2(eta * params.mu / params.omega) +
                        entropy_h(params.omega));
            },
            f.eta_min, f.eta_max(), nodes);
        return (smooth - asym_log_loss_integral(f.eta_min, f.eta_max(), nodes)) /
               f.delta_eta;
    }
    return integrate_1d(
               [&](double eta) {
                   return params.beta * oneway_mutual_info(params.mu, eta, params.omega) -
                          oneway_holevo(params.mu, eta, params.omega);
               },
               f.eta_min, f.eta_max(), nodes) /
           f.delta_eta;
}

} // namespace fadecv
