#include "fadecv/net3.hpp"
#include "fadecv/errors.hpp"

#include <cmath>

namespace fadecv {

void Net3Params::validate() const {
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("net3: omega must be >= 1");
    if (std::isnan(beta) || beta < 0.0 || beta > 1.0)
        throw domain_error("net3: beta must lie in [0, 1]");
    fading.validate();
    if (!(mu_search.lo >= 1.0) || !(mu_search.lo < mu_search.hi))
        throw domain_error("net3: invalid mu search interval");
    if (!attack().physical())
        throw attack_rejected_error("net3: correlated attack is unphysical");
}

namespace {

/// (a, b, c, A, B, C) with (a, A), (b, B), (c, C) each a TMSV(mu) pair.
CovarianceMatrix net3_source_cm(double mu) {
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("net3: mu must be >= 1");
    const double c = std::sqrt(mu * mu - 1.0);
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(12, 12) * mu;
    const Eigen::Matrix2d cz = (Eigen::Matrix2d() << c, 0, 0, -c).finished();
    for (int k = 0; k < 3; ++k) {
        v.block<2, 2>(2 * k, 2 * (k + 3)) = cz;
        v.block<2, 2>(2 * (k + 3), 2 * k) = cz;
    }
    return CovarianceMatrix(std::move(v));
}

} // namespace

CovarianceMatrix net3_joint_cm(double mu, const std::array<double, 3>& etas,
                               const AttackModel& attack, bool include_eve) {
    const CovarianceMatrix src = net3_source_cm(mu);
    const std::vector<int> travel{3, 4, 5};
    const std::vector<double> eta_vec{etas[0], etas[1], etas[2]};
    return include_eve ? correlated_attack_apply(src, travel, eta_vec, attack)
                       : correlated_attack_marginal(src, travel, eta_vec, attack);
}

CovarianceMatrix net3_relay_condition(const CovarianceMatrix& V) {
    if (V.modes() < 6)
        throw dimension_error("net3_relay_condition: need at least six modes");

    // R1+ lands on slot 3, R1- on slot 4.
    CovarianceMatrix v = apply_symplectic(beamsplitter(0.5, 3, 4, V.modes()), V);
    v = homodyne_condition(v, 4, Quadrature::q);
    // Modes above slot 4 shift down: C' now sits at 4, next to R1+ at 3.
    v = apply_symplectic(beamsplitter(2.0 / 3.0, 3, 4, v.modes()), v);
    v = homodyne_condition(v, 4, Quadrature::q); // R2-
    return homodyne_condition(v, 3, Quadrature::p); // R2+
}

CovarianceMatrix net3_post_relay_cm(double mu, const std::array<double, 3>& etas,
                                    const AttackModel& attack) {
    return net3_relay_condition(net3_joint_cm(mu, etas, attack));
}

namespace {

double holevo_of(const CovarianceMatrix& v_abc) {
    const double s_abc = von_neumann_entropy(v_abc);
    const double s_cond = von_neumann_entropy(heterodyne_condition(v_abc, 0));
    return s_abc - s_cond;
}

double min_mutual_info_of(const CovarianceMatrix& v_abc) {
    const CovarianceMatrix v_bc_cond = heterodyne_condition(v_abc, 0);
    const auto det_plus_i = [](const Eigen::Matrix2d& m) {
        return (m + Eigen::Matrix2d::Identity()).determinant();
    };
    const double i_ab =
        0.5 * std::log2(det_plus_i(v_abc.mode_block(1, 1)) /
                        det_plus_i(v_bc_cond.mode_block(0, 0)));
    const double i_ac =
        0.5 * std::log2(det_plus_i(v_abc.mode_block(2, 2)) /
                        det_plus_i(v_bc_cond.mode_block(1, 1)));
    return std::min(i_ab, i_ac);
}

} // namespace

double net3_holevo(double mu, const std::array<double, 3>& etas, const AttackModel& attack) {
    return holevo_of(net3_post_relay_cm(mu, etas, attack));
}

double net3_mutual_info(double mu, const std::array<double, 3>& etas,
                        const AttackModel& attack) {
    return min_mutual_info_of(net3_post_relay_cm(mu, etas, attack));
}

double net3_rate(double mu, const std::array<double, 3>& etas, double beta,
                 const AttackModel& attack) {
    if (std::isnan(beta) || beta < 0.0 || beta > 1.0)
        throw domain_error("net3: beta must lie in [0, 1]");
    const CovarianceMatrix v = net3_post_relay_cm(mu, etas, attack);
    return beta * min_mutual_info_of(v) - holevo_of(v);
}

OptimizedRate net3_rate_star(double omega, double eta, double beta,
                             const SearchInterval& mu_search) {
    const AttackModel attack = AttackModel::uncorrelated({omega, omega, omega});
    const ScalarMaximum m = maximize_scalar(
        [&](double mu) { return net3_rate(mu, {eta, eta, eta}, beta, attack); }, mu_search);
    return {m.value, m.x};
}

OptimizedRate net3_rate_fixed_star(const Net3Params& params, double eta) {
    params.validate();
    const AttackModel attack = params.attack();
    const ScalarMaximum m = maximize_scalar(
        [&](double mu) { return net3_rate(mu, {eta, eta, eta}, params.beta, attack); },
        params.mu_search);
    return {m.value, m.x};
}

double net3_rate_fast_star_at(const Net3Params& params, double mu, int nodes) {
    params.validate();
    const FadingModel& f = params.fading;
    const AttackModel attack = params.attack();
    if (f.delta_eta == 0.0)
        return net3_rate(mu, {f.eta_min, f.eta_min, f.eta_min}, params.beta, attack);

    const std::vector<std::pair<double, double>> box(3, {f.eta_min, f.eta_max()});
    const double cube = f.delta_eta * f.delta_eta * f.delta_eta;
    const double i_min = net3_mutual_info(mu, {f.eta_min, f.eta_min, f.eta_min}, attack);
    const double chi_avg = integrate_nd(
                               [&](std::span<const double> eta) {
                                   return net3_holevo(mu, {eta[0], eta[1], eta[2]}, attack);
                               },
                               box, nodes) /
                           cube;
    return params.beta * i_min - chi_avg;
}

double net3_rate_slow_star_at(const Net3Params& params, double mu, int nodes) {
    params.validate();
    const FadingModel& f = params.fading;
    const AttackModel attack = params.attack();
    if (f.delta_eta == 0.0)
        return net3_rate(mu, {f.eta_min, f.eta_min, f.eta_min}, params.beta, attack);

    const std::vector<std::pair<double, double>> box(3, {f.eta_min, f.eta_max()});
    const double cube = f.delta_eta * f.delta_eta * f.delta_eta;
    return integrate_nd(
               [&](std::span<const double> eta) {
                   const CovarianceMatrix v =
                       net3_post_relay_cm(mu, {eta[0], eta[1], eta[2]}, attack);
                   return params.beta * min_mutual_info_of(v) - holevo_of(v);
               },
               box, nodes) /
           cube;
}

OptimizedRate net3_rate_fast_star(const Net3Params& params, int nodes) {
    params.validate();
    if (params.fading.delta_eta == 0.0)
        return net3_rate_fixed_star(params, params.fading.eta_min);
    const ScalarMaximum m = maximize_scalar(
        [&](double mu) { return net3_rate_fast_star_at(params, mu, nodes); },
        params.mu_search);
    return {m.value, m.x};
}

OptimizedRate net3_rate_slow_star(const Net3Params& params, int nodes) {
    params.validate();
    if (params.fading.delta_eta == 0.0)
        return net3_rate_fixed_star(params, params.fading.eta_min);
    const ScalarMaximum m = maximize_scalar(
        [&](double mu) { return net3_rate_slow_star_at(params, mu, nodes); },
        params.mu_search);
    return {m.value, m.x};
}

} // namespace fadecv
