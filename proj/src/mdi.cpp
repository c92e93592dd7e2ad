#include "fadecv/mdi.hpp"
#include "fadecv/errors.hpp"
#include "fadecv/numerics.hpp"

#include <cmath>
#include <utility>

namespace fadecv {

void MdiParams::validate() const {
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("mdi: mu must be >= 1");
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("mdi: omega must be >= 1");
    if (std::isnan(beta) || beta < 0.0 || beta > 1.0)
        throw domain_error("mdi: beta must lie in [0, 1]");
    fading.validate();
    if (!attack().physical())
        throw attack_rejected_error("mdi: correlated attack is unphysical");
}

namespace {

/// (a, b, A, B) with (a, A) and (b, B) each a TMSV(mu) pair.
CovarianceMatrix mdi_source_cm(double mu) {
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("mdi: mu must be >= 1");
    const double c = std::sqrt(mu * mu - 1.0);
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(8, 8) * mu;
    const Eigen::Matrix2d cz = (Eigen::Matrix2d() << c, 0, 0, -c).finished();
    v.block<2, 2>(0, 4) = cz; // a <-> A
    v.block<2, 2>(4, 0) = cz;
    v.block<2, 2>(2, 6) = cz; // b <-> B
    v.block<2, 2>(6, 2) = cz;
    return CovarianceMatrix(std::move(v));
}

} // namespace

CovarianceMatrix mdi_joint_cm(double mu, double eta_a, double eta_b,
                              const AttackModel& attack, bool include_eve) {
    const CovarianceMatrix src = mdi_source_cm(mu);
    const std::vector<int> travel{2, 3};
    const std::vector<double> etas{eta_a, eta_b};
    return include_eve ? correlated_attack_apply(src, travel, etas, attack)
                       : correlated_attack_marginal(src, travel, etas, attack);
}

CovarianceMatrix mdi_relay_condition(const CovarianceMatrix& V, int mode_a_prime,
                                     int mode_b_prime) {
    if (mode_a_prime == mode_b_prime)
        throw dimension_error("mdi_relay_condition: relay modes must differ");
    // Plus port lands on mode_a_prime, minus port on mode_b_prime.
    const SymplecticMatrix bs = beamsplitter(0.5, mode_a_prime, mode_b_prime, V.modes());
    CovarianceMatrix out = homodyne_condition(apply_symplectic(bs, V), mode_b_prime,
                                              Quadrature::q);
    const int plus = mode_a_prime - (mode_a_prime > mode_b_prime ? 1 : 0);
    return homodyne_condition(out, plus, Quadrature::p);
}

CovarianceMatrix mdi_post_relay_cm(double mu, double eta_a, double eta_b,
                                   const AttackModel& attack) {
    return mdi_relay_condition(mdi_joint_cm(mu, eta_a, eta_b, attack), 2, 3);
}

namespace {

double holevo_of(const CovarianceMatrix& v_ab) {
    const double s_ab = von_neumann_entropy(v_ab);
    const double s_cond = von_neumann_entropy(heterodyne_condition(v_ab, 0));
    return s_ab - s_cond;
}

double mutual_info_of(const CovarianceMatrix& v_ab) {
    const Eigen::Matrix2d vb = v_ab.mode_block(1, 1);
    const Eigen::Matrix2d vb_cond = heterodyne_condition(v_ab, 0).mode_block(0, 0);
    const auto det_plus_i = [](const Eigen::Matrix2d& m) {
        return (m + Eigen::Matrix2d::Identity()).determinant();
    };
    return 0.5 * std::log2(det_plus_i(vb) / det_plus_i(vb_cond));
}

} // namespace

double mdi_holevo(double mu, double eta_a, double eta_b, const AttackModel& attack) {
    return holevo_of(mdi_post_relay_cm(mu, eta_a, eta_b, attack));
}

double mdi_mutual_info(double mu, double eta_a, double eta_b, const AttackModel& attack) {
    return mutual_info_of(mdi_post_relay_cm(mu, eta_a, eta_b, attack));
}

double mdi_rate_fixed(const MdiParams& params, double eta) {
    params.validate();
    const CovarianceMatrix v = mdi_post_relay_cm(params.mu, eta, eta, params.attack());
    return params.beta * mutual_info_of(v) - holevo_of(v);
}

double mdi_rate_fast(const MdiParams& params, int nodes) {
    params.validate();
    const FadingModel& f = params.fading;
    if (f.delta_eta == 0.0)
        return mdi_rate_fixed(params, f.eta_min);

    const AttackModel attack = params.attack();
    const double chi_avg =
        integrate_nd(
            [&](std::span<const double> eta) {
                return mdi_holevo(params.mu, eta[0], eta[1], attack);
            },
            {{f.eta_min, f.eta_max()}, {f.eta_min, f.eta_max()}}, nodes) /
        (f.delta_eta * f.delta_eta);
    return params.beta * mdi_mutual_info(params.mu, f.eta_min, f.eta_min, attack) - chi_avg;
}

double mdi_rate_slow(const MdiParams& params, int nodes) {
    params.validate();
    const FadingModel& f = params.fading;
    if (f.delta_eta == 0.0)
        return mdi_rate_fixed(params, f.eta_min);

    const AttackModel attack = params.attack();
    return integrate_nd(
               [&](std::span<const double> eta) {
                   const CovarianceMatrix v =
                       mdi_post_relay_cm(params.mu, eta[0], eta[1], attack);
                   return params.beta * mutual_info_of(v) - holevo_of(v);
               },
               {{f.eta_min, f.eta_max()}, {f.eta_min, f.eta_max()}}, nodes) /
           (f.delta_eta * f.delta_eta);
}

WorstAttack mdi_worst_attack(double mu, double eta_a, double eta_b, double omega,
                             double tol) {
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("mdi_worst_attack: omega must be >= 1");

    const auto chi_at = [&](double g, double gp) {
        return mdi_holevo(mu, eta_a, eta_b,
                          AttackModel::two_link(omega, omega, {g, gp}));
    };

    WorstAttack best{0.0, 0.0, chi_at(0.0, 0.0)};
    if (omega == 1.0)
        return best; // only the uncorrelated point is physical

    const auto feasible = [&](double g, double gp) {
        return AttackModel::two_link(omega, omega, {g, gp}).physical();
    };

    // The physical set lives inside |g|, |g'| <= sqrt(omega^2 - 1).
    const double gmax = std::sqrt(omega * omega - 1.0);
    const int grid = 41;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double g = -gmax + 2.0 * gmax * i / (grid - 1);
            const double gp = -gmax + 2.0 * gmax * j / (grid - 1);
            if (!feasible(g, gp))
                continue;
            const double chi = chi_at(g, gp);
            if (chi > best.chi)
                best = {g, gp, chi};
        }
    }

    // Compass pattern search from the grid optimum. The objective is smooth,
    // so shrinking the step to 1e-6 of the box comfortably beats `tol` bits.
    const std::pair<int, int> dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    double step = gmax / (grid - 1);
    const double min_step = std::min(tol, 1e-6) * gmax;
    while (step > min_step) {
        bool improved = false;
        for (const auto& [dx, dy] : dirs) {
            const double g = best.g + dx * step;
            const double gp = best.g_prime + dy * step;
            if (std::abs(g) > gmax || std::abs(gp) > gmax || !feasible(g, gp))
                continue;
            const double chi = chi_at(g, gp);
            if (chi > best.chi) {
                best = {g, gp, chi};
                improved = true;
            }
        }
        if (!improved)
            step *= 0.5;
    }
    return best;
}

} // namespace fadecv
