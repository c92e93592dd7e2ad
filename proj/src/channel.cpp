#include "fadecv/channel.hpp"
#include "fadecv/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fadecv {

double FadingModel::density(double eta) const {
    if (delta_eta <= 0.0)
        throw domain_error("FadingModel::density: point mass has no density");
    return (eta >= eta_min && eta <= eta_max()) ? 1.0 / delta_eta : 0.0;
}

void FadingModel::validate() const {
    if (!(eta_min > 0.0) || delta_eta < 0.0 || eta_max() > 1.0 + 1e-12)
        throw domain_error("FadingModel: need 0 < eta_min and eta_min + delta_eta <= 1");
}

AttackModel AttackModel::uncorrelated(std::vector<double> omegas) {
    AttackModel a;
    a.omegas = std::move(omegas);
    a.correlations.assign(a.omegas.size() > 1 ? (a.omegas.size() == 2 ? 1 : 3) : 0,
                          CorrelationBlock{});
    return a;
}

AttackModel AttackModel::two_link(double omega_a, double omega_b, CorrelationBlock g) {
    AttackModel a;
    a.omegas = {omega_a, omega_b};
    a.correlations = {g};
    return a;
}

AttackModel AttackModel::three_link(double omega_a, double omega_b, double omega_c,
                                    CorrelationBlock g1, CorrelationBlock g2,
                                    CorrelationBlock g3) {
    AttackModel a;
    a.omegas = {omega_a, omega_b, omega_c};
    a.correlations = {g1, g2, g3};
    return a;
}

namespace {

// Unordered pair (i, j) of the k-th correlation block for n links.
std::pair<int, int> pair_for_block(int n, int k) {
    if (n == 2)
        return {0, 1};
    // Three links: G1 = (0,1), G2 = (1,2), G3 = (0,2).
    switch (k) {
    case 0: return {0, 1};
    case 1: return {1, 2};
    default: return {0, 2};
    }
}

} // namespace

CovarianceMatrix AttackModel::eve_cm() const {
    const int n = links();
    if (n < 1)
        throw dimension_error("AttackModel: no links");
    for (double w : omegas)
        if (std::isnan(w) || w < 1.0)
            throw domain_error("AttackModel: thermal variance must be >= 1");
    const std::size_t expected = (n == 1) ? 0 : (n == 2 ? 1 : 3);
    if (n > 3 || correlations.size() != expected)
        throw dimension_error("AttackModel: unsupported link/correlation layout");

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        w.block<2, 2>(2 * i, 2 * i) =
            omegas[static_cast<std::size_t>(i)] * Eigen::Matrix2d::Identity();
    for (std::size_t k = 0; k < correlations.size(); ++k) {
        const auto [i, j] = pair_for_block(n, static_cast<int>(k));
        Eigen::Matrix2d g;
        g << correlations[k].g, 0.0, 0.0, correlations[k].g_prime;
        w.block<2, 2>(2 * i, 2 * j) = g;
        w.block<2, 2>(2 * j, 2 * i) = g;
    }
    return CovarianceMatrix(std::move(w));
}

bool AttackModel::physical() const {
    return is_physical(eve_cm());
}

ChannelPoint ChannelPoint::from_db(double db, Anchor anchor) {
    if (std::isnan(db) || db < 0.0)
        throw domain_error("ChannelPoint: attenuation must be >= 0 dB");
    return ChannelPoint{db_to_eta(db), db, anchor};
}

ChannelPoint ChannelPoint::from_eta(double eta, Anchor anchor) {
    if (std::isnan(eta) || eta <= 0.0 || eta > 1.0)
        throw domain_error("ChannelPoint: eta must lie in (0, 1]");
    return ChannelPoint{eta, eta_to_db(eta), anchor};
}

CovarianceMatrix thermal_loss_apply(const CovarianceMatrix& V, int mode, double eta,
                                    double omega) {
    if (mode < 0 || mode >= V.modes())
        throw dimension_error("thermal_loss_apply: mode index out of range");
    if (std::isnan(eta) || eta < 0.0 || eta > 1.0)
        throw domain_error("thermal_loss_apply: eta must lie in [0, 1]");
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("thermal_loss_apply: omega must be >= 1");

    const double root = std::sqrt(eta);
    Eigen::MatrixXd out = V.matrix();
    out.middleRows<2>(2 * mode) *= root;
    out.middleCols<2>(2 * mode) *= root;
    out.block<2, 2>(2 * mode, 2 * mode) =
        eta * V.matrix().block<2, 2>(2 * mode, 2 * mode) +
        (1.0 - eta) * omega * Eigen::Matrix2d::Identity();
    return CovarianceMatrix(std::move(out));
}

CovarianceMatrix dilated_thermal_loss(const CovarianceMatrix& V, int mode, double eta,
                                      const CovarianceMatrix& env_cm) {
    if (env_cm.modes() != 2)
        throw dimension_error("dilated_thermal_loss: environment must have two modes (e, E)");
    if (!is_physical(env_cm))
        throw invalid_state_error("dilated_thermal_loss: environment state is unphysical");
    if (mode < 0 || mode >= V.modes())
        throw dimension_error("dilated_thermal_loss: mode index out of range");
    if (std::isnan(eta) || eta < 0.0 || eta > 1.0)
        throw domain_error("dilated_thermal_loss: eta must lie in [0, 1]");

    const CovarianceMatrix joint = V.tensor(env_cm);
    const int e_interact = V.modes() + 1; // (e, E): E couples to the channel
    const SymplecticMatrix bs = beamsplitter(eta, mode, e_interact, joint.modes());
    return apply_symplectic(bs, joint);
}

namespace {

void check_attack_inputs(const CovarianceMatrix& V, const std::vector<int>& travel_modes,
                         const std::vector<double>& etas, const AttackModel& attack) {
    const int n = attack.links();
    if (static_cast<int>(travel_modes.size()) != n ||
        static_cast<int>(etas.size()) != n)
        throw dimension_error("correlated_attack: travel_modes/etas/attack lengths differ");
    for (int m : travel_modes)
        if (m < 0 || m >= V.modes())
            throw dimension_error("correlated_attack: travel mode out of range");
    for (double e : etas)
        if (std::isnan(e) || e < 0.0 || e > 1.0)
            throw domain_error("correlated_attack: eta must lie in [0, 1]");
    if (!attack.physical())
        throw attack_rejected_error("correlated_attack: Eve covariance matrix is unphysical");
}

} // namespace

CovarianceMatrix correlated_attack_apply(const CovarianceMatrix& V,
                                         const std::vector<int>& travel_modes,
                                         const std::vector<double>& etas,
                                         const AttackModel& attack) {
    check_attack_inputs(V, travel_modes, etas, attack);
    const int n = attack.links();

    CovarianceMatrix joint = V.tensor(purify(attack.eve_cm()));
    for (int i = 0; i < n; ++i) {
        const SymplecticMatrix bs = beamsplitter(etas[static_cast<std::size_t>(i)],
                                                 travel_modes[static_cast<std::size_t>(i)],
                                                 V.modes() + i, joint.modes());
        joint = apply_symplectic(bs, joint);
    }
    return joint;
}

CovarianceMatrix correlated_attack_marginal(const CovarianceMatrix& V,
                                            const std::vector<int>& travel_modes,
                                            const std::vector<double>& etas,
                                            const AttackModel& attack) {
    check_attack_inputs(V, travel_modes, etas, attack);
    const int n = attack.links();
    const CovarianceMatrix eve = attack.eve_cm();

    // Block action of the joint beam splitters on the system marginal:
    //   travel i block      -> eta_i B_i + (1 - eta_i) omega_i I
    //   travel i x travel j -> sqrt(eta_i eta_j) B_ij
    //                          + sqrt((1-eta_i)(1-eta_j)) G_ij
    //   travel i x spectator-> sqrt(eta_i) (cross)
    Eigen::MatrixXd out = V.matrix();
    for (int i = 0; i < n; ++i) {
        const int mi = travel_modes[static_cast<std::size_t>(i)];
        const double ei = etas[static_cast<std::size_t>(i)];
        out.middleRows<2>(2 * mi) *= std::sqrt(ei);
        out.middleCols<2>(2 * mi) *= std::sqrt(ei);
    }
    for (int i = 0; i < n; ++i) {
        const int mi = travel_modes[static_cast<std::size_t>(i)];
        const double ei = etas[static_cast<std::size_t>(i)];
        out.block<2, 2>(2 * mi, 2 * mi) =
            ei * V.matrix().block<2, 2>(2 * mi, 2 * mi) +
            (1.0 - ei) * eve.mode_block(i, i);
        for (int j = i + 1; j < n; ++j) {
            const int mj = travel_modes[static_cast<std::size_t>(j)];
            const double ej = etas[static_cast<std::size_t>(j)];
            const Eigen::Matrix2d blk =
                std::sqrt(ei * ej) * V.matrix().block<2, 2>(2 * mi, 2 * mj) +
                std::sqrt((1.0 - ei) * (1.0 - ej)) * eve.mode_block(i, j);
            out.block<2, 2>(2 * mi, 2 * mj) = blk;
            out.block<2, 2>(2 * mj, 2 * mi) = blk.transpose();
        }
    }
    return CovarianceMatrix(std::move(out));
}

double plob_bound(double eta) {
    if (std::isnan(eta) || eta < 0.0 || eta > 1.0)
        throw domain_error("plob_bound: eta must lie in [0, 1]");
    if (eta == 1.0)
        return std::numeric_limits<double>::infinity();
    return -std::log2(1.0 - eta);
}

double plob_bound_averaged(const FadingModel& fading) {
    fading.validate();
    if (fading.delta_eta == 0.0)
        return plob_bound(fading.eta_min);
    if (fading.eta_max() >= 1.0)
        throw domain_error("plob_bound_averaged: support touches eta = 1, bound diverges");

    // Antiderivative of -log2(1 - u): F(u) = [(1-u) ln(1-u) + u] / ln 2.
    const auto F = [](double u) {
        return ((1.0 - u) * std::log(1.0 - u) + u) / std::numbers::ln2;
    };
    return (F(fading.eta_max()) - F(fading.eta_min)) / fading.delta_eta;
}

double db_to_eta(double db) {
    if (std::isnan(db) || db < 0.0)
        throw domain_error("db_to_eta: attenuation must be >= 0 dB");
    return std::pow(10.0, -db / 10.0);
}

double eta_to_db(double eta) {
    if (std::isnan(eta) || eta <= 0.0 || eta > 1.0)
        throw domain_error("eta_to_db: eta must lie in (0, 1]");
    return -10.0 * std::log10(eta);
}

} // namespace fadecv
