#pragma once

#include "fadecv/channel.hpp"
#include "fadecv/covariance.hpp"
#include "fadecv/numerics.hpp"

#include <array>

namespace fadecv {

/// Three-user CV-MDI conferencing network in the star configuration: equal
/// link transmissivities and thermal noises, rate optimized over the EPR
/// parameter mu.
struct Net3Params {
    double omega = 1.0;
    double beta = 1.0;
    FadingModel fading;
    SearchInterval mu_search{2.0, 20.0, 1e-3};
    CorrelationBlock g; // applied to all three link pairs; zero by default

    AttackModel attack() const {
        return AttackModel::three_link(omega, omega, omega, g, g, g);
    }
    void validate() const;
};

/// State of (a, b, c, A', B', C') after the three links; with include_eve,
/// Eve's three interacting outputs and three purification partners follow.
CovarianceMatrix net3_joint_cm(double mu, const std::array<double, 3>& etas,
                               const AttackModel& attack, bool include_eve = false);

/// Three-party CV Bell detection. Expects the travel modes at indices 3, 4,
/// 5: a balanced beam splitter mixes A' and B', the q quadrature of the
/// minus port is homodyned, the plus port meets C' on a transmissivity-2/3
/// beam splitter, and the q and p quadratures of its minus and plus ports
/// are homodyned. The three relay modes are consumed.
CovarianceMatrix net3_relay_condition(const CovarianceMatrix& V);

/// Conditional state of (a, b, c) after the relay broadcast.
CovarianceMatrix net3_post_relay_cm(double mu, const std::array<double, 3>& etas,
                                    const AttackModel& attack);

/// Holevo bound S(V_abc|relay) - S(V_bc | relay, Alice's heterodyne).
double net3_holevo(double mu, const std::array<double, 3>& etas, const AttackModel& attack);

/// min(I_AB, I_AC) with each pairwise term from the determinant identity
/// (1/2) log2 [det(V_m + I) / det(V_m|a + I)] for m = b, c.
double net3_mutual_info(double mu, const std::array<double, 3>& etas,
                        const AttackModel& attack);

/// Conferencing key rate beta * min(I_AB, I_AC) - chi.
double net3_rate(double mu, const std::array<double, 3>& etas, double beta,
                 const AttackModel& attack);

struct OptimizedRate {
    double rate = 0.0;
    double mu = 0.0;
};

/// Star-configuration rate at a fixed transmissivity, maximized over mu
/// (uncorrelated attack).
OptimizedRate net3_rate_star(double omega, double eta, double beta,
                             const SearchInterval& mu_search = {2.0, 20.0, 1e-3});

/// Same maximization with the attack taken from params (correlations kept).
OptimizedRate net3_rate_fixed_star(const Net3Params& params, double eta);

/// Fast-fading star rate at a fixed mu: beta * I_min(eta_min) minus the
/// Holevo bound averaged over the three link transmissivities.
double net3_rate_fast_star_at(const Net3Params& params, double mu, int nodes = 16);

/// Slow-fading star rate at a fixed mu: the full pointwise rate averaged
/// over all three links.
double net3_rate_slow_star_at(const Net3Params& params, double mu, int nodes = 16);

/// The fading rates above maximized over mu_search.
OptimizedRate net3_rate_fast_star(const Net3Params& params, int nodes = 16);
OptimizedRate net3_rate_slow_star(const Net3Params& params, int nodes = 16);

} // namespace fadecv
