#pragma once

#include "fadecv/channel.hpp"
#include "fadecv/covariance.hpp"

namespace fadecv {

/// Symmetric two-user CV-MDI protocol: both links share one fading model and
/// one thermal variance; the relay is untrusted. Alice's heterodyne outcome
/// is the reconciled variable.
struct MdiParams {
    double mu = 1e6;
    double omega = 1.0;
    double beta = 1.0;
    FadingModel fading;
    CorrelationBlock g; // cross-link correlation of Eve's two modes

    AttackModel attack() const { return AttackModel::two_link(omega, omega, g); }
    void validate() const;
};

/// State of (a, b, A', B') after both travel modes cross the attacked links;
/// with include_eve, Eve's two interacting outputs and two purification
/// partners follow at indices 4..7.
CovarianceMatrix mdi_joint_cm(double mu, double eta_a, double eta_b,
                              const AttackModel& attack, bool include_eve = false);

/// CV Bell detection at the relay: balanced beam splitter on the two travel
/// modes, q-homodyne on the minus port, p-homodyne on the plus port. The two
/// relay modes are consumed; all other modes (parties, Eve) pass through.
CovarianceMatrix mdi_relay_condition(const CovarianceMatrix& V, int mode_a_prime,
                                     int mode_b_prime);

/// Conditional state of (a, b) after the relay announcement.
CovarianceMatrix mdi_post_relay_cm(double mu, double eta_a, double eta_b,
                                   const AttackModel& attack);

/// Holevo bound S(V_ab|relay) - S(V_b | relay, Alice's heterodyne).
double mdi_holevo(double mu, double eta_a, double eta_b, const AttackModel& attack);

/// Heterodyne-heterodyne mutual information of Alice and Bob,
/// (1/2) log2 [det(V_b + I) / det(V_b|a + I)].
double mdi_mutual_info(double mu, double eta_a, double eta_b, const AttackModel& attack);

/// beta * I - chi at one symmetric transmissivity (non-fading channel).
double mdi_rate_fixed(const MdiParams& params, double eta);

/// Fast fading: beta * I(eta_min, eta_min) - mean of chi over both links.
double mdi_rate_fast(const MdiParams& params, int nodes = 24);

/// Slow fading: mean of [beta * I - chi] over both links.
double mdi_rate_slow(const MdiParams& params, int nodes = 24);

struct WorstAttack {
    double g = 0.0;
    double g_prime = 0.0;
    double chi = 0.0;
};

/// Numerical worst-case correlated attack: maximizes the Holevo bound over
/// the physical (g, g') region at fixed thermal variance. Grid scan refined
/// by pattern search; tol is in bits.
WorstAttack mdi_worst_attack(double mu, double eta_a, double eta_b, double omega,
                             double tol = 1e-4);

} // namespace fadecv
