#pragma once

#include "fadecv/covariance.hpp"

#include <vector>

namespace fadecv {

/// Uniform transmissivity distribution on [eta_min, eta_min + delta_eta].
/// delta_eta = 0 is a point mass at eta_min.
struct FadingModel {
    double eta_min = 1.0;
    double delta_eta = 0.0;

    double eta_max() const { return eta_min + delta_eta; }
    double eta_mean() const { return eta_min + 0.5 * delta_eta; }

    /// Probability density at eta (1/delta_eta on the support, else 0).
    double density(double eta) const;

    /// Throws domain_error unless 0 < eta_min and eta_max <= 1.
    void validate() const;
};

/// Diagonal correlation block G = diag(g, g') between two of Eve's modes.
struct CorrelationBlock {
    double g = 0.0;
    double g_prime = 0.0;
};

/// Eve's input state for a multi-link Gaussian attack: per-link thermal
/// variances omega_i on the diagonal and optional diag(g, g') blocks
/// between link pairs. Pair order: (0,1) for two links; (0,1), (1,2), (0,2)
/// for three.
struct AttackModel {
    std::vector<double> omegas;
    std::vector<CorrelationBlock> correlations;

    static AttackModel uncorrelated(std::vector<double> omegas);
    static AttackModel two_link(double omega_a, double omega_b, CorrelationBlock g);
    static AttackModel three_link(double omega_a, double omega_b, double omega_c,
                                  CorrelationBlock g1, CorrelationBlock g2,
                                  CorrelationBlock g3);

    int links() const { return static_cast<int>(omegas.size()); }

    /// Assembled input covariance matrix of Eve's interacting modes.
    CovarianceMatrix eve_cm() const;

    /// True iff eve_cm() passes is_physical.
    bool physical() const;
};

/// Anchor of a dB sweep: which support point of the fading distribution the
/// swept transmissivity controls.
enum class Anchor { min, mean, max };

/// One transmissivity sample with its dB attenuation, kept consistent.
struct ChannelPoint {
    double eta = 1.0;
    double db = 0.0;
    Anchor anchor = Anchor::mean;

    static ChannelPoint from_db(double db, Anchor anchor = Anchor::mean);
    static ChannelPoint from_eta(double eta, Anchor anchor = Anchor::mean);
};

/// Thermal-loss channel on one mode: B -> eta B + (1-eta) omega I, cross
/// covariances scaled by sqrt(eta).
CovarianceMatrix thermal_loss_apply(const CovarianceMatrix& V, int mode, double eta,
                                    double omega);

/// Stinespring picture of the thermal-loss channel: the two environment
/// modes (e, E) of env_cm are appended after the system, the beam splitter
/// couples `mode` with E, and the full state (system + Eve's e, E') is
/// returned. With env_cm = tmsv_cm(omega), tracing out the appended modes
/// reproduces thermal_loss_apply.
CovarianceMatrix dilated_thermal_loss(const CovarianceMatrix& V, int mode, double eta,
                                      const CovarianceMatrix& env_cm);

/// Correlated multi-link attack. Eve's joint input eve_cm() is purified
/// (Williamson plus TMSV partners), each interacting mode is beam-split with
/// the matching travel mode at transmissivity etas[i], and the full state is
/// returned: system modes first, then Eve's n interacting outputs, then her
/// n purification partners.
CovarianceMatrix correlated_attack_apply(const CovarianceMatrix& V,
                                         const std::vector<int>& travel_modes,
                                         const std::vector<double>& etas,
                                         const AttackModel& attack);

/// System-only marginal of correlated_attack_apply (no Eve modes kept).
CovarianceMatrix correlated_attack_marginal(const CovarianceMatrix& V,
                                            const std::vector<int>& travel_modes,
                                            const std::vector<double>& etas,
                                            const AttackModel& attack);

/// Repeaterless bound -log2(1 - eta) in bits per use; +infinity at eta = 1.
double plob_bound(double eta);

/// Average of plob_bound over a fading distribution, by the closed-form
/// antiderivative. Throws if the support touches eta = 1 (the pointwise
/// bound diverges there).
double plob_bound_averaged(const FadingModel& fading);

/// eta = 10^(-db/10).
double db_to_eta(double db);
double eta_to_db(double eta);

} // namespace fadecv
