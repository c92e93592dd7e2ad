#pragma once

#include "fadecv/channel.hpp"
#include "fadecv/covariance.hpp"

namespace fadecv {

/// Kernel choice for the one-way rate integrals. Exact kernels evaluate the
/// covariance-matrix pipeline at finite mu; asymptotic kernels use the
/// large-mu closed forms (valid when eta*mu and (1-eta)*mu are both large).
enum class Kernel { exact, asymptotic };

/// One-way coherent-state switching protocol in reverse reconciliation.
struct OneWayParams {
    double mu = 1e6;   // EPR parameter, modulation variance mu - 1
    double omega = 1.0;
    double beta = 1.0;
    FadingModel fading;

    void validate() const;
};

/// Covariance matrix of Alice's kept mode a and Bob's output B after the
/// thermal-loss channel: [[mu I, sqrt(eta(mu^2-1)) Z], [., (eta mu + (1-eta) omega) I]].
CovarianceMatrix oneway_cm(double mu, double eta, double omega);

/// Mutual information (bits) of the homodyne outcome with Alice's variable:
/// (1/2) log2(V_B / V_B|x), exact at every mu.
double oneway_mutual_info(double mu, double eta, double omega);

/// Large-mu form (1/2) log2[eta mu / (eta + (1-eta) omega)].
/// Returns -infinity at eta = 0.
double oneway_mutual_info_asym(double mu, double eta, double omega);

/// Holevo bound on Eve's information about the homodyne outcome, computed
/// as S(rho_aB) - S(rho_a|y) through the purification of the channel.
double oneway_holevo(double mu, double eta, double omega);

/// Large-mu form (1/2) log2[eta (1-eta) mu / omega] + h(omega).
/// Returns -infinity at eta in {0, 1}. The raw value is reported; it turns
/// negative outside the validity region eta(1-eta) mu >> omega.
double oneway_holevo_asym(double mu, double eta, double omega);

/// beta * I - chi at a single transmissivity.
double oneway_rate_fixed(const OneWayParams& params, double eta, Kernel kernel = Kernel::exact);

/// Fast-fading rate: beta * I(eta_min) - <chi> with the Holevo term averaged
/// over the fading distribution by Gauss-Legendre quadrature.
double oneway_rate_fast(const OneWayParams& params, Kernel kernel = Kernel::exact,
                        int nodes = 64);

/// Closed form of the fast-fading rate for a pure-loss channel at beta = 1
/// in the large-mu regime.
double oneway_rate_fast_loss_closed(double eta_min, double delta_eta);

/// Slow-fading rate: <beta * I(eta) - chi(eta)> over the distribution.
double oneway_rate_slow(const OneWayParams& params, Kernel kernel = Kernel::exact,
                        int nodes = 64);

} // namespace fadecv
