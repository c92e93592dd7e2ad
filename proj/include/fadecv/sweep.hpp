#pragma once

#include "fadecv/channel.hpp"
#include "fadecv/oneway.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fadecv {

enum class Protocol { oneway, mdi, net3, plob };
enum class FadingMode { fast, slow, fixed, all };
enum class OutputFormat { csv, json };

/// One batch sweep over a uniform, endpoint-inclusive dB grid. The swept
/// attenuation controls the anchor point of the fading support at every
/// sample; points whose resolved support leaves (0, 1] are emitted with
/// status "out_of_domain" instead of being dropped.
struct SweepConfig {
    Protocol protocol = Protocol::oneway;
    FadingMode fading_mode = FadingMode::all;
    Anchor anchor = Anchor::mean;

    double db_start = 0.0;
    double db_stop = 20.0;
    int db_points = 50;

    double delta_eta = 0.0;
    double omega = 1.0;
    double beta = 1.0;

    double mu = 1e6;
    bool optimize_mu = false;
    double mu_lo = 0.0; // 0 -> protocol default (1 for oneway/mdi, 2 for net3)
    double mu_hi = 0.0; // 0 -> protocol default (1e8 for oneway/mdi, 20 for net3)

    Kernel kernel = Kernel::exact; // oneway only
    double g = 0.0;
    double g_prime = 0.0;
    bool worst_case = false; // mdi only: substitute the numerical worst (g, g')

    int nodes = 0; // quadrature nodes per axis; 0 -> 64 / 24 / 16 per protocol

    void validate() const; // throws domain_error naming the offending field
};

/// One sweep sample. Fields without a value (not requested, out of domain,
/// or divergent) stay empty and are emitted as empty CSV cells / JSON nulls.
struct RatePoint {
    double db_anchor = 0.0;
    double eta_min = 0.0;
    double eta_mean = 0.0;
    double eta_max = 0.0;
    std::optional<double> rate_fast;
    std::optional<double> rate_slow;
    std::optional<double> rate_fixed;
    std::optional<double> plob;
    std::optional<double> mu_used;
    std::string status = "ok";
};

std::vector<RatePoint> run_sweep(const SweepConfig& config);

void write_csv(const std::vector<RatePoint>& table, std::ostream& os);
void write_json(const std::vector<RatePoint>& table, std::ostream& os);

/// Writes the table to `path` ("-" = stdout). I/O failures raise a
/// std::runtime_error carrying the path.
void emit(const std::vector<RatePoint>& table, OutputFormat format, const std::string& path);

} // namespace fadecv
