#include "fadecv/sweep.hpp"
#include "fadecv/errors.hpp"
#include "fadecv/mdi.hpp"
#include "fadecv/net3.hpp"
#include "fadecv/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

namespace fadecv {

namespace {

int default_nodes(Protocol p) {
    switch (p) {
    case Protocol::oneway: return 64;
    case Protocol::mdi: return 24;
    default: return 16;
    }
}

double default_mu_lo(Protocol p) { return p == Protocol::net3 ? 2.0 : 1.0; }
double default_mu_hi(Protocol p) { return p == Protocol::net3 ? 20.0 : 1e8; }

/// Maximizes f over mu on a log10 grid; returns {rate, mu}.
OptimizedRate maximize_over_log_mu(const std::function<double(double)>& f, double mu_lo,
                                   double mu_hi) {
    const ScalarMaximum m = maximize_scalar(
        [&](double x) { return f(std::pow(10.0, x)); },
        SearchInterval{std::log10(mu_lo), std::log10(mu_hi), 1e-3});
    return {m.value, std::pow(10.0, m.x)};
}

struct ResolvedPoint {
    double db = 0.0;
    FadingModel fading;
    bool in_domain = true;
};

ResolvedPoint resolve_point(double db, const SweepConfig& cfg) {
    ResolvedPoint pt;
    pt.db = db;
    const double eta = db_to_eta(db);
    double eta_min = eta;
    switch (cfg.anchor) {
    case Anchor::min: eta_min = eta; break;
    case Anchor::mean: eta_min = eta - 0.5 * cfg.delta_eta; break;
    case Anchor::max: eta_min = eta - cfg.delta_eta; break;
    }
    double eta_max = eta_min + cfg.delta_eta;
    if (std::abs(eta_max - 1.0) < 1e-12)
        eta_max = 1.0; // snap rounding noise at the 0 dB edge
    pt.fading = FadingModel{eta_min, eta_max - eta_min};
    pt.in_domain = eta_min > 0.0 && eta_max <= 1.0;
    return pt;
}

std::optional<double> averaged_plob(const FadingModel& f) {
    try {
        const double v = f.delta_eta == 0.0 ? plob_bound(f.eta_min) : plob_bound_averaged(f);
        if (!std::isfinite(v))
            return std::nullopt;
        return v;
    } catch (const domain_error&) {
        return std::nullopt; // support touches eta = 1
    }
}

void fill_oneway(const SweepConfig& cfg, const ResolvedPoint& pt, bool want_fast,
                 bool want_slow, bool want_fixed, RatePoint& row) {
    const auto rate_for = [&](double mu, FadingMode mode) {
        OneWayParams p{mu, cfg.omega, cfg.beta, pt.fading};
        switch (mode) {
        case FadingMode::fast: return oneway_rate_fast(p, cfg.kernel, cfg.nodes);
        case FadingMode::slow: return oneway_rate_slow(p, cfg.kernel, cfg.nodes);
        default: return oneway_rate_fixed(p, pt.fading.eta_mean(), cfg.kernel);
        }
    };
    const auto compute = [&](FadingMode mode) -> OptimizedRate {
        if (!cfg.optimize_mu)
            return {rate_for(cfg.mu, mode), cfg.mu};
        return maximize_over_log_mu([&](double mu) { return rate_for(mu, mode); },
                                    cfg.mu_lo, cfg.mu_hi);
    };
    if (want_fast) {
        const OptimizedRate r = compute(FadingMode::fast);
        row.rate_fast = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
    if (want_slow) {
        const OptimizedRate r = compute(FadingMode::slow);
        row.rate_slow = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
    if (want_fixed) {
        const OptimizedRate r = compute(FadingMode::fixed);
        row.rate_fixed = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
}

void fill_mdi(const SweepConfig& cfg, const ResolvedPoint& pt, bool want_fast,
              bool want_slow, bool want_fixed, RatePoint& row) {
    CorrelationBlock g{cfg.g, cfg.g_prime};
    if (cfg.worst_case) {
        // Worst correlations at the sweep point's mean transmissivity.
        const double mu_probe = cfg.optimize_mu ? 1e6 : cfg.mu;
        const WorstAttack w =
            mdi_worst_attack(mu_probe, pt.fading.eta_mean(), pt.fading.eta_mean(), cfg.omega);
        g = {w.g, w.g_prime};
    }
    const auto rate_for = [&](double mu, FadingMode mode) {
        MdiParams p{mu, cfg.omega, cfg.beta, pt.fading, g};
        switch (mode) {
        case FadingMode::fast: return mdi_rate_fast(p, cfg.nodes);
        case FadingMode::slow: return mdi_rate_slow(p, cfg.nodes);
        default: return mdi_rate_fixed(p, pt.fading.eta_mean());
        }
    };
    const auto compute = [&](FadingMode mode) -> OptimizedRate {
        if (!cfg.optimize_mu)
            return {rate_for(cfg.mu, mode), cfg.mu};
        return maximize_over_log_mu([&](double mu) { return rate_for(mu, mode); },
                                    cfg.mu_lo, cfg.mu_hi);
    };
    if (want_fast) {
        const OptimizedRate r = compute(FadingMode::fast);
        row.rate_fast = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
    if (want_slow) {
        const OptimizedRate r = compute(FadingMode::slow);
        row.rate_slow = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
    if (want_fixed) {
        const OptimizedRate r = compute(FadingMode::fixed);
        row.rate_fixed = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
}

void fill_net3(const SweepConfig& cfg, const ResolvedPoint& pt, bool want_fast,
               bool want_slow, bool want_fixed, RatePoint& row) {
    Net3Params params{cfg.omega, cfg.beta, pt.fading,
                      SearchInterval{cfg.mu_lo, cfg.mu_hi, 1e-3},
                      CorrelationBlock{cfg.g, cfg.g_prime}};
    const auto compute = [&](FadingMode mode) -> OptimizedRate {
        if (!cfg.optimize_mu) {
            switch (mode) {
            case FadingMode::fast:
                return {net3_rate_fast_star_at(params, cfg.mu, cfg.nodes), cfg.mu};
            case FadingMode::slow:
                return {net3_rate_slow_star_at(params, cfg.mu, cfg.nodes), cfg.mu};
            default: {
                const double em = pt.fading.eta_mean();
                return {net3_rate(cfg.mu, {em, em, em}, cfg.beta, params.attack()), cfg.mu};
            }
            }
        }
        switch (mode) {
        case FadingMode::fast: return net3_rate_fast_star(params, cfg.nodes);
        case FadingMode::slow: return net3_rate_slow_star(params, cfg.nodes);
        default: return net3_rate_fixed_star(params, pt.fading.eta_mean());
        }
    };
    if (want_fast) {
        const OptimizedRate r = compute(FadingMode::fast);
        row.rate_fast = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
    if (want_slow) {
        const OptimizedRate r = compute(FadingMode::slow);
        row.rate_slow = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
    if (want_fixed) {
        const OptimizedRate r = compute(FadingMode::fixed);
        row.rate_fixed = r.rate;
        if (!row.mu_used) row.mu_used = r.mu;
    }
}

} // namespace

void SweepConfig::validate() const {
    if (db_points < 1)
        throw domain_error("db_points: need at least one sample");
    if (std::isnan(db_start) || db_start < 0.0)
        throw domain_error("db_start: attenuation must be >= 0 dB");
    if (std::isnan(db_stop) || db_stop < db_start)
        throw domain_error("db_stop: must be >= db_start");
    if (std::isnan(delta_eta) || delta_eta < 0.0 || delta_eta >= 1.0)
        throw domain_error("delta_eta: must lie in [0, 1)");
    if (std::isnan(omega) || omega < 1.0)
        throw domain_error("omega: thermal variance must be >= 1");
    if (std::isnan(beta) || beta < 0.0 || beta > 1.0)
        throw domain_error("beta: reconciliation efficiency must lie in [0, 1]");
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("mu: EPR parameter must be >= 1");
    const double lo = mu_lo == 0.0 ? default_mu_lo(protocol) : mu_lo;
    const double hi = mu_hi == 0.0 ? default_mu_hi(protocol) : mu_hi;
    if (!(lo >= 1.0) || !(lo < hi))
        throw domain_error("mu_lo/mu_hi: need 1 <= mu_lo < mu_hi");
    if (nodes < 0 || nodes > 512)
        throw domain_error("nodes: quadrature order must lie in [1, 512] (0 = default)");
    if (protocol == Protocol::mdi || protocol == Protocol::net3) {
        const AttackModel a =
            protocol == Protocol::mdi
                ? AttackModel::two_link(omega, omega, {g, g_prime})
                : AttackModel::three_link(omega, omega, omega, {g, g_prime}, {g, g_prime},
                                          {g, g_prime});
        if (!a.physical())
            throw domain_error("g/g_prime: attack covariance matrix is unphysical");
    }
}

std::vector<RatePoint> run_sweep(const SweepConfig& config) {
    config.validate();

    SweepConfig cfg = config;
    if (cfg.nodes == 0)
        cfg.nodes = default_nodes(cfg.protocol);
    if (cfg.mu_lo == 0.0)
        cfg.mu_lo = default_mu_lo(cfg.protocol);
    if (cfg.mu_hi == 0.0)
        cfg.mu_hi = default_mu_hi(cfg.protocol);

    const bool want_fast =
        cfg.fading_mode == FadingMode::fast || cfg.fading_mode == FadingMode::all;
    const bool want_slow =
        cfg.fading_mode == FadingMode::slow || cfg.fading_mode == FadingMode::all;
    const bool want_fixed =
        cfg.fading_mode == FadingMode::fixed || cfg.fading_mode == FadingMode::all;

    std::vector<RatePoint> table;
    table.reserve(static_cast<std::size_t>(cfg.db_points));
    for (int i = 0; i < cfg.db_points; ++i) {
        const double db =
            cfg.db_points == 1
                ? cfg.db_start
                : cfg.db_start + (cfg.db_stop - cfg.db_start) * i / (cfg.db_points - 1);
        const ResolvedPoint pt = resolve_point(db, cfg);

        RatePoint row;
        row.db_anchor = pt.db;
        row.eta_min = pt.fading.eta_min;
        row.eta_mean = pt.fading.eta_mean();
        row.eta_max = pt.fading.eta_max();
        if (!pt.in_domain) {
            row.status = "out_of_domain";
            table.push_back(std::move(row));
            continue;
        }

        if (cfg.protocol == Protocol::oneway || cfg.protocol == Protocol::plob)
            row.plob = averaged_plob(pt.fading);
        switch (cfg.protocol) {
        case Protocol::plob:
            break;
        case Protocol::oneway:
            fill_oneway(cfg, pt, want_fast, want_slow, want_fixed, row);
            break;
        case Protocol::mdi:
            fill_mdi(cfg, pt, want_fast, want_slow, want_fixed, row);
            break;
        case Protocol::net3:
            fill_net3(cfg, pt, want_fast, want_slow, want_fixed, row);
            break;
        }
        table.push_back(std::move(row));
    }
    return table;
}

namespace {

std::string format_value(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v))
        return {};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", *v);
    return buf;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

void write_csv(const std::vector<RatePoint>& table, std::ostream& os) {
    os << "x_db,eta_min,eta_mean,eta_max,rate_fast,rate_slow,rate_fixed,plob,mu_used,status\n";
    for (const RatePoint& r : table) {
        os << format_number(r.db_anchor) << ',' << format_number(r.eta_min) << ','
           << format_number(r.eta_mean) << ',' << format_number(r.eta_max) << ','
           << format_value(r.rate_fast) << ',' << format_value(r.rate_slow) << ','
           << format_value(r.rate_fixed) << ',' << format_value(r.plob) << ','
           << format_value(r.mu_used) << ',' << r.status << '\n';
    }
}

void write_json(const std::vector<RatePoint>& table, std::ostream& os) {
    const auto field = [](const std::optional<double>& v) {
        const std::string s = format_value(v);
        return s.empty() ? std::string("null") : s;
    };
    os << "[\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const RatePoint& r = table[i];
        os << "  {\"x_db\": " << format_number(r.db_anchor)
           << ", \"eta_min\": " << format_number(r.eta_min)
           << ", \"eta_mean\": " << format_number(r.eta_mean)
           << ", \"eta_max\": " << format_number(r.eta_max)
           << ", \"rate_fast\": " << field(r.rate_fast)
           << ", \"rate_slow\": " << field(r.rate_slow)
           << ", \"rate_fixed\": " << field(r.rate_fixed)
           << ", \"plob\": " << field(r.plob)
           << ", \"mu_used\": " << field(r.mu_used)
           << ", \"status\": \"" << r.status << "\"}";
        os << (i + 1 < table.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

void emit(const std::vector<RatePoint>& table, OutputFormat format, const std::string& path) {
    const auto write = [&](std::ostream& os) {
        if (format == OutputFormat::csv)
            write_csv(table, os);
        else
            write_json(table, os);
        if (!os)
            throw std::runtime_error("emit: write failed for '" + path + "'");
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    write(out);
}

} // namespace fadecv
