// fadecv: secret-key-rate sweeps for CV-QKD protocols over fading channels.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric/runtime failure.

#include "fadecv/errors.hpp"
#include "fadecv/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

struct CliOptions {
    fadecv::SweepConfig sweep;
    std::string config_path;
    std::string output = "-";
    fadecv::OutputFormat format = fadecv::OutputFormat::csv;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value file, one key per line, '#' comments. Returns the entries
/// as --key=value arguments; keys must name options of `cmd`.
std::vector<std::string> load_config_args(const std::string& path, const CLI::App& cmd) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path + "' line " + std::to_string(lineno) +
                              ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config")
            throw ConfigError("config file '" + path + "': nested config is not allowed");
        if (cmd.get_option_no_throw("--" + key) == nullptr)
            throw ConfigError("config file '" + path + "': unknown key '" + key + "'");
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

void add_sweep_options(CLI::App& cmd, CliOptions& opt, fadecv::Protocol protocol) {
    using fadecv::Anchor;
    using fadecv::FadingMode;
    using fadecv::Kernel;
    using fadecv::OutputFormat;
    using fadecv::Protocol;

    opt.sweep.protocol = protocol;

    const std::map<std::string, FadingMode> fading_modes{{"fast", FadingMode::fast},
                                                         {"slow", FadingMode::slow},
                                                         {"fixed", FadingMode::fixed},
                                                         {"all", FadingMode::all}};
    const std::map<std::string, Anchor> anchors{
        {"min", Anchor::min}, {"mean", Anchor::mean}, {"max", Anchor::max}};
    const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv},
                                                      {"json", OutputFormat::json}};

    // File values are injected ahead of the explicit flags, so TakeLast
    // gives command-line arguments precedence over the config file.
    const auto opt_last = [](CLI::Option* o) {
        return o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };

    opt_last(cmd.add_option("--config", opt.config_path,
                            "Flat key=value file; flags override file values"));

    if (protocol != Protocol::plob)
        opt_last(cmd.add_option("--fading-mode", opt.sweep.fading_mode,
                                "Which rate columns to compute: fast|slow|fixed|all")
                     ->transform(CLI::CheckedTransformer(fading_modes, CLI::ignore_case)));
    opt_last(cmd.add_option("--anchor", opt.sweep.anchor,
                            "Support point the swept dB value controls: min|mean|max")
                 ->transform(CLI::CheckedTransformer(anchors, CLI::ignore_case)));
    opt_last(cmd.add_option("--db-start", opt.sweep.db_start, "First attenuation sample in dB"));
    opt_last(cmd.add_option("--db-stop", opt.sweep.db_stop, "Last attenuation sample in dB"));
    opt_last(cmd.add_option("--db-points", opt.sweep.db_points,
                            "Number of uniformly spaced samples"));
    opt_last(cmd.add_option("--delta-eta", opt.sweep.delta_eta,
                            "Width of the uniform transmissivity distribution"));

    if (protocol != Protocol::plob) {
        opt_last(cmd.add_option("--omega", opt.sweep.omega,
                                "Thermal noise variance of the attack"));
        opt_last(cmd.add_option("--beta", opt.sweep.beta, "Reconciliation efficiency"));
        opt_last(cmd.add_option("--mu", opt.sweep.mu, "EPR parameter (fixed-mu runs)"));
        cmd.add_flag("--optimize-mu", opt.sweep.optimize_mu,
                     "Maximize each rate over mu instead of using --mu");
        opt_last(cmd.add_option("--mu-lo", opt.sweep.mu_lo,
                                "Lower end of the mu search interval"));
        opt_last(cmd.add_option("--mu-hi", opt.sweep.mu_hi,
                                "Upper end of the mu search interval"));
        opt_last(cmd.add_option("--nodes", opt.sweep.nodes,
                                "Gauss-Legendre nodes per fading axis (0 = protocol default)"));
    }
    if (protocol == Protocol::oneway) {
        const std::map<std::string, Kernel> kernels{{"exact", Kernel::exact},
                                                    {"asymptotic", Kernel::asymptotic}};
        opt_last(cmd.add_option("--kernel", opt.sweep.kernel,
                                "Rate kernels: exact CM pipeline or large-mu closed forms")
                     ->transform(CLI::CheckedTransformer(kernels, CLI::ignore_case)));
    }
    if (protocol == Protocol::mdi || protocol == Protocol::net3) {
        opt_last(cmd.add_option("--g", opt.sweep.g, "Cross-link correlation g of Eve's modes"));
        opt_last(cmd.add_option("--g-prime", opt.sweep.g_prime,
                                "Cross-link correlation g' of Eve's modes"));
    }
    if (protocol == Protocol::mdi)
        cmd.add_flag("--worst-case", opt.sweep.worst_case,
                     "Replace (g, g') with the numerical worst-case correlations");

    opt_last(cmd.add_option("--output", opt.output, "Output path ('-' = stdout)"));
    opt_last(cmd.add_option("--format", opt.format, "Output format: csv|json")
                 ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case)));
}

int run(const CliOptions& opt) {
    const std::vector<fadecv::RatePoint> table = fadecv::run_sweep(opt.sweep);
    fadecv::emit(table, opt.format, opt.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secret-key rates of CV-QKD protocols over uniform fading channels"};
    app.require_subcommand(1);

    CliOptions oneway_opt, mdi_opt, net3_opt, plob_opt;
    CLI::App* oneway = app.add_subcommand("oneway", "One-way switching protocol");
    CLI::App* mdi = app.add_subcommand("mdi", "Two-user MDI protocol, symmetric links");
    CLI::App* net3 = app.add_subcommand("net3", "Three-user MDI conferencing star network");
    CLI::App* plob = app.add_subcommand("plob", "Repeaterless bound only");

    add_sweep_options(*oneway, oneway_opt, fadecv::Protocol::oneway);
    add_sweep_options(*mdi, mdi_opt, fadecv::Protocol::mdi);
    add_sweep_options(*net3, net3_opt, fadecv::Protocol::net3);
    add_sweep_options(*plob, plob_opt, fadecv::Protocol::plob);

    // Two-pass parse: pull --config out of the raw arguments first, expand
    // the file into --key=value arguments ahead of the user's flags, then
    // hand everything to the regular parser.
    std::vector<std::string> raw(argv + 1, argv + argc);
    std::vector<std::string> args;
    try {
        std::string config_path;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == "--config" && i + 1 < raw.size())
                config_path = raw[i + 1];
            else if (raw[i].rfind("--config=", 0) == 0)
                config_path = raw[i].substr(9);
        }
        if (!config_path.empty() && !raw.empty()) {
            const CLI::App* sub = app.get_subcommand_no_throw(raw.front());
            if (sub != nullptr) {
                const std::vector<std::string> file_args =
                    load_config_args(config_path, *sub);
                args.push_back(raw.front());
                args.insert(args.end(), file_args.begin(), file_args.end());
                args.insert(args.end(), raw.begin() + 1, raw.end());
            }
        }
        if (args.empty())
            args = raw;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const std::string& a : args)
            cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (oneway->parsed())
            return run(oneway_opt);
        if (mdi->parsed())
            return run(mdi_opt);
        if (net3->parsed()) {
            // Paper procedure: the three-user rates are optimized over
            // mu in [2, 20] unless a fixed mu was requested.
            if (net3->count("--mu") == 0 && net3->count("--optimize-mu") == 0)
                net3_opt.sweep.optimize_mu = true;
            return run(net3_opt);
        }
        return run(plob_opt);
    } catch (const fadecv::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const fadecv::dimension_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    }
}
