// qos-sim: run, enumerate and compare the two operation-sharing schemes.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qos/cli.hpp"

namespace {

struct Flags {
    std::optional<std::string> scheme, a, b, omega_angles, alpha, beta, recoverer, trials, seed;
    std::optional<std::string> config_path, out_path;
    bool json = false;
    bool no_timestamp = false;
};

void add_flags(CLI::App &cmd, Flags &f) {
    cmd.add_option("--scheme", f.scheme, "s1 or s2");
    cmd.add_option("--a", f.a, "target amplitude a as re[,im]");
    cmd.add_option("--b", f.b, "target amplitude b as re[,im]");
    cmd.add_option("--omega-angles", f.omega_angles, "operation angles theta,phi,lambda (pi allowed)");
    cmd.add_option("--alpha", f.alpha, "asymmetric W coefficient alpha as re[,im]");
    cmd.add_option("--beta", f.beta, "asymmetric W coefficient beta as re[,im]");
    cmd.add_option("--recoverer", f.recoverer, "holly or jack");
    cmd.add_option("--trials", f.trials, "Monte Carlo trials");
    cmd.add_option("--seed", f.seed, "Monte Carlo seed");
    cmd.add_option("--config", f.config_path, "JSON run configuration; flags override it");
    cmd.add_option("--out", f.out_path, "also write the report to this file");
    cmd.add_flag("--json", f.json, "emit the machine-readable document");
    cmd.add_flag("--no-timestamp", f.no_timestamp, "omit the generation time");
}

std::uint64_t parse_count(const std::string &field, const std::string &text) {
    std::uint64_t v = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw qos::ConfigError(field, "expected a non-negative integer, got '" + text + "'");
    return v;
}

qos::RunConfig resolve(const Flags &f) {
    qos::RunConfig rc = qos::default_run_config();
    if (f.config_path)
        rc = qos::load_run_config(*f.config_path, rc);
    if (f.scheme)
        rc.scheme = qos::parse_scheme_text("--scheme", *f.scheme);
    if (f.a)
        rc.a = qos::parse_complex_text("--a", *f.a);
    if (f.b)
        rc.b = qos::parse_complex_text("--b", *f.b);
    if (f.omega_angles)
        rc.omega = qos::parse_angles_text("--omega-angles", *f.omega_angles);
    if (f.alpha)
        rc.alpha = qos::parse_complex_text("--alpha", *f.alpha);
    if (f.beta)
        rc.beta = qos::parse_complex_text("--beta", *f.beta);
    if (f.recoverer)
        rc.recoverer = qos::parse_recoverer_text("--recoverer", *f.recoverer);
    if (f.trials)
        rc.trials = parse_count("--trials", *f.trials);
    if (f.seed)
        rc.seed = parse_count("--seed", *f.seed);
    return rc;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for three-party single-qubit operation sharing"};
    app.require_subcommand(1);
    Flags flags;
    auto *run = app.add_subcommand("run", "Monte Carlo estimate of the success rate");
    auto *enumerate = app.add_subcommand("enumerate", "exact branch enumeration");
    auto *compare = app.add_subcommand("compare", "resource and efficiency comparison of S1 and S2");
    for (auto *cmd : {run, enumerate, compare})
        add_flags(*cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return qos::cli::kExitConfig;
    }

    qos::RunConfig rc;
    try {
        rc = resolve(flags);
    } catch (const qos::QosError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return qos::cli::kExitConfig;
    }

    const qos::cli::OutputOptions opts{flags.json, !flags.no_timestamp};
    qos::cli::CommandOutput out;
    if (run->parsed())
        out = qos::cli::cmd_run(rc, opts);
    else if (enumerate->parsed())
        out = qos::cli::cmd_enumerate(rc, opts);
    else
        out = qos::cli::cmd_compare(rc, opts);

    if (!out.diagnostic.empty())
        std::cerr << out.diagnostic << '\n';
    std::cout << out.report;
    if (flags.out_path && out.exit_code == qos::cli::kExitOk) {
        std::ofstream file(*flags.out_path);
        if (!file) {
            std::cerr << "config error: --out: cannot write '" << *flags.out_path << "'\n";
            return qos::cli::kExitConfig;
        }
        file << out.report;
    }
    return out.exit_code;
}
