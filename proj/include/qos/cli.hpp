#pragma once

// Command implementations behind the qos-sim executable. Each returns the
// report text and an exit code: 0 ok, 2 config error, 3 invariant breach.

#include <chrono>
#include <ctime>
#include <sstream>
#include <string>

#include "qos/report.hpp"

namespace qos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

struct OutputOptions {
    bool json = false;
    bool timestamp = true;
};

struct CommandOutput {
    int exit_code = kExitOk;
    std::string report;     // standard output
    std::string diagnostic; // standard error
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

inline Json header(const std::string &command, const RunConfig &rc, const OutputOptions &opts) {
    Json j;
    j["command"] = command;
    if (opts.timestamp)
        j["generated"] = utc_timestamp();
    j["config"] = to_json(rc);
    return j;
}

inline void text_header(std::ostream &os, const std::string &command, const RunConfig &rc,
                        const OutputOptions &opts) {
    os << "# qos-sim " << command << '\n';
    if (opts.timestamp)
        os << "generated = " << utc_timestamp() << '\n';
    os << '\n';
    write_config_section(os, rc);
    os << '\n';
}

template <class Body> CommandOutput guarded(Body &&body) {
    CommandOutput out;
    try {
        out.report = body();
    } catch (const ConfigError &e) {
        out.exit_code = kExitConfig;
        out.diagnostic = std::string("config error: ") + e.what();
    } catch (const QosError &e) {
        out.exit_code = kExitInvariant;
        out.diagnostic = std::string("invariant breach: ") + e.what();
    } catch (const std::exception &e) {
        out.exit_code = kExitInvariant;
        out.diagnostic = std::string("internal error: ") + e.what();
    }
    return out;
}

inline void precheck(const RunConfig &rc) {
    check_run_config(rc);
    try {
        validate(to_scheme_config(rc));
    } catch (const ConfigError &) {
        throw;
    } catch (const QosError &e) {
        throw ConfigError("config", e.what());
    }
}

} // namespace detail

/// Monte Carlo run, reported next to the exact success probability.
inline CommandOutput cmd_run(const RunConfig &rc, const OutputOptions &opts) {
    return detail::guarded([&] {
        detail::precheck(rc);
        const SchemeConfig cfg = to_scheme_config(rc);
        const SchemeStats stats = monte_carlo(cfg, rc.trials, rc.seed);
        const BranchReport exact = enumerate_scheme(cfg);
        const double n = static_cast<double>(stats.trials);
        const double sigma = std::sqrt(exact.p_success * (1.0 - exact.p_success) / n);
        const double deviation = stats.success_rate() - exact.p_success;
        const bool within = std::abs(deviation) <= 3.0 * sigma;

        if (opts.json) {
            Json j = detail::header("run", rc, opts);
            j["result"] = to_json(stats);
            j["exact_p_success"] = round12(exact.p_success);
            j["exact_p_success_rational"] = rational_json(recover_rational(exact.p_success));
            j["binomial_sigma"] = round12(sigma);
            j["deviation"] = round12(deviation);
            j["within_3_sigma"] = within;
            return j.dump(2) + "\n";
        }
        std::ostringstream os;
        detail::text_header(os, "run", rc, opts);
        os << "[result]\n";
        os << "trials = " << stats.trials << '\n';
        os << "successes = " << stats.successes << '\n';
        os << "success_rate = " << format_probability(stats.success_rate()) << '\n';
        os << "mean_fidelity_on_success = " << format_probability(stats.mean_fidelity_on_success)
           << '\n';
        os << "exact_p_success = " << format_probability(exact.p_success) << " ("
           << exact_or_decimal(recover_rational(exact.p_success), exact.p_success) << ")\n";
        os << "binomial_sigma = " << format_probability(sigma) << '\n';
        os << "deviation = " << format_probability(deviation) << '\n';
        os << "within_3_sigma = " << yes_no(within) << '\n';
        return os.str();
    });
}

inline CommandOutput cmd_enumerate(const RunConfig &rc, const OutputOptions &opts) {
    return detail::guarded([&] {
        detail::precheck(rc);
        const BranchReport report = enumerate_scheme(to_scheme_config(rc));
        if (opts.json) {
            Json j = detail::header("enumerate", rc, opts);
            j["report"] = to_json(report);
            return j.dump(2) + "\n";
        }
        std::ostringstream os;
        detail::text_header(os, "enumerate", rc, opts);
        write_branch_report(os, report);
        return os.str();
    });
}

/// Runs S1 and S2 on the same target, operation and recoverer.
inline CommandOutput cmd_compare(const RunConfig &rc, const OutputOptions &opts) {
    return detail::guarded([&] {
        detail::precheck(rc);
        const ComparisonReport report =
            compare_schemes(to_scheme_config(rc, Scheme::S1), to_scheme_config(rc, Scheme::S2));
        if (opts.json) {
            Json j = detail::header("compare", rc, opts);
            j["report"] = to_json(report);
            return j.dump(2) + "\n";
        }
        std::ostringstream os;
        detail::text_header(os, "compare", rc, opts);
        write_comparison(os, report);
        return os.str();
    });
}

} // namespace qos::cli
