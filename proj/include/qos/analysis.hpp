#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "qos/schemes.hpp"

namespace qos {

// ---------------------------------------------------------------------------
// Exact enumeration

struct LeafBranch {
    std::vector<TraceStep> path;
    double probability;
    bool success;
    std::optional<double> fidelity;
    int cbits;
    OperationCounts operations;
};

struct BranchReport {
    std::vector<LeafBranch> branches;
    double p_success = 0.0;
    double fidelity_given_success = 0.0;
};

namespace detail {

/// Replays a fixed prefix of branch choices, takes branch 0 past it, and
/// records the fan-out at every measurement so the caller can advance.
class PathSelector {
  public:
    explicit PathSelector(std::vector<std::size_t> prefix) : choices_(std::move(prefix)) {}

    std::size_t select(std::span<const double> p) {
        if (depth_ == choices_.size())
            choices_.push_back(0);
        fanout_.push_back(p.size());
        return choices_[depth_++];
    }

    const std::vector<std::size_t> &choices() const { return choices_; }
    const std::vector<std::size_t> &fanout() const { return fanout_; }

  private:
    std::vector<std::size_t> choices_;
    std::vector<std::size_t> fanout_;
    std::size_t depth_ = 0;
};

} // namespace detail

/// Depth-first expansion of every measurement in the scheme. Leaves are
/// visited in outcome order; zero-probability branches never appear.
inline BranchReport enumerate_scheme(const SchemeConfig &cfg) {
    BranchReport report;
    std::vector<std::size_t> prefix;
    double total = 0.0;
    double weighted_fidelity = 0.0;
    while (true) {
        detail::PathSelector selector(prefix);
        SchemeResult r = execute(cfg, selector);
        double p = 1.0;
        for (const auto &step : r.branch_trace)
            p *= step.probability;
        total += p;
        if (r.success) {
            report.p_success += p;
            weighted_fidelity += p * r.fidelity.value_or(0.0);
        }
        report.branches.push_back(LeafBranch{r.branch_trace, p, r.success, r.fidelity, r.cbits,
                                             operation_counts(r.final_system)});

        // Advance the odometer on the deepest measurement with choices left.
        std::vector<std::size_t> next = selector.choices();
        const auto &fan = selector.fanout();
        next.resize(fan.size());
        while (!next.empty() && next.back() + 1 >= fan[next.size() - 1])
            next.pop_back();
        if (next.empty())
            break;
        ++next.back();
        prefix = std::move(next);
    }
    if (std::abs(total - 1.0) > kStateTolerance)
        fail(ErrorKind::InvariantBreach,
             "branch probabilities sum to " + format_probability(total));
    report.fidelity_given_success =
        report.p_success > 0.0 ? weighted_fidelity / report.p_success : 0.0;
    return report;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct SchemeStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double mean_fidelity_on_success = 0.0;
    std::uint64_t seed = 0;

    double success_rate() const {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
};

/// Three uniform draws in [0, 1) determined by (seed, trial) alone.
inline Draws trial_draws(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 rng(seq);
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Draws d;
    d.teleport_bell = uniform();
    d.sharing_bell = uniform();
    d.sharer_z = uniform();
    return d;
}

inline SchemeResult sample_trial(const SchemeConfig &cfg, std::uint64_t seed, std::uint64_t trial) {
    return run_scheme(cfg, trial_draws(seed, trial));
}

/// Trials are split into fixed blocks merged in block order, so the result
/// is independent of the number of worker threads.
inline SchemeStats monte_carlo(const SchemeConfig &cfg, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads = 0) {
    if (trials < 1)
        fail(ErrorKind::InvalidArgument, "monte_carlo needs at least one trial");
    validate(cfg);

    struct Block {
        std::uint64_t successes = 0;
        double fidelity_sum = 0.0;
    };
    const std::uint64_t block_count = std::min<std::uint64_t>(trials, 64);
    std::vector<Block> blocks(block_count);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (std::uint64_t b = next++; b < block_count; b = next++) {
            const std::uint64_t begin = b * trials / block_count;
            const std::uint64_t end = (b + 1) * trials / block_count;
            try {
                Block acc;
                for (std::uint64_t t = begin; t < end; ++t) {
                    const SchemeResult r = sample_trial(cfg, seed, t);
                    if (r.success) {
                        ++acc.successes;
                        acc.fidelity_sum += r.fidelity.value_or(0.0);
                    }
                }
                blocks[b] = acc;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };

    if (threads == 0)
        threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, block_count));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);

    SchemeStats stats;
    stats.trials = trials;
    stats.seed = seed;
    double fidelity_sum = 0.0;
    for (const auto &b : blocks) {
        stats.successes += b.successes;
        fidelity_sum += b.fidelity_sum;
    }
    stats.mean_fidelity_on_success =
        stats.successes ? fidelity_sum / static_cast<double>(stats.successes) : 0.0;
    if (stats.successes > stats.trials)
        fail(ErrorKind::InvariantBreach, "more successes than trials");
    return stats;
}

// ---------------------------------------------------------------------------
// Efficiency

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d) {
        if (d == 0)
            fail(ErrorKind::DivisionByZero, "rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const std::int64_t g = std::gcd(n, d);
        return g > 1 ? Rational{n / g, d / g} : Rational{n, d};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    friend Rational operator/(Rational r, std::int64_t k) { return make(r.num, r.den * k); }
    friend bool operator==(const Rational &, const Rational &) = default;
};

/// Smallest-denominator fraction within `tol` of x, if one exists below
/// max_den.
inline std::optional<Rational> recover_rational(double x, std::int64_t max_den = 1000,
                                                double tol = kStateTolerance) {
    if (!std::isfinite(x))
        return std::nullopt;
    for (std::int64_t d = 1; d <= max_den; ++d) {
        const double n = std::round(x * static_cast<double>(d));
        if (std::abs(x - n / static_cast<double>(d)) <= tol)
            return Rational::make(static_cast<std::int64_t>(n), d);
    }
    return std::nullopt;
}

struct EfficiencyRecord {
    double p;
    int q; // channel qubits
    int t; // classical bits
    double eta;
    std::optional<Rational> p_exact;
    std::optional<Rational> eta_exact;
};

/// eta = p / (q + t).
inline EfficiencyRecord efficiency(double p, int q, int t) {
    if (q < 0 || t < 0)
        fail(ErrorKind::InvalidArgument, "resource counts must be non-negative");
    if (q + t == 0)
        fail(ErrorKind::DivisionByZero, "q + t = 0");
    EfficiencyRecord rec{p, q, t, p / static_cast<double>(q + t), recover_rational(p), std::nullopt};
    if (rec.p_exact)
        rec.eta_exact = *rec.p_exact / (q + t);
    return rec;
}

// ---------------------------------------------------------------------------
// Scheme comparison

/// Values printed in the comparison table of the two schemes.
struct PublishedRow {
    Scheme scheme;
    std::string_view quantum_resources;
    int bell_measurements;
    int single_measurements;
    std::string_view extra_operation; // single-qubit or collective unitary
    int cbits;
    Rational p;
    Rational eta;
};

inline constexpr std::array<PublishedRow, 2> kPublishedComparison{{
    {Scheme::S1, "BS,W_s", 2, 2, "SQUO", 5, Rational{2, 3}, Rational{1, 15}},
    {Scheme::S2, "BS,W_a", 2, 2, "NCUO", 4, Rational{1, 1}, Rational{1, 9}},
}};

inline constexpr int kChannelQubits = 5; // one Bell pair plus one W triple

struct ComparisonRow {
    Scheme scheme;
    std::string quantum_resources;
    int channel_qubits;
    OperationCounts operations; // along a successful path
    int cbits_success;
    std::optional<int> cbits_failure;
    std::size_t leaves;
    double p_success;
    double fidelity_given_success;
    EfficiencyRecord efficiency;
    std::vector<std::string> divergences;
};

struct ComparisonReport {
    std::array<ComparisonRow, 2> rows;
    CorrectionAudit teleport_audit;
};

namespace detail {

inline ComparisonRow compare_row(const SchemeConfig &cfg) {
    const BranchReport br = enumerate_scheme(cfg);
    const auto success = std::find_if(br.branches.begin(), br.branches.end(),
                                      [](const LeafBranch &l) { return l.success; });
    const auto failure = std::find_if(br.branches.begin(), br.branches.end(),
                                      [](const LeafBranch &l) { return !l.success; });
    if (success == br.branches.end())
        fail(ErrorKind::InvariantBreach, "scheme has no successful branch");

    const PublishedRow &pub = kPublishedComparison[cfg.scheme == Scheme::S1 ? 0 : 1];
    ComparisonRow row{cfg.scheme,
                      std::string(pub.quantum_resources),
                      kChannelQubits,
                      success->operations,
                      success->cbits,
                      failure == br.branches.end() ? std::nullopt
                                                   : std::optional<int>(failure->cbits),
                      br.branches.size(),
                      br.p_success,
                      br.fidelity_given_success,
                      efficiency(br.p_success, kChannelQubits, success->cbits),
                      {}};

    auto flag = [&row](const std::string &what, const std::string &got, const std::string &want) {
        if (got != want)
            row.divergences.push_back(what + ": simulated " + got + ", published " + want);
    };
    flag("Bell measurements", std::to_string(row.operations.bell_measurements),
         std::to_string(pub.bell_measurements));
    flag("single-qubit measurements", std::to_string(row.operations.single_measurements),
         std::to_string(pub.single_measurements));
    const bool collective = row.operations.collective_unitaries > 0;
    flag("extra operation", collective ? "NCUO" : "SQUO", std::string(pub.extra_operation));
    flag("cbits", std::to_string(row.cbits_success), std::to_string(pub.cbits));
    flag("P", row.efficiency.p_exact ? row.efficiency.p_exact->str() : format_probability(row.p_success),
         pub.p.str());
    flag("eta", row.efficiency.eta_exact ? row.efficiency.eta_exact->str()
                                         : format_probability(row.efficiency.eta),
         pub.eta.str());
    return row;
}

} // namespace detail

/// Both configs must describe the same target and operation.
inline ComparisonReport compare_schemes(const SchemeConfig &s1, const SchemeConfig &s2) {
    if (s1.scheme != Scheme::S1 || s2.scheme != Scheme::S2)
        fail(ErrorKind::InvalidArgument, "compare_schemes expects (S1 config, S2 config)");
    if (s1.a != s2.a || s1.b != s2.b || omega(s1.omega) != omega(s2.omega))
        fail(ErrorKind::InvalidArgument, "configs disagree on target state or operation");
    return ComparisonReport{{detail::compare_row(s1), detail::compare_row(s2)},
                            teleport_correction_audit()};
}

} // namespace qos
