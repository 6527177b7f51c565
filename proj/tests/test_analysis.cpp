#include "helpers.hpp"

using namespace qos;
using Catch::Approx;

namespace {

const double kR2 = 1.0 / std::sqrt(2.0);

SchemeConfig default_cfg(Scheme s, Party rec = Party::Holly) {
    SchemeConfig cfg;
    cfg.scheme = s;
    cfg.a = kR2;
    cfg.b = kR2;
    cfg.omega = kHadamardAngles;
    cfg.recoverer = rec;
    if (s == Scheme::S2)
        cfg.wspec = WAsymmetricSpec::make(0.6, 0.8);
    return cfg;
}

// Stage-2 Bell probability summed over stage-1 outcomes.
double stage2_probability(const BranchReport &r, BellOutcome k) {
    std::map<std::string, double> seen; // prefix up to stage 2 -> probability
    for (const auto &leaf : r.branches)
        if (bell_from_bits(leaf.path[1].outcome) == k)
            seen[leaf.path[0].label() + leaf.path[1].label()] =
                leaf.path[0].probability * leaf.path[1].probability;
    double sum = 0.0;
    for (const auto &[key, p] : seen)
        sum += p;
    return sum;
}

} // namespace

TEST_CASE("enumerate S1 default", "[analysis]") {
    const auto r = enumerate_scheme(default_cfg(Scheme::S1));
    CHECK(r.p_success == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(r.fidelity_given_success == Approx(1.0).margin(1e-10));
    // a'=1, b'=0: the phi branches leave j in |0> with certainty, so they
    // contribute one leaf each; psi branches contribute two.
    CHECK(r.branches.size() == 4 * (2 + 2 + 1 + 1));
    double total = 0.0;
    for (const auto &leaf : r.branches)
        total += leaf.probability;
    CHECK(total == Approx(1.0).margin(1e-12));
}

TEST_CASE("enumerate S2 default", "[analysis]") {
    const auto r = enumerate_scheme(default_cfg(Scheme::S2));
    CHECK(r.branches.size() == 16);
    CHECK(r.p_success == Approx(1.0).margin(1e-12));
    for (const auto &leaf : r.branches) {
        CHECK(leaf.success);
        CHECK(leaf.probability == Approx(1.0 / 16).margin(1e-14));
        CHECK(leaf.cbits == 4);
    }
}

TEST_CASE("enumerate with Hadamard on |0>", "[analysis]") {
    auto cfg = default_cfg(Scheme::S1);
    cfg.a = 1.0;
    cfg.b = 0.0;
    const auto r = enumerate_scheme(cfg);
    CHECK(stage2_probability(r, BellOutcome::PsiPlus) == Approx(0.25).margin(1e-12));
    CHECK(stage2_probability(r, BellOutcome::PhiMinus) == Approx(0.25).margin(1e-12));
    // projection oracle: W_s and g1 = H|0>
    const double r3 = 1.0 / std::sqrt(3.0);
    const auto gamma = oracle::kron({kR2, kR2}, {0, r3, r3, 0, r3, 0, 0, 0});
    CHECK(oracle::norm2(oracle::contract_pair(gamma, 0, 1, 4, oracle::bell(0))) ==
          Approx(0.25).margin(1e-14));
}

TEST_CASE("enumerate with identity on |0> follows the branch law", "[analysis]") {
    auto cfg = default_cfg(Scheme::S1);
    cfg.a = 1.0;
    cfg.b = 0.0;
    cfg.omega = EulerAngles{};
    const auto r = enumerate_scheme(cfg);
    CHECK(stage2_probability(r, BellOutcome::PsiPlus) == Approx(1.0 / 3).margin(1e-12));
    CHECK(stage2_probability(r, BellOutcome::PhiPlus) == Approx(1.0 / 6).margin(1e-12));
    CHECK(r.p_success == Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("leaf probabilities are products of step probabilities", "[analysis][property]") {
    std::mt19937_64 rng(401);
    for (int i = 0; i < 20; ++i) {
        const auto cfg = testing::random_config(rng, i % 2 ? Scheme::S2 : Scheme::S1,
                                                i % 4 < 2 ? Party::Holly : Party::Jack);
        for (const auto &leaf : enumerate_scheme(cfg).branches) {
            double p = 1.0;
            for (const auto &s : leaf.path)
                p *= s.probability;
            CHECK(leaf.probability == p);
            CHECK(leaf.success == (cfg.scheme == Scheme::S2 || leaf.path[2].outcome[0] == 0));
        }
    }
}

TEST_CASE("S1 success probability is input independent", "[analysis][property]") {
    std::mt19937_64 rng(403);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = testing::random_config(rng, Scheme::S1, i % 2 ? Party::Jack : Party::Holly);
        const auto r = enumerate_scheme(cfg);
        CHECK(r.p_success == Approx(2.0 / 3.0).margin(1e-12));
        CHECK(r.fidelity_given_success >= 1 - 1e-10);
        const auto [ap, bp] = testing::operated(cfg);
        CHECK(stage2_probability(r, BellOutcome::PsiMinus) ==
              Approx((1 + std::norm(ap)) / 6).margin(1e-12));
        CHECK(stage2_probability(r, BellOutcome::PhiMinus) ==
              Approx((1 + std::norm(bp)) / 6).margin(1e-12));
        // each stage-2 outcome contributes 1/6 of successes
        std::array<double, 4> success_by{};
        for (const auto &leaf : r.branches)
            if (leaf.success)
                success_by[static_cast<std::size_t>(bell_from_bits(leaf.path[1].outcome))] +=
                    leaf.probability;
        for (double p : success_by)
            CHECK(p == Approx(1.0 / 6).margin(1e-12));
    }
}

TEST_CASE("Monte Carlo examples", "[analysis]") {
    const auto s2 = monte_carlo(default_cfg(Scheme::S2), 1000, 7);
    CHECK(s2.successes == 1000);
    CHECK(s2.mean_fidelity_on_success == Approx(1.0).margin(1e-10));

    const std::uint64_t n = 100000;
    const auto s1 = monte_carlo(default_cfg(Scheme::S1), n, 7);
    const double sigma = std::sqrt((2.0 / 3) * (1.0 / 3) / n);
    CHECK(std::abs(s1.success_rate() - 2.0 / 3) < 3 * sigma);
    CHECK(s1.seed == 7);
    CHECK(s1.trials == n);
}

TEST_CASE("Monte Carlo is deterministic and thread-count independent", "[analysis]") {
    const auto cfg = default_cfg(Scheme::S1, Party::Jack);
    const auto a = monte_carlo(cfg, 5000, 99, 1);
    const auto b = monte_carlo(cfg, 5000, 99, 7);
    CHECK(a.successes == b.successes);
    CHECK(a.mean_fidelity_on_success == b.mean_fidelity_on_success);

    const auto t1 = sample_trial(cfg, 42, 0);
    const auto t2 = sample_trial(cfg, 42, 0);
    CHECK(t1.success == t2.success);
    CHECK(t1.branch_trace == t2.branch_trace);
    CHECK(t1.final_system.state() == t2.final_system.state());
    CHECK(serialize_transcript(t1.final_system) == serialize_transcript(t2.final_system));

    CHECK(monte_carlo(cfg, 1, 5).successes == (sample_trial(cfg, 5, 0).success ? 1U : 0U));
    REQUIRE_THROWS_KIND(monte_carlo(cfg, 0, 5), ErrorKind::InvalidArgument);
}

TEST_CASE("trial draws come from the documented stream", "[analysis]") {
    std::seed_seq seq{42U, 0U, 3U, 0U};
    std::mt19937_64 rng(seq);
    const double first = static_cast<double>(rng() >> 11) / 9007199254740992.0;
    CHECK(trial_draws(42, 3).teleport_bell == first);
    const auto d = trial_draws(42, 3);
    CHECK(d.sharing_bell != d.teleport_bell);
    CHECK(trial_draws(43, 3).teleport_bell != first);
}

TEST_CASE("efficiency examples", "[analysis]") {
    const auto e1 = efficiency(2.0 / 3.0, 5, 5);
    CHECK(e1.eta_exact == Rational::make(1, 15));
    CHECK(e1.eta == Approx(1.0 / 15).margin(1e-15));
    const auto e2 = efficiency(1.0, 5, 4);
    CHECK(e2.eta_exact == Rational::make(1, 9));
    CHECK(efficiency(0.0, 5, 4).eta == 0.0);
    CHECK(efficiency(0.0, 3, 1).eta_exact == Rational::make(0, 1));
    REQUIRE_THROWS_KIND(efficiency(1.0, 0, 0), ErrorKind::DivisionByZero);
    REQUIRE_THROWS_KIND(efficiency(1.0, -1, 3), ErrorKind::InvalidArgument);
    CHECK(Rational::make(2, -6).str() == "-1/3");
    CHECK(recover_rational(0.6666666666666666) == Rational::make(2, 3));
    CHECK_FALSE(recover_rational(std::numbers::pi));
}

TEST_CASE("compare_schemes reproduces the comparison table", "[analysis]") {
    const auto rep = compare_schemes(default_cfg(Scheme::S1), default_cfg(Scheme::S2));
    const auto &s1 = rep.rows[0];
    const auto &s2 = rep.rows[1];
    CHECK(s1.cbits_success == 5);
    CHECK(s1.cbits_failure == 4);
    CHECK(s2.cbits_success == 4);
    CHECK_FALSE(s2.cbits_failure);
    CHECK(s1.efficiency.p_exact->str() == "2/3");
    CHECK(s2.efficiency.p_exact->str() == "1");
    CHECK(s1.efficiency.eta_exact->str() == "1/15");
    CHECK(s2.efficiency.eta_exact->str() == "1/9");
    CHECK(s1.channel_qubits == 5);
    CHECK(s1.operations == OperationCounts{2, 1, 3, 0});
    CHECK(s2.operations == OperationCounts{2, 0, 3, 1});
    // only the single-measurement count disagrees with the published row
    REQUIRE(s1.divergences.size() == 1);
    REQUIRE(s2.divergences.size() == 1);
    CHECK(s1.divergences[0].find("single-qubit measurements") != std::string::npos);
    CHECK(s2.divergences[0].find("simulated 0, published 2") != std::string::npos);
    CHECK(rep.teleport_audit.diverges);

    auto other = default_cfg(Scheme::S2);
    other.a = 1.0;
    other.b = 0.0;
    REQUIRE_THROWS_KIND(compare_schemes(default_cfg(Scheme::S1), other), ErrorKind::InvalidArgument);
}

TEST_CASE("recoverer symmetry", "[analysis][property]") {
    std::mt19937_64 rng(405);
    for (int i = 0; i < 20; ++i) {
        for (Scheme s : {Scheme::S1, Scheme::S2}) {
            auto holly = testing::random_config(rng, s, Party::Holly);
            auto jack = holly;
            jack.recoverer = Party::Jack;
            const auto rh = enumerate_scheme(holly);
            const auto rj = enumerate_scheme(jack);
            CHECK(rh.p_success == Approx(rj.p_success).margin(1e-12));
            CHECK(rh.fidelity_given_success == Approx(rj.fidelity_given_success).margin(1e-12));
            REQUIRE(rh.branches.size() == rj.branches.size());
            std::vector<double> fh, fj;
            for (const auto &l : rh.branches)
                fh.push_back(l.fidelity.value_or(-1.0));
            for (const auto &l : rj.branches)
                fj.push_back(l.fidelity.value_or(-1.0));
            std::sort(fh.begin(), fh.end());
            std::sort(fj.begin(), fj.end());
            for (std::size_t k = 0; k < fh.size(); ++k)
                CHECK(fh[k] == Approx(fj[k]).margin(1e-12));
        }
        auto s1 = testing::random_config(rng, Scheme::S1, Party::Jack);
        auto s2 = s1;
        s2.scheme = Scheme::S2;
        s2.wspec = WAsymmetricSpec::make(0.6, 0.8);
        const auto rep = compare_schemes(s1, s2);
        CHECK(rep.rows[0].efficiency.eta_exact == Rational::make(1, 15));
        CHECK(rep.rows[1].efficiency.eta_exact == Rational::make(1, 9));
    }
}
