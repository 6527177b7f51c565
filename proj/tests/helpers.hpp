#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qos/qos.hpp"

namespace testing {

inline oracle::Vec to_vec(const qos::PureState &s) {
    return {s.amplitudes().begin(), s.amplitudes().end()};
}

template <std::size_t D> oracle::Mat to_mat(const qos::Unitary<D> &u) {
    oracle::Mat m(D, std::vector<oracle::C>(D));
    for (std::size_t r = 0; r < D; ++r)
        for (std::size_t c = 0; c < D; ++c)
            m[r][c] = u(r, c);
    return m;
}

inline qos::Gate1 to_gate1(const oracle::Mat &m) {
    return qos::Gate1({m[0][0], m[0][1], m[1][0], m[1][1]});
}

inline qos::Gate2 to_gate2(const oracle::Mat &m) {
    qos::Gate2::Matrix e{};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            e[r * 4 + c] = m[r][c];
    return qos::Gate2(e);
}

inline double max_abs_diff(const oracle::Vec &a, const oracle::Vec &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline std::vector<qos::QubitId> ids(std::initializer_list<const char *> names) {
    std::vector<qos::QubitId> out;
    for (const char *n : names)
        out.emplace_back(n);
    return out;
}

inline qos::SchemeConfig random_config(std::mt19937_64 &rng, qos::Scheme scheme,
                                       qos::Party recoverer) {
    qos::SchemeConfig cfg;
    cfg.scheme = scheme;
    std::tie(cfg.a, cfg.b) = oracle::random_unit_pair(rng);
    const auto ang = oracle::random_angles(rng);
    cfg.omega = qos::EulerAngles{ang.theta, ang.phi, ang.lambda};
    if (scheme == qos::Scheme::S2) {
        const auto [al, be] = oracle::random_unit_pair(rng);
        cfg.wspec = qos::WAsymmetricSpec::make(al, be);
    }
    cfg.recoverer = recoverer;
    return cfg;
}

/// Omega (a, b) computed with the oracle's matrices.
inline std::pair<oracle::C, oracle::C> operated(const qos::SchemeConfig &cfg) {
    const auto &ang = std::get<qos::EulerAngles>(cfg.omega);
    const auto v = oracle::matvec(oracle::u3(ang.theta, ang.phi, ang.lambda), {cfg.a, cfg.b});
    return {v[0], v[1]};
}

} // namespace testing

#define REQUIRE_THROWS_KIND(expr, k)                                                               \
    do {                                                                                           \
        try {                                                                                      \
            (void)(expr);                                                                          \
            FAIL("expected " << qos::to_string(k));                                                \
        } catch (const qos::QosError &e) {                                                         \
            REQUIRE(e.kind() == (k));                                                              \
        }                                                                                          \
    } while (false)
