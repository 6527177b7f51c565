#pragma once

// Channel states and gates shared by both sharing schemes.

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <string_view>
#include <variant>

#include "qos/qstate.hpp"

namespace qos {

enum class Pauli : std::uint8_t { I, X, Y, Z };

inline constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

constexpr std::string_view to_string(Pauli p) noexcept {
    switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
    }
    return "?";
}

/// Y is the real operator |0><1| - |1><0| (no factor i), so Y*Y = -I and
/// corrections built from it hold up to a global phase.
inline Gate1 pauli(Pauli p) {
    switch (p) {
    case Pauli::I: return Gate1::identity();
    case Pauli::X: return Gate1({0.0, 1.0, 1.0, 0.0});
    case Pauli::Y: return Gate1({0.0, 1.0, -1.0, 0.0});
    case Pauli::Z: return Gate1({1.0, 0.0, 0.0, -1.0});
    }
    return Gate1::identity();
}

struct EulerAngles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;

    friend bool operator==(const EulerAngles &, const EulerAngles &) = default;
};

using OmegaSpec = std::variant<EulerAngles, Gate1>;

/// General single-qubit gate
///   [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
/// or the explicit matrix carried by the spec.
inline Gate1 omega(const OmegaSpec &spec) {
    if (const auto *m = std::get_if<Gate1>(&spec))
        return *m;
    const auto &[theta, phi, lambda] = std::get<EulerAngles>(spec);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return Gate1({Amplitude{c, 0.0}, -std::polar(s, lambda), std::polar(s, phi),
                  std::polar(c, phi + lambda)});
}

inline const EulerAngles kHadamardAngles{std::numbers::pi / 2.0, 0.0, std::numbers::pi};

/// Coefficients of the asymmetric W channel; |alpha|^2 + |beta|^2 = 1.
class WAsymmetricSpec {
  public:
    static WAsymmetricSpec make(Amplitude alpha, Amplitude beta) {
        if (!is_finite(alpha) || !is_finite(beta))
            fail(ErrorKind::NonFinite, "W coefficients must be finite");
        const double norm2 = std::norm(alpha) + std::norm(beta);
        if (std::abs(norm2 - 1.0) > kStateTolerance)
            fail(ErrorKind::NormViolation,
                 "|alpha|^2 + |beta|^2 = " + std::to_string(norm2) + ", expected 1");
        return WAsymmetricSpec(alpha, beta);
    }

    Amplitude alpha() const noexcept { return alpha_; }
    Amplitude beta() const noexcept { return beta_; }

    friend bool operator==(const WAsymmetricSpec &, const WAsymmetricSpec &) = default;

  private:
    WAsymmetricSpec(Amplitude a, Amplitude b) : alpha_(a), beta_(b) {}
    Amplitude alpha_;
    Amplitude beta_;
};

/// a|0> + b|1>. Inputs off the unit circle by more than 1e-9 are
/// renormalized with a warning on std::clog.
inline PureState target_state(Amplitude a, Amplitude b, QubitId label) {
    const double norm2 = std::norm(a) + std::norm(b);
    if (std::isfinite(norm2) && norm2 > 0.0 && std::abs(norm2 - 1.0) > 1e-9)
        std::clog << "warning: target amplitudes have |a|^2+|b|^2 = " << norm2
                  << "; renormalizing\n";
    return make_state({std::move(label)}, {a, b});
}

inline PureState bell_state(BellOutcome kind, QubitId q1, QubitId q2) {
    const auto v = bell_vector(kind);
    return make_state({std::move(q1), std::move(q2)}, {v.begin(), v.end()});
}

/// (|001> + |010> + |100>)/√3 over (g, h, j).
inline PureState w_symmetric(QubitId g, QubitId h, QubitId j) {
    const double r = 1.0 / std::sqrt(3.0);
    return make_state({std::move(g), std::move(h), std::move(j)},
                      {0.0, r, r, 0.0, r, 0.0, 0.0, 0.0});
}

/// (alpha|001> + beta|010> + |100>)/√2 over (g, h, j).
inline PureState w_asymmetric(const WAsymmetricSpec &spec, QubitId g, QubitId h, QubitId j) {
    const double r = 1.0 / std::sqrt(2.0);
    return make_state({std::move(g), std::move(h), std::move(j)},
                      {0.0, spec.alpha() * r, spec.beta() * r, 0.0, r, 0.0, 0.0, 0.0});
}

/// Collective gate for recovery on the left qubit of the pair: maps
/// alpha|01> + beta|10> to |10>, fixes |00> and |11>. Rows in basis order
///   [[1,0,0,0],[0,beta,-alpha,0],[0,conj(alpha),conj(beta),0],[0,0,0,1]].
/// For real coefficients this is the printed matrix with the |01> row negated.
inline Gate2 collective_u(const WAsymmetricSpec &spec) {
    const Amplitude a = spec.alpha();
    const Amplitude b = spec.beta();
    return Gate2({1.0, 0.0, 0.0, 0.0,
                  0.0, b, -a, 0.0,
                  0.0, std::conj(a), std::conj(b), 0.0,
                  0.0, 0.0, 0.0, 1.0});
}

/// Mirror of collective_u for recovery on the right qubit: maps
/// alpha|01> + beta|10> to |01>, fixes |00> and |11>.
inline Gate2 collective_u_jack(const WAsymmetricSpec &spec) {
    const Amplitude a = spec.alpha();
    const Amplitude b = spec.beta();
    return Gate2({1.0, 0.0, 0.0, 0.0,
                  0.0, std::conj(a), std::conj(b), 0.0,
                  0.0, b, -a, 0.0,
                  0.0, 0.0, 0.0, 1.0});
}

/// The collective gate exactly as printed, [[1,0,0,0],[0,-b,a,0],[0,a,b,0],[0,0,0,1]].
/// Only unitary for real coefficients.
inline Gate2 collective_u_printed(double alpha, double beta) {
    return Gate2({1.0, 0.0, 0.0, 0.0,
                  0.0, -beta, alpha, 0.0,
                  0.0, alpha, beta, 0.0,
                  0.0, 0.0, 0.0, 1.0});
}

} // namespace qos
