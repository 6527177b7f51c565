#pragma once

// Dense statevector over a labeled qubit register.
//
// Index convention: in an n-qubit register the bit for qubit k (position k
// in the label list) is bit (n - 1 - k) of the amplitude index, i.e. qubit 0
// is the most significant bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qos/error.hpp"

namespace qos {

using Amplitude = std::complex<double>;
using Bit = std::uint8_t;

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-10;
// Branches below this probability are treated as exact zeros and dropped.
inline constexpr double kZeroBranchProbability = 1e-20;

inline bool is_finite(Amplitude z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

class QubitId {
  public:
    QubitId() = default;
    explicit QubitId(std::string label) : label_(std::move(label)) {}

    const std::string &label() const noexcept { return label_; }

    friend bool operator==(const QubitId &, const QubitId &) = default;
    friend auto operator<=>(const QubitId &, const QubitId &) = default;

  private:
    std::string label_;
};

namespace literals {
inline QubitId operator""_q(const char *s, std::size_t n) {
    return QubitId(std::string(s, n));
}
} // namespace literals

inline std::string join_labels(std::span<const QubitId> qubits,
                               std::string_view sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (i)
            out += sep;
        out += qubits[i].label();
    }
    return out;
}

/// Normalized amplitude vector over an ordered list of distinct labels.
///
/// Values are immutable; every operation below returns a fresh state. The
/// zero-qubit register (a single amplitude 1) only arises from measuring
/// out every qubit and cannot be built through make().
class PureState {
  public:
    /// Validates and stores a normalized copy.
    static PureState make(std::vector<QubitId> qubits,
                          std::vector<Amplitude> amps) {
        if (qubits.empty())
            fail(ErrorKind::DimensionMismatch, "register needs at least one qubit");
        return build(std::move(qubits), std::move(amps));
    }

    static PureState empty() { return PureState({}, {Amplitude{1.0, 0.0}}); }

    std::size_t num_qubits() const noexcept { return qubits_.size(); }
    std::size_t dimension() const noexcept { return amps_.size(); }
    const std::vector<QubitId> &qubits() const noexcept { return qubits_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    Amplitude amplitude(std::size_t index) const { return amps_.at(index); }

    bool contains(const QubitId &q) const noexcept {
        return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
    }

    std::size_t position(const QubitId &q) const {
        const auto it = std::find(qubits_.begin(), qubits_.end(), q);
        if (it == qubits_.end())
            fail(ErrorKind::UnknownQubit, "qubit '" + q.label() + "' not in register");
        return static_cast<std::size_t>(it - qubits_.begin());
    }

    double norm_squared() const noexcept {
        double s = 0.0;
        for (const auto &a : amps_)
            s += std::norm(a);
        return s;
    }

    /// Bit-for-bit equality of labels and amplitudes.
    friend bool operator==(const PureState &, const PureState &) = default;

  private:
    PureState(std::vector<QubitId> qubits, std::vector<Amplitude> amps)
        : qubits_(std::move(qubits)), amps_(std::move(amps)) {}

    static PureState build(std::vector<QubitId> qubits, std::vector<Amplitude> amps) {
        if (qubits.size() >= 8 * sizeof(std::size_t) - 1 ||
            amps.size() != (std::size_t{1} << qubits.size()))
            fail(ErrorKind::DimensionMismatch,
                 "expected 2^" + std::to_string(qubits.size()) + " amplitudes, got " +
                     std::to_string(amps.size()));
        for (std::size_t i = 0; i < qubits.size(); ++i)
            for (std::size_t j = i + 1; j < qubits.size(); ++j)
                if (qubits[i] == qubits[j])
                    fail(ErrorKind::DuplicateLabel, "label '" + qubits[i].label() + "' repeated");
        double norm2 = 0.0;
        for (const auto &a : amps) {
            if (!is_finite(a))
                fail(ErrorKind::NonFinite, "amplitude is NaN or infinite");
            norm2 += std::norm(a);
        }
        if (!(norm2 > 0.0))
            fail(ErrorKind::ZeroNorm, "state vector has zero norm");
        if (norm2 != 1.0) {
            const double scale = 1.0 / std::sqrt(norm2);
            for (auto &a : amps)
                a *= scale;
        }
        return PureState(std::move(qubits), std::move(amps));
    }

    friend PureState make_collapsed(std::vector<QubitId>, std::vector<Amplitude>);

    std::vector<QubitId> qubits_;
    std::vector<Amplitude> amps_;
};

inline PureState make_state(std::vector<QubitId> qubits, std::vector<Amplitude> amps) {
    return PureState::make(std::move(qubits), std::move(amps));
}

/// Post-measurement register; may be empty when every qubit was measured.
inline PureState make_collapsed(std::vector<QubitId> qubits, std::vector<Amplitude> amps) {
    if (qubits.empty()) {
        if (amps.size() != 1 || !(std::norm(amps[0]) > 0.0))
            fail(ErrorKind::ZeroNorm, "empty register with zero weight");
        return PureState::empty();
    }
    return PureState::build(std::move(qubits), std::move(amps));
}

// ---------------------------------------------------------------------------
// Unitaries

template <std::size_t Dim> class Unitary {
    static_assert(Dim == 2 || Dim == 4, "only 1- and 2-qubit gates");

  public:
    using Matrix = std::array<Amplitude, Dim * Dim>; // row-major

    static constexpr std::size_t dim = Dim;

    /// Rejects matrices whose U^dagger U differs from I by more than
    /// kUnitarityTolerance in any entry.
    explicit Unitary(const Matrix &entries) : m_(entries) {
        for (const auto &z : m_)
            if (!is_finite(z))
                fail(ErrorKind::NonFinite, "gate entry is NaN or infinite");
        const double err = unitarity_error(m_);
        if (err > kUnitarityTolerance)
            fail(ErrorKind::NotUnitary,
                 "max |U^dagger U - I| entry = " + std::to_string(err));
    }

    static Unitary identity() {
        Matrix m{};
        for (std::size_t i = 0; i < Dim; ++i)
            m[i * Dim + i] = 1.0;
        return Unitary(m);
    }

    Amplitude operator()(std::size_t row, std::size_t col) const {
        return m_[row * Dim + col];
    }
    const Matrix &entries() const noexcept { return m_; }

    Unitary adjoint() const {
        Matrix out{};
        for (std::size_t r = 0; r < Dim; ++r)
            for (std::size_t c = 0; c < Dim; ++c)
                out[c * Dim + r] = std::conj(m_[r * Dim + c]);
        return Unitary(out);
    }

    std::array<Amplitude, Dim> apply(const std::array<Amplitude, Dim> &v) const {
        std::array<Amplitude, Dim> out{};
        for (std::size_t r = 0; r < Dim; ++r)
            for (std::size_t c = 0; c < Dim; ++c)
                out[r] += m_[r * Dim + c] * v[c];
        return out;
    }

    friend Unitary operator*(const Unitary &lhs, const Unitary &rhs) {
        Matrix out{};
        for (std::size_t r = 0; r < Dim; ++r)
            for (std::size_t k = 0; k < Dim; ++k)
                for (std::size_t c = 0; c < Dim; ++c)
                    out[r * Dim + c] += lhs.m_[r * Dim + k] * rhs.m_[k * Dim + c];
        return Unitary(out);
    }

    friend bool operator==(const Unitary &, const Unitary &) = default;

    static double unitarity_error(const Matrix &m) {
        double worst = 0.0;
        for (std::size_t r = 0; r < Dim; ++r)
            for (std::size_t c = 0; c < Dim; ++c) {
                Amplitude s{};
                for (std::size_t k = 0; k < Dim; ++k)
                    s += std::conj(m[k * Dim + r]) * m[k * Dim + c];
                if (r == c)
                    s -= 1.0;
                worst = std::max(worst, std::abs(s));
            }
        return worst;
    }

  private:
    Matrix m_;
};

using Gate1 = Unitary<2>;
using Gate2 = Unitary<4>;

namespace detail {

inline std::size_t shift_of(std::size_t pos, std::size_t n) { return n - 1 - pos; }

/// Scatters the bits of `rest` (over the unmeasured positions, MSB first)
/// and of `sub` (over `measured`, first entry = MSB of sub) into a full index.
struct IndexMap {
    std::size_t n = 0;
    std::vector<std::size_t> measured; // positions, in measurement order
    std::vector<std::size_t> remaining; // positions, in register order

    IndexMap(std::size_t n_, std::vector<std::size_t> measured_) : n(n_), measured(std::move(measured_)) {
        for (std::size_t p = 0; p < n; ++p)
            if (std::find(measured.begin(), measured.end(), p) == measured.end())
                remaining.push_back(p);
    }

    std::size_t compose(std::size_t rest, std::size_t sub) const {
        std::size_t idx = 0;
        const std::size_t k = measured.size();
        for (std::size_t t = 0; t < k; ++t)
            if ((sub >> (k - 1 - t)) & 1U)
                idx |= std::size_t{1} << shift_of(measured[t], n);
        const std::size_t m = remaining.size();
        for (std::size_t t = 0; t < m; ++t)
            if ((rest >> (m - 1 - t)) & 1U)
                idx |= std::size_t{1} << shift_of(remaining[t], n);
        return idx;
    }
};

/// Contracts the measured qubits against `bra` (conjugated) and returns the
/// unnormalized remainder with its squared norm.
inline std::pair<std::vector<Amplitude>, double>
project(const PureState &s, const IndexMap &map, std::span<const Amplitude> bra) {
    const std::size_t rest_dim = std::size_t{1} << map.remaining.size();
    std::vector<Amplitude> out(rest_dim);
    double weight = 0.0;
    const auto amps = s.amplitudes();
    for (std::size_t r = 0; r < rest_dim; ++r) {
        Amplitude acc{};
        for (std::size_t sub = 0; sub < bra.size(); ++sub)
            if (bra[sub] != Amplitude{})
                acc += std::conj(bra[sub]) * amps[map.compose(r, sub)];
        out[r] = acc;
        weight += std::norm(acc);
    }
    return {std::move(out), weight};
}

} // namespace detail

inline PureState tensor(const PureState &a, const PureState &b) {
    std::vector<QubitId> qubits = a.qubits();
    qubits.insert(qubits.end(), b.qubits().begin(), b.qubits().end());
    const auto aa = a.amplitudes();
    const auto bb = b.amplitudes();
    std::vector<Amplitude> amps(aa.size() * bb.size());
    for (std::size_t i = 0; i < aa.size(); ++i)
        for (std::size_t j = 0; j < bb.size(); ++j)
            amps[i * bb.size() + j] = aa[i] * bb[j];
    return make_collapsed(std::move(qubits), std::move(amps));
}

inline PureState apply_single(const PureState &s, const Gate1 &u, const QubitId &q) {
    const std::size_t n = s.num_qubits();
    const std::size_t mask = std::size_t{1} << detail::shift_of(s.position(q), n);
    const auto in = s.amplitudes();
    std::vector<Amplitude> out(in.begin(), in.end());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (i & mask)
            continue;
        const std::size_t i1 = i | mask;
        out[i] = u(0, 0) * in[i] + u(0, 1) * in[i1];
        out[i1] = u(1, 0) * in[i] + u(1, 1) * in[i1];
    }
    return make_collapsed(s.qubits(), std::move(out));
}

/// Applies `u` on (q1, q2) in the basis |00>,|01>,|10>,|11> with q1 as the
/// left (more significant) slot.
inline PureState apply_pair(const PureState &s, const Gate2 &u, const QubitId &q1,
                            const QubitId &q2) {
    if (q1 == q2)
        fail(ErrorKind::SameQubit, "pair gate on '" + q1.label() + "' twice");
    const std::size_t n = s.num_qubits();
    const std::size_t m1 = std::size_t{1} << detail::shift_of(s.position(q1), n);
    const std::size_t m2 = std::size_t{1} << detail::shift_of(s.position(q2), n);
    const auto in = s.amplitudes();
    std::vector<Amplitude> out(in.begin(), in.end());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (i & (m1 | m2))
            continue;
        const std::array<std::size_t, 4> idx{i, i | m2, i | m1, i | m1 | m2};
        for (std::size_t r = 0; r < 4; ++r) {
            Amplitude acc{};
            for (std::size_t c = 0; c < 4; ++c)
                acc += u(r, c) * in[idx[c]];
            out[idx[r]] = acc;
        }
    }
    return make_collapsed(s.qubits(), std::move(out));
}

/// Reorders the register to `order` (a permutation of the current labels).
inline PureState permute(const PureState &s, const std::vector<QubitId> &order) {
    const std::size_t n = s.num_qubits();
    if (order.size() != n)
        fail(ErrorKind::LabelMismatch, "permutation has wrong length");
    std::vector<std::size_t> old_pos(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!s.contains(order[k]))
            fail(ErrorKind::LabelMismatch, "label '" + order[k].label() + "' not in register");
        old_pos[k] = s.position(order[k]);
    }
    const auto in = s.amplitudes();
    std::vector<Amplitude> out(in.size());
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        std::size_t src = 0;
        for (std::size_t k = 0; k < n; ++k)
            if ((idx >> detail::shift_of(k, n)) & 1U)
                src |= std::size_t{1} << detail::shift_of(old_pos[k], n);
        out[idx] = in[src];
    }
    return make_collapsed(order, std::move(out));
}

inline PureState relabel(const PureState &s, const QubitId &from, const QubitId &to) {
    std::vector<QubitId> qubits = s.qubits();
    qubits[s.position(from)] = to;
    return make_collapsed(std::move(qubits),
                          std::vector<Amplitude>(s.amplitudes().begin(), s.amplitudes().end()));
}

/// |<s1|s2>|^2 after aligning s2 to s1's label order; phase-insensitive.
inline double fidelity(const PureState &s1, const PureState &s2) {
    if (s1.num_qubits() != s2.num_qubits())
        fail(ErrorKind::LabelMismatch, "registers differ in size");
    for (const auto &q : s1.qubits())
        if (!s2.contains(q))
            fail(ErrorKind::LabelMismatch, "label '" + q.label() + "' missing in second state");
    const PureState aligned = s1.qubits() == s2.qubits() ? s2 : permute(s2, s1.qubits());
    Amplitude overlap{};
    const auto a = s1.amplitudes();
    const auto b = aligned.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        overlap += std::conj(a[i]) * b[i];
    return std::norm(overlap);
}

/// <ref| rho_q |ref> where rho_q is the reduced state of qubit q. `ref` must
/// be a one-qubit state; its label is ignored.
inline double qubit_fidelity(const PureState &s, const QubitId &q, const PureState &ref) {
    if (ref.num_qubits() != 1)
        fail(ErrorKind::DimensionMismatch, "reference must be a single qubit");
    const std::size_t n = s.num_qubits();
    const std::size_t mask = std::size_t{1} << detail::shift_of(s.position(q), n);
    const auto amps = s.amplitudes();
    Amplitude rho00{}, rho01{}, rho11{};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask)
            continue;
        const Amplitude x0 = amps[i];
        const Amplitude x1 = amps[i | mask];
        rho00 += x0 * std::conj(x0);
        rho01 += x0 * std::conj(x1);
        rho11 += x1 * std::conj(x1);
    }
    const Amplitude r0 = ref.amplitude(0);
    const Amplitude r1 = ref.amplitude(1);
    const Amplitude f = std::conj(r0) * rho00 * r0 + std::conj(r0) * rho01 * r1 +
                        std::conj(r1) * std::conj(rho01) * r0 + std::conj(r1) * rho11 * r1;
    return f.real();
}

// ---------------------------------------------------------------------------
// Measurement

/// Bell basis with the ψ/φ naming used throughout this project:
/// ψ± = (|00> ± |11>)/√2 and φ± = (|01> ± |10>)/√2.
/// Enumerator order is the fixed outcome order for sampling, and the
/// underlying value is the two-bit wire encoding (ψ+ = 00 ... φ- = 11).
enum class BellOutcome : std::uint8_t { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

inline constexpr std::array<BellOutcome, 4> kBellOutcomes{
    BellOutcome::PsiPlus, BellOutcome::PsiMinus, BellOutcome::PhiPlus, BellOutcome::PhiMinus};

constexpr std::string_view to_string(BellOutcome b) noexcept {
    switch (b) {
    case BellOutcome::PsiPlus: return "PsiPlus";
    case BellOutcome::PsiMinus: return "PsiMinus";
    case BellOutcome::PhiPlus: return "PhiPlus";
    case BellOutcome::PhiMinus: return "PhiMinus";
    }
    return "?";
}

constexpr std::array<Bit, 2> bell_bits(BellOutcome b) noexcept {
    const auto v = static_cast<std::uint8_t>(b);
    return {static_cast<Bit>((v >> 1) & 1U), static_cast<Bit>(v & 1U)};
}

inline BellOutcome bell_from_bits(std::span<const Bit> bits) {
    if (bits.size() != 2 || bits[0] > 1 || bits[1] > 1)
        fail(ErrorKind::InvalidArgument, "Bell outcome needs exactly two bits");
    return static_cast<BellOutcome>((bits[0] << 1) | bits[1]);
}

/// Amplitudes of the Bell vector over |00>,|01>,|10>,|11>.
inline std::array<Amplitude, 4> bell_vector(BellOutcome b) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (b) {
    case BellOutcome::PsiPlus: return {r, 0.0, 0.0, r};
    case BellOutcome::PsiMinus: return {r, 0.0, 0.0, -r};
    case BellOutcome::PhiPlus: return {0.0, r, r, 0.0};
    case BellOutcome::PhiMinus: return {0.0, r, -r, 0.0};
    }
    return {};
}

template <class Outcome> struct Branch {
    Outcome outcome;
    double probability;
    PureState collapsed; // measured qubits removed

    friend bool operator==(const Branch &, const Branch &) = default;
};

using ZBranch = Branch<Bit>;
using BellBranch = Branch<BellOutcome>;

inline std::vector<ZBranch> branch_z(const PureState &s, const QubitId &q) {
    const detail::IndexMap map(s.num_qubits(), {s.position(q)});
    std::vector<QubitId> rest;
    for (auto p : map.remaining)
        rest.push_back(s.qubits()[p]);
    std::vector<ZBranch> out;
    for (Bit bit : {Bit{0}, Bit{1}}) {
        const std::array<Amplitude, 2> bra{bit == 0 ? 1.0 : 0.0, bit == 1 ? 1.0 : 0.0};
        auto [amps, weight] = detail::project(s, map, bra);
        if (weight <= kZeroBranchProbability)
            continue;
        out.push_back({bit, weight, make_collapsed(rest, std::move(amps))});
    }
    return out;
}

inline std::vector<BellBranch> branch_bell(const PureState &s, const QubitId &q1,
                                           const QubitId &q2) {
    if (q1 == q2)
        fail(ErrorKind::SameQubit, "Bell measurement on '" + q1.label() + "' twice");
    const detail::IndexMap map(s.num_qubits(), {s.position(q1), s.position(q2)});
    std::vector<QubitId> rest;
    for (auto p : map.remaining)
        rest.push_back(s.qubits()[p]);
    std::vector<BellBranch> out;
    for (BellOutcome b : kBellOutcomes) {
        const auto bra = bell_vector(b);
        auto [amps, weight] = detail::project(s, map, bra);
        if (weight <= kZeroBranchProbability)
            continue;
        out.push_back({b, weight, make_collapsed(rest, std::move(amps))});
    }
    return out;
}

/// Index of the branch whose cumulative-probability interval holds `draw`.
inline std::size_t select_by_draw(std::span<const double> probabilities, double draw) {
    if (!(draw >= 0.0 && draw < 1.0))
        fail(ErrorKind::InvalidArgument, "draw must lie in [0, 1)");
    if (probabilities.empty())
        fail(ErrorKind::InvariantBreach, "no branches to select from");
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (draw < cumulative)
            return i;
    }
    return probabilities.size() - 1;
}

template <class Outcome>
std::vector<double> branch_probabilities(const std::vector<Branch<Outcome>> &branches) {
    std::vector<double> p;
    p.reserve(branches.size());
    for (const auto &b : branches)
        p.push_back(b.probability);
    return p;
}

inline ZBranch measure_z(const PureState &s, const QubitId &q, double draw) {
    auto branches = branch_z(s, q);
    return std::move(branches[select_by_draw(branch_probabilities(branches), draw)]);
}

inline BellBranch measure_bell(const PureState &s, const QubitId &q1, const QubitId &q2,
                               double draw) {
    auto branches = branch_bell(s, q1, q2);
    return std::move(branches[select_by_draw(branch_probabilities(branches), draw)]);
}

} // namespace qos
