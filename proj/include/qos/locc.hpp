#pragma once

// Three-party LOCC bookkeeping: qubit ownership, local operations, classical
// messages, and an append-only transcript that can be replayed.

#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qos/primitives.hpp"
#include "qos/qstate.hpp"

namespace qos {

enum class Party : std::uint8_t { Grey, Holly, Jack };

constexpr std::string_view to_string(Party p) noexcept {
    switch (p) {
    case Party::Grey: return "Grey";
    case Party::Holly: return "Holly";
    case Party::Jack: return "Jack";
    }
    return "?";
}

enum class Basis : std::uint8_t { Computational, Bell };

constexpr std::string_view to_string(Basis b) noexcept {
    return b == Basis::Bell ? "bell" : "z";
}

using OwnershipMap = std::map<QubitId, Party>;

struct SystemPart {
    PureState state;
    OwnershipMap owners;
};

struct LocalUnitaryEvent {
    std::vector<Party> parties; // more than one for a cooperative gate
    std::vector<QubitId> qubits;
    std::string tag;
    std::variant<Gate1, Gate2> gate;

    friend bool operator==(const LocalUnitaryEvent &, const LocalUnitaryEvent &) = default;
};

struct MeasurementEvent {
    Party party;
    std::vector<QubitId> qubits;
    Basis basis;
    std::vector<Bit> outcome; // one bit (z) or the two-bit Bell encoding
    double probability;

    friend bool operator==(const MeasurementEvent &, const MeasurementEvent &) = default;
};

/// One delivery of a message. Deliveries sharing an announcement id are the
/// same public broadcast and count once toward the classical cost.
struct ClassicalSendEvent {
    Party from;
    Party to;
    std::vector<Bit> bits;
    std::size_t announcement;

    friend bool operator==(const ClassicalSendEvent &, const ClassicalSendEvent &) = default;
};

using TranscriptEvent = std::variant<LocalUnitaryEvent, MeasurementEvent, ClassicalSendEvent>;

struct OperationCounts {
    int bell_measurements = 0;
    int single_measurements = 0;
    int single_qubit_unitaries = 0;
    int collective_unitaries = 0;

    friend bool operator==(const OperationCounts &, const OperationCounts &) = default;
};

class LoccSystem;

LoccSystem init_system(std::vector<SystemPart> parts);

/// Global state plus ownership plus transcript. Passed by value through the
/// protocol steps; the initial snapshot is kept for replay.
class LoccSystem {
  public:
    const PureState &state() const noexcept { return state_; }
    const OwnershipMap &owners() const noexcept { return owners_; }
    const std::vector<TranscriptEvent> &transcript() const noexcept { return transcript_; }
    const PureState &initial_state() const noexcept { return origin_->state; }
    const OwnershipMap &initial_owners() const noexcept { return origin_->owners; }

    Party owner_of(const QubitId &q) const {
        const auto it = owners_.find(q);
        if (it == owners_.end())
            fail(ErrorKind::UnknownQubit, "qubit '" + q.label() + "' not in system");
        return it->second;
    }

    bool owns(Party p, const QubitId &q) const {
        const auto it = owners_.find(q);
        return it != owners_.end() && it->second == p;
    }

  private:
    struct Origin {
        PureState state;
        OwnershipMap owners;
    };

    LoccSystem(PureState state, OwnershipMap owners)
        : state_(state), owners_(owners),
          origin_(std::make_shared<const Origin>(Origin{std::move(state), std::move(owners)})) {}

    friend LoccSystem init_system(std::vector<SystemPart> parts);
    friend LoccSystem from_snapshot(const PureState &, const OwnershipMap &);
    friend struct LoccAccess;

    PureState state_;
    OwnershipMap owners_;
    std::vector<TranscriptEvent> transcript_;
    std::size_t next_announcement_ = 0;
    std::shared_ptr<const Origin> origin_;
};

/// Rebuilds a fresh system (empty transcript) from an explicit state and
/// ownership map.
inline LoccSystem from_snapshot(const PureState &state, const OwnershipMap &owners) {
    for (const auto &q : state.qubits())
        if (!owners.contains(q))
            fail(ErrorKind::UnownedQubit, "qubit '" + q.label() + "' has no owner");
    for (const auto &[q, p] : owners)
        if (!state.contains(q))
            fail(ErrorKind::UnknownQubit, "ownership entry for absent qubit '" + q.label() + "'");
    return LoccSystem(state, owners);
}

inline LoccSystem init_system(std::vector<SystemPart> parts) {
    if (parts.empty())
        fail(ErrorKind::InvalidArgument, "system needs at least one part");
    PureState global = parts.front().state;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        for (const auto &q : parts[i].state.qubits())
            if (global.contains(q))
                fail(ErrorKind::DuplicateLabel, "label '" + q.label() + "' used by two parts");
        global = tensor(global, parts[i].state);
    }
    OwnershipMap owners;
    for (const auto &part : parts)
        for (const auto &[q, p] : part.owners) {
            if (!part.state.contains(q))
                fail(ErrorKind::UnknownQubit,
                     "ownership entry '" + q.label() + "' not in its part");
            owners.emplace(q, p);
        }
    return from_snapshot(global, owners);
}

struct LoccAccess {
    static PureState &state(LoccSystem &s) { return s.state_; }
    static OwnershipMap &owners(LoccSystem &s) { return s.owners_; }
    static void append(LoccSystem &s, TranscriptEvent e) { s.transcript_.push_back(std::move(e)); }
    static std::size_t announce(LoccSystem &s) { return s.next_announcement_++; }
    static void seen_announcement(LoccSystem &s, std::size_t id) {
        s.next_announcement_ = std::max(s.next_announcement_, id + 1);
    }
};

namespace detail {

inline void require_owner(const LoccSystem &sys, Party party, const QubitId &q) {
    if (!sys.state().contains(q))
        fail(ErrorKind::UnknownQubit, "qubit '" + q.label() + "' not in system");
    if (!sys.owns(party, q))
        fail(ErrorKind::NotOwner, std::string(to_string(party)) + " does not hold '" +
                                      q.label() + "' (held by " +
                                      std::string(to_string(sys.owner_of(q))) + ")");
}

inline void require_any_owner(const LoccSystem &sys, const std::vector<Party> &parties,
                              const QubitId &q) {
    if (!sys.state().contains(q))
        fail(ErrorKind::UnknownQubit, "qubit '" + q.label() + "' not in system");
    for (Party p : parties)
        if (sys.owns(p, q))
            return;
    fail(ErrorKind::NotOwner, "no acting party holds '" + q.label() + "'");
}

} // namespace detail

inline LoccSystem local_unitary(LoccSystem sys, Party party, const Gate1 &u, const QubitId &q,
                                std::string tag) {
    detail::require_owner(sys, party, q);
    LoccAccess::state(sys) = apply_single(sys.state(), u, q);
    LoccAccess::append(sys, LocalUnitaryEvent{{party}, {q}, std::move(tag), u});
    return sys;
}

inline LoccSystem local_unitary(LoccSystem sys, Party party, const Gate2 &u, const QubitId &q1,
                                const QubitId &q2, std::string tag) {
    detail::require_owner(sys, party, q1);
    detail::require_owner(sys, party, q2);
    LoccAccess::state(sys) = apply_pair(sys.state(), u, q1, q2);
    LoccAccess::append(sys, LocalUnitaryEvent{{party}, {q1, q2}, std::move(tag), u});
    return sys;
}

/// A two-qubit gate executed jointly: each qubit must be held by one of the
/// listed parties, and at least two distinct parties must take part.
inline LoccSystem cooperative_unitary(LoccSystem sys, std::vector<Party> parties, const Gate2 &u,
                                      const QubitId &q1, const QubitId &q2, std::string tag) {
    detail::require_any_owner(sys, parties, q1);
    detail::require_any_owner(sys, parties, q2);
    const std::set<Party> distinct(parties.begin(), parties.end());
    if (distinct.size() < 2)
        fail(ErrorKind::InvalidArgument, "cooperative gate needs at least two parties");
    parties.assign(distinct.begin(), distinct.end());
    LoccAccess::state(sys) = apply_pair(sys.state(), u, q1, q2);
    LoccAccess::append(sys, LocalUnitaryEvent{std::move(parties), {q1, q2}, std::move(tag), u});
    return sys;
}

struct MeasureResult {
    std::vector<Bit> outcome;
    double probability;
    LoccSystem system;
};

/// Measures `qubits` and keeps the branch picked by `choose`, which receives
/// the nonzero branch probabilities in fixed outcome order and returns an
/// index into them.
template <class Choose>
MeasureResult local_measure_with(LoccSystem sys, Party party, const std::vector<QubitId> &qubits,
                                 Basis basis, Choose &&choose) {
    const std::size_t arity = basis == Basis::Bell ? 2 : 1;
    if (qubits.size() != arity)
        fail(ErrorKind::BasisArity, std::string(to_string(basis)) + " measurement takes " +
                                        std::to_string(arity) + " qubit(s), got " +
                                        std::to_string(qubits.size()));
    for (const auto &q : qubits)
        detail::require_owner(sys, party, q);

    std::vector<Bit> outcome;
    double probability = 0.0;
    if (basis == Basis::Bell) {
        auto branches = branch_bell(sys.state(), qubits[0], qubits[1]);
        const std::size_t k = choose(std::span<const double>(branch_probabilities(branches)));
        auto &chosen = branches.at(k);
        const auto bits = bell_bits(chosen.outcome);
        outcome.assign(bits.begin(), bits.end());
        probability = chosen.probability;
        LoccAccess::state(sys) = std::move(chosen.collapsed);
    } else {
        auto branches = branch_z(sys.state(), qubits[0]);
        const std::size_t k = choose(std::span<const double>(branch_probabilities(branches)));
        auto &chosen = branches.at(k);
        outcome = {chosen.outcome};
        probability = chosen.probability;
        LoccAccess::state(sys) = std::move(chosen.collapsed);
    }
    for (const auto &q : qubits)
        LoccAccess::owners(sys).erase(q);
    LoccAccess::append(sys, MeasurementEvent{party, qubits, basis, outcome, probability});
    return MeasureResult{std::move(outcome), probability, std::move(sys)};
}

inline MeasureResult local_measure(LoccSystem sys, Party party, const std::vector<QubitId> &qubits,
                                   Basis basis, double draw) {
    return local_measure_with(std::move(sys), party, qubits, basis,
                              [draw](std::span<const double> p) { return select_by_draw(p, draw); });
}

inline LoccSystem send_bits(LoccSystem sys, Party from, Party to, std::vector<Bit> bits) {
    if (from == to)
        fail(ErrorKind::SelfSend, std::string(to_string(from)) + " sending to itself");
    if (bits.empty())
        fail(ErrorKind::InvalidArgument, "empty classical message");
    const std::size_t id = LoccAccess::announce(sys);
    LoccAccess::append(sys, ClassicalSendEvent{from, to, std::move(bits), id});
    return sys;
}

/// One public announcement delivered to every listed receiver.
inline LoccSystem broadcast_bits(LoccSystem sys, Party from, const std::vector<Party> &to,
                                 const std::vector<Bit> &bits) {
    if (to.empty())
        fail(ErrorKind::InvalidArgument, "broadcast without receivers");
    if (bits.empty())
        fail(ErrorKind::InvalidArgument, "empty classical message");
    for (Party p : to)
        if (p == from)
            fail(ErrorKind::SelfSend, std::string(to_string(from)) + " sending to itself");
    const std::size_t id = LoccAccess::announce(sys);
    for (Party p : to)
        LoccAccess::append(sys, ClassicalSendEvent{from, p, bits, id});
    return sys;
}

/// Classical cost with each announcement counted once.
inline int cbit_count(const LoccSystem &sys) {
    std::map<std::size_t, std::size_t> per_announcement;
    for (const auto &e : sys.transcript())
        if (const auto *send = std::get_if<ClassicalSendEvent>(&e))
            per_announcement[send->announcement] = send->bits.size();
    int total = 0;
    for (const auto &[id, n] : per_announcement)
        total += static_cast<int>(n);
    return total;
}

/// Bits summed over every delivery.
inline int cbits_delivered(const LoccSystem &sys) {
    int total = 0;
    for (const auto &e : sys.transcript())
        if (const auto *send = std::get_if<ClassicalSendEvent>(&e))
            total += static_cast<int>(send->bits.size());
    return total;
}

inline OperationCounts operation_counts(const LoccSystem &sys) {
    OperationCounts c;
    for (const auto &e : sys.transcript()) {
        if (const auto *m = std::get_if<MeasurementEvent>(&e)) {
            (m->basis == Basis::Bell ? c.bell_measurements : c.single_measurements)++;
        } else if (const auto *u = std::get_if<LocalUnitaryEvent>(&e)) {
            (u->qubits.size() == 1 ? c.single_qubit_unitaries : c.collective_unitaries)++;
        }
    }
    return c;
}

inline std::string format_probability(double p) {
    std::ostringstream os;
    os << std::setprecision(12) << p;
    return os.str();
}

inline std::string format_bits(std::span<const Bit> bits) {
    std::string s;
    for (Bit b : bits)
        s += static_cast<char>('0' + b);
    return s;
}

/// One tab-separated record per event:
///   index, variant, party/parties, qubits, payload, probability
inline std::string serialize_transcript(const LoccSystem &sys) {
    std::ostringstream os;
    std::size_t index = 0;
    for (const auto &e : sys.transcript()) {
        os << index++ << '\t';
        if (const auto *u = std::get_if<LocalUnitaryEvent>(&e)) {
            std::string parties;
            for (std::size_t i = 0; i < u->parties.size(); ++i)
                parties += (i ? "+" : "") + std::string(to_string(u->parties[i]));
            os << "LocalUnitary\t" << parties << '\t' << join_labels(u->qubits) << "\tgate=" << u->tag
               << "\t-";
        } else if (const auto *m = std::get_if<MeasurementEvent>(&e)) {
            os << "Measurement\t" << to_string(m->party) << '\t' << join_labels(m->qubits)
               << "\tbasis=" << to_string(m->basis) << " outcome=";
            if (m->basis == Basis::Bell)
                os << to_string(bell_from_bits(m->outcome));
            else
                os << format_bits(m->outcome);
            os << " bits=" << format_bits(m->outcome) << '\t' << format_probability(m->probability);
        } else {
            const auto &s = std::get<ClassicalSendEvent>(e);
            os << "ClassicalSend\t" << to_string(s.from) << "->" << to_string(s.to) << "\t-\tbits="
               << format_bits(s.bits) << " count=" << s.bits.size()
               << " announcement=" << s.announcement << "\t-";
        }
        os << '\n';
    }
    return os.str();
}

/// Re-executes `events` from the given snapshot, re-checking ownership at
/// every step. Measurements are forced onto their recorded outcomes; a
/// recorded probability that is not reproduced exactly is an invariant breach.
inline LoccSystem replay(const PureState &initial, const OwnershipMap &owners,
                         std::span<const TranscriptEvent> events) {
    LoccSystem sys = from_snapshot(initial, owners);
    for (const auto &e : events) {
        if (const auto *u = std::get_if<LocalUnitaryEvent>(&e)) {
            if (const auto *g1 = std::get_if<Gate1>(&u->gate)) {
                if (u->qubits.size() != 1 || u->parties.size() != 1)
                    fail(ErrorKind::InvalidArgument, "malformed single-qubit event");
                sys = local_unitary(std::move(sys), u->parties[0], *g1, u->qubits[0], u->tag);
            } else {
                const auto &g2 = std::get<Gate2>(u->gate);
                if (u->qubits.size() != 2 || u->parties.empty())
                    fail(ErrorKind::InvalidArgument, "malformed two-qubit event");
                sys = u->parties.size() == 1
                          ? local_unitary(std::move(sys), u->parties[0], g2, u->qubits[0],
                                          u->qubits[1], u->tag)
                          : cooperative_unitary(std::move(sys), u->parties, g2, u->qubits[0],
                                                u->qubits[1], u->tag);
            }
        } else if (const auto *m = std::get_if<MeasurementEvent>(&e)) {
            // Locate the recorded outcome among the nonzero branches.
            std::vector<Bit> present;
            if (m->basis == Basis::Bell) {
                if (m->qubits.size() == 2 && sys.state().contains(m->qubits[0]) &&
                    sys.state().contains(m->qubits[1]))
                    for (const auto &b : branch_bell(sys.state(), m->qubits[0], m->qubits[1]))
                        present.push_back(static_cast<Bit>(b.outcome));
            } else if (m->qubits.size() == 1 && sys.state().contains(m->qubits[0])) {
                for (const auto &b : branch_z(sys.state(), m->qubits[0]))
                    present.push_back(b.outcome);
            }
            const Bit wanted = m->basis == Basis::Bell
                                   ? static_cast<Bit>(bell_from_bits(m->outcome))
                                   : (m->outcome.size() == 1 ? m->outcome[0] : Bit{255});
            auto result = local_measure_with(
                std::move(sys), m->party, m->qubits, m->basis, [&](std::span<const double>) {
                    const auto it = std::find(present.begin(), present.end(), wanted);
                    if (it == present.end())
                        fail(ErrorKind::InvariantBreach, "recorded outcome has zero probability");
                    return static_cast<std::size_t>(it - present.begin());
                });
            if (result.probability != m->probability)
                fail(ErrorKind::InvariantBreach, "replayed probability differs: " +
                                                     format_probability(result.probability) +
                                                     " vs " + format_probability(m->probability));
            sys = std::move(result.system);
        } else {
            const auto &s = std::get<ClassicalSendEvent>(e);
            if (s.from == s.to)
                fail(ErrorKind::SelfSend, std::string(to_string(s.from)) + " sending to itself");
            LoccAccess::seen_announcement(sys, s.announcement);
            LoccAccess::append(sys, s);
        }
    }
    return sys;
}

inline LoccSystem replay(const LoccSystem &sys) {
    return replay(sys.initial_state(), sys.initial_owners(), sys.transcript());
}

/// True when replaying the transcript reproduces state, ownership and
/// transcript exactly.
inline bool verify_replay(const LoccSystem &sys) {
    const LoccSystem again = replay(sys);
    return again.state() == sys.state() && again.owners() == sys.owners() &&
           again.transcript() == sys.transcript();
}

} // namespace qos
