#pragma once

// Structured-text and JSON renderings of analysis results. Probabilities are
// printed with 12 significant digits; exact rationals as "p/q".

#include <iomanip>
#include <sstream>
#include <string>

#include "qos/analysis.hpp"
#include "qos/config.hpp"

namespace qos {

/// Rounds to 12 significant digits so JSON numbers match the text output.
inline double round12(double x) { return std::stod(format_probability(x)); }

inline std::string format_complex(Amplitude z) {
    return "[" + format_probability(z.real()) + ", " + format_probability(z.imag()) + "]";
}

inline Json to_json(const TraceStep &s) {
    Json j;
    j["party"] = std::string(to_string(s.party));
    j["basis"] = std::string(to_string(s.basis));
    Json qs = Json::array();
    for (const auto &q : s.qubits)
        qs.push_back(q.label());
    j["qubits"] = qs;
    j["outcome"] = s.basis == Basis::Bell ? std::string(to_string(bell_from_bits(s.outcome)))
                                          : format_bits(s.outcome);
    j["bits"] = format_bits(s.outcome);
    j["probability"] = round12(s.probability);
    return j;
}

inline Json to_json(const OperationCounts &c) {
    return Json{{"bell_measurements", c.bell_measurements},
                {"single_measurements", c.single_measurements},
                {"single_qubit_unitaries", c.single_qubit_unitaries},
                {"collective_unitaries", c.collective_unitaries}};
}

inline Json rational_json(const std::optional<Rational> &r) {
    return r ? Json(r->str()) : Json(nullptr);
}

inline Json to_json(const BranchReport &r) {
    Json j;
    j["leaves"] = r.branches.size();
    j["p_success"] = round12(r.p_success);
    j["p_success_exact"] = rational_json(recover_rational(r.p_success));
    j["fidelity_given_success"] = round12(r.fidelity_given_success);
    Json branches = Json::array();
    for (const auto &leaf : r.branches) {
        Json b;
        Json path = Json::array();
        for (const auto &s : leaf.path)
            path.push_back(to_json(s));
        b["path"] = path;
        b["probability"] = round12(leaf.probability);
        b["success"] = leaf.success;
        b["fidelity"] = leaf.fidelity ? Json(round12(*leaf.fidelity)) : Json(nullptr);
        b["cbits"] = leaf.cbits;
        branches.push_back(b);
    }
    j["branches"] = branches;
    return j;
}

inline Json to_json(const SchemeStats &s) {
    return Json{{"trials", s.trials},
                {"successes", s.successes},
                {"success_rate", round12(s.success_rate())},
                {"mean_fidelity_on_success", round12(s.mean_fidelity_on_success)},
                {"seed", s.seed}};
}

inline Json to_json(const EfficiencyRecord &e) {
    return Json{{"p", round12(e.p)},
                {"p_exact", rational_json(e.p_exact)},
                {"q", e.q},
                {"t", e.t},
                {"eta", round12(e.eta)},
                {"eta_exact", rational_json(e.eta_exact)}};
}

inline Json to_json(const CorrectionAudit &a) {
    Json derived, printed;
    for (BellOutcome b : kBellOutcomes) {
        const auto i = static_cast<std::size_t>(b);
        derived[std::string(to_string(b))] = std::string(to_string(a.derived[i]));
        printed[std::string(to_string(b))] = std::string(to_string(a.printed[i]));
    }
    Json mismatched = Json::array();
    for (BellOutcome b : a.mismatched)
        mismatched.push_back(std::string(to_string(b)));
    return Json{{"derived", derived},
                {"printed", printed},
                {"mismatched_rows", mismatched},
                {"diverges", a.diverges},
                {"note", a.note}};
}

inline Json to_json(const ComparisonRow &r) {
    Json j;
    j["scheme"] = std::string(to_string(r.scheme));
    j["quantum_resources"] = r.quantum_resources;
    j["channel_qubits"] = r.channel_qubits;
    j["operations"] = to_json(r.operations);
    j["cbits"] = r.cbits_success;
    j["cbits_failure_path"] = r.cbits_failure ? Json(*r.cbits_failure) : Json(nullptr);
    j["leaves"] = r.leaves;
    j["p_success"] = round12(r.p_success);
    j["fidelity_given_success"] = round12(r.fidelity_given_success);
    j["efficiency"] = to_json(r.efficiency);
    j["divergences"] = r.divergences;
    return j;
}

inline Json to_json(const ComparisonReport &r) {
    Json rows = Json::array();
    for (const auto &row : r.rows)
        rows.push_back(to_json(row));
    return Json{{"rows", rows}, {"teleport_corrections", to_json(r.teleport_audit)}};
}

// ---------------------------------------------------------------------------
// Text

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string exact_or_decimal(const std::optional<Rational> &r, double x) {
    return r ? r->str() : format_probability(x);
}

inline void write_config_section(std::ostream &os, const RunConfig &rc) {
    os << "[config]\n";
    os << "scheme = " << (rc.scheme == Scheme::S1 ? "s1" : "s2") << '\n';
    os << "a = " << format_complex(rc.a) << '\n';
    os << "b = " << format_complex(rc.b) << '\n';
    if (const auto *ang = std::get_if<EulerAngles>(&rc.omega)) {
        os << "omega.angles = [" << format_probability(ang->theta) << ", "
           << format_probability(ang->phi) << ", " << format_probability(ang->lambda) << "]\n";
    } else {
        const auto &g = std::get<Gate1>(rc.omega);
        os << "omega.matrix = [[" << format_complex(g(0, 0)) << ", " << format_complex(g(0, 1))
           << "], [" << format_complex(g(1, 0)) << ", " << format_complex(g(1, 1)) << "]]\n";
    }
    os << "alpha = " << format_complex(rc.alpha) << '\n';
    os << "beta = " << format_complex(rc.beta) << '\n';
    os << "recoverer = " << (rc.recoverer == Party::Jack ? "jack" : "holly") << '\n';
    os << "trials = " << rc.trials << '\n';
    os << "seed = " << rc.seed << '\n';
}

inline void write_branch_report(std::ostream &os, const BranchReport &r) {
    os << "[summary]\n";
    os << "leaves = " << r.branches.size() << '\n';
    os << "p_success = " << format_probability(r.p_success) << '\n';
    os << "p_success_exact = " << exact_or_decimal(recover_rational(r.p_success), r.p_success) << '\n';
    os << "fidelity_given_success = " << format_probability(r.fidelity_given_success) << '\n';
    os << "\n[branches]\n";
    os << std::left << std::setw(4) << "#" << std::setw(18) << "probability" << std::setw(9)
       << "success" << std::setw(16) << "fidelity" << std::setw(7) << "cbits"
       << "path\n";
    for (std::size_t i = 0; i < r.branches.size(); ++i) {
        const auto &leaf = r.branches[i];
        std::string path;
        for (std::size_t k = 0; k < leaf.path.size(); ++k)
            path += (k ? " > " : "") + leaf.path[k].label() + "@" +
                    format_probability(leaf.path[k].probability);
        os << std::left << std::setw(4) << i << std::setw(18) << format_probability(leaf.probability)
           << std::setw(9) << yes_no(leaf.success) << std::setw(16)
           << (leaf.fidelity ? format_probability(*leaf.fidelity) : std::string("-"))
           << std::setw(7) << leaf.cbits << path << '\n';
    }
}

inline void write_audit(std::ostream &os, const CorrectionAudit &a) {
    os << "[teleport_corrections]\n";
    os << std::left << std::setw(10) << "outcome" << std::setw(6) << "bits" << std::setw(9)
       << "derived" << "printed\n";
    for (BellOutcome b : kBellOutcomes) {
        const auto i = static_cast<std::size_t>(b);
        os << std::left << std::setw(10) << to_string(b) << std::setw(6) << format_bits(bell_bits(b))
           << std::setw(9) << to_string(a.derived[i]) << to_string(a.printed[i]) << '\n';
    }
    os << "diverges = " << yes_no(a.diverges) << '\n';
    if (a.diverges)
        os << "flag = " << a.note << '\n';
}

inline void write_comparison(std::ostream &os, const ComparisonReport &r) {
    os << "[comparison]\n";
    os << std::left << std::setw(4) << "S" << std::setw(9) << "QR" << std::setw(5) << "BM"
       << std::setw(5) << "SM" << std::setw(6) << "SQUO" << std::setw(6) << "NCUO" << std::setw(6)
       << "q" << std::setw(12) << "CRC" << std::setw(18) << "P" << std::setw(18) << "eta"
       << "leaves\n";
    for (const auto &row : r.rows) {
        os << std::left << std::setw(4) << to_string(row.scheme) << std::setw(9)
           << row.quantum_resources << std::setw(5) << row.operations.bell_measurements
           << std::setw(5) << row.operations.single_measurements << std::setw(6)
           << row.operations.single_qubit_unitaries << std::setw(6)
           << row.operations.collective_unitaries << std::setw(6) << row.channel_qubits
           << std::setw(12) << (std::to_string(row.cbits_success) + " cbits") << std::setw(18)
           << exact_or_decimal(row.efficiency.p_exact, row.p_success) << std::setw(18)
           << exact_or_decimal(row.efficiency.eta_exact, row.efficiency.eta) << row.leaves << '\n';
    }
    for (const auto &row : r.rows) {
        os << "\n[" << to_string(row.scheme) << "]\n";
        os << "p_success = " << format_probability(row.p_success) << '\n';
        os << "fidelity_given_success = " << format_probability(row.fidelity_given_success) << '\n';
        os << "eta = " << format_probability(row.efficiency.eta) << '\n';
        os << "cbits_success_path = " << row.cbits_success << '\n';
        if (row.cbits_failure)
            os << "cbits_failure_path = " << *row.cbits_failure << '\n';
        for (const auto &d : row.divergences)
            os << "divergence = " << d << '\n';
    }
    os << '\n';
    write_audit(os, r.teleport_audit);
}

} // namespace qos
