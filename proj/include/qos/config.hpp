#pragma once

// Run configuration document shared by every CLI command.
//
//   {
//     "scheme": "s1" | "s2",
//     "a": [re, im], "b": [re, im],
//     "omega": {"angles": [theta, phi, lambda]}
//            | {"matrix": [[[re, im], [re, im]], [[re, im], [re, im]]]},
//     "alpha": [re, im], "beta": [re, im],
//     "recoverer": "holly" | "jack",
//     "trials": 100000, "seed": 42
//   }
//
// Every field is optional; absent fields keep their defaults. Unknown fields
// are rejected.

#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qos/schemes.hpp"

namespace qos {

using Json = nlohmann::ordered_json;

struct RunConfig {
    Scheme scheme = Scheme::S1;
    Amplitude a{1.0 / std::numbers::sqrt2, 0.0};
    Amplitude b{1.0 / std::numbers::sqrt2, 0.0};
    OmegaSpec omega = kHadamardAngles;
    Amplitude alpha{0.6, 0.0};
    Amplitude beta{0.8, 0.0};
    Party recoverer = Party::Holly;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 42;
};

inline RunConfig default_run_config() { return RunConfig{}; }

/// Builds the scheme config. The W coefficients are checked here and only
/// attached for S2.
inline SchemeConfig to_scheme_config(const RunConfig &rc, Scheme scheme) {
    SchemeConfig cfg;
    cfg.scheme = scheme;
    cfg.a = rc.a;
    cfg.b = rc.b;
    cfg.omega = rc.omega;
    cfg.recoverer = rc.recoverer;
    WAsymmetricSpec w = [&] {
        try {
            return WAsymmetricSpec::make(rc.alpha, rc.beta);
        } catch (const QosError &e) {
            throw ConfigError("alpha/beta", e.what());
        }
    }();
    if (scheme == Scheme::S2)
        cfg.wspec = w;
    return cfg;
}

inline SchemeConfig to_scheme_config(const RunConfig &rc) { return to_scheme_config(rc, rc.scheme); }

/// Checks everything a command needs before it runs.
inline void check_run_config(const RunConfig &rc) {
    const double norm2 = std::norm(rc.a) + std::norm(rc.b);
    if (!std::isfinite(norm2) || !(norm2 > 0.0))
        throw ConfigError("a/b", "target amplitudes must be finite and not both zero");
    if (rc.trials < 1)
        throw ConfigError("trials", "must be at least 1");
    try {
        (void)omega(rc.omega);
    } catch (const QosError &e) {
        throw ConfigError("omega", e.what());
    }
    (void)to_scheme_config(rc, Scheme::S2);
}

// ---------------------------------------------------------------------------
// Text parsing helpers for flags

/// A real number, optionally written with pi: "0.5", "pi", "-pi/2", "2pi/3",
/// "0.25*pi".
inline double parse_real_token(const std::string &field, std::string token) {
    std::erase_if(token, [](unsigned char c) { return std::isspace(c); });
    if (token.empty())
        throw ConfigError(field, "empty number");
    const auto pi_at = token.find("pi");
    auto parse_plain = [&field](const std::string &s) {
        double v = 0.0;
        const auto *end = s.data() + s.size();
        const auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            throw ConfigError(field, "cannot parse number '" + s + "'");
        return v;
    };
    if (pi_at == std::string::npos)
        return parse_plain(token);

    std::string coef = token.substr(0, pi_at);
    std::string rest = token.substr(pi_at + 2);
    if (!coef.empty() && coef.back() == '*')
        coef.pop_back();
    double k = 1.0;
    if (coef == "-")
        k = -1.0;
    else if (coef == "+" || coef.empty())
        k = 1.0;
    else
        k = parse_plain(coef);
    double den = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/')
            throw ConfigError(field, "cannot parse number '" + token + "'");
        den = parse_plain(rest.substr(1));
        if (den == 0.0)
            throw ConfigError(field, "division by zero in '" + token + "'");
    }
    return k * std::numbers::pi / den;
}

inline std::vector<std::string> split_commas(const std::string &text) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ','))
        parts.push_back(cur);
    if (!text.empty() && text.back() == ',')
        parts.emplace_back();
    return parts;
}

/// "re" or "re,im".
inline Amplitude parse_complex_text(const std::string &field, const std::string &text) {
    const auto parts = split_commas(text);
    if (parts.size() == 1)
        return {parse_real_token(field, parts[0]), 0.0};
    if (parts.size() == 2)
        return {parse_real_token(field, parts[0]), parse_real_token(field, parts[1])};
    throw ConfigError(field, "expected 're' or 're,im', got '" + text + "'");
}

inline EulerAngles parse_angles_text(const std::string &field, const std::string &text) {
    const auto parts = split_commas(text);
    if (parts.size() != 3)
        throw ConfigError(field, "expected 'theta,phi,lambda', got '" + text + "'");
    return {parse_real_token(field, parts[0]), parse_real_token(field, parts[1]),
            parse_real_token(field, parts[2])};
}

inline Scheme parse_scheme_text(const std::string &field, const std::string &s) {
    if (s == "s1" || s == "S1")
        return Scheme::S1;
    if (s == "s2" || s == "S2")
        return Scheme::S2;
    throw ConfigError(field, "expected \"s1\" or \"s2\", got \"" + s + "\"");
}

inline Party parse_recoverer_text(const std::string &field, const std::string &s) {
    if (s == "holly" || s == "Holly")
        return Party::Holly;
    if (s == "jack" || s == "Jack")
        return Party::Jack;
    throw ConfigError(field, "expected \"holly\" or \"jack\", got \"" + s + "\"");
}

// ---------------------------------------------------------------------------
// JSON document

namespace detail {

inline double json_real(const Json &v, const std::string &field) {
    if (!v.is_number())
        throw ConfigError(field, "expected a number");
    return v.get<double>();
}

inline Amplitude json_complex(const Json &v, const std::string &field) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError(field, "expected [re, im]");
    return {json_real(v[0], field), json_real(v[1], field)};
}

inline Json complex_json(Amplitude z) { return Json::array({z.real(), z.imag()}); }

inline std::uint64_t json_count(const Json &v, const std::string &field) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline OmegaSpec json_omega(const Json &v) {
    if (!v.is_object() || v.size() != 1)
        throw ConfigError("omega", "expected {\"angles\": [...]} or {\"matrix\": [...]}");
    if (v.contains("angles")) {
        const Json &a = v["angles"];
        if (!a.is_array() || a.size() != 3)
            throw ConfigError("omega.angles", "expected [theta, phi, lambda]");
        return EulerAngles{json_real(a[0], "omega.angles"), json_real(a[1], "omega.angles"),
                           json_real(a[2], "omega.angles")};
    }
    if (v.contains("matrix")) {
        const Json &m = v["matrix"];
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
            !m[1].is_array() || m[1].size() != 2)
            throw ConfigError("omega.matrix", "expected a 2x2 array of [re, im] entries");
        Gate1::Matrix entries{};
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                entries[r * 2 + c] = json_complex(m[r][c], "omega.matrix");
        try {
            return Gate1(entries);
        } catch (const QosError &e) {
            throw ConfigError("omega.matrix", e.what());
        }
    }
    throw ConfigError("omega." + v.begin().key(), "unknown field");
}

} // namespace detail

inline Json omega_json(const OmegaSpec &spec) {
    if (const auto *a = std::get_if<EulerAngles>(&spec))
        return Json{{"angles", Json::array({a->theta, a->phi, a->lambda})}};
    const auto &g = std::get<Gate1>(spec);
    Json m = Json::array();
    for (std::size_t r = 0; r < 2; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < 2; ++c)
            row.push_back(detail::complex_json(g(r, c)));
        m.push_back(row);
    }
    return Json{{"matrix", m}};
}

inline Json to_json(const RunConfig &rc) {
    Json j;
    j["scheme"] = rc.scheme == Scheme::S1 ? "s1" : "s2";
    j["a"] = detail::complex_json(rc.a);
    j["b"] = detail::complex_json(rc.b);
    j["omega"] = omega_json(rc.omega);
    j["alpha"] = detail::complex_json(rc.alpha);
    j["beta"] = detail::complex_json(rc.beta);
    j["recoverer"] = rc.recoverer == Party::Jack ? "jack" : "holly";
    j["trials"] = rc.trials;
    j["seed"] = rc.seed;
    return j;
}

/// Overlays the fields present in `doc` onto `base`.
inline RunConfig parse_run_config(const Json &doc, RunConfig base = default_run_config()) {
    if (!doc.is_object())
        throw ConfigError("config", "top level must be an object");
    for (const auto &[key, v] : doc.items()) {
        if (key == "scheme") {
            if (!v.is_string())
                throw ConfigError(key, "expected a string");
            base.scheme = parse_scheme_text(key, v.get<std::string>());
        } else if (key == "a") {
            base.a = detail::json_complex(v, key);
        } else if (key == "b") {
            base.b = detail::json_complex(v, key);
        } else if (key == "omega") {
            base.omega = detail::json_omega(v);
        } else if (key == "alpha") {
            base.alpha = detail::json_complex(v, key);
        } else if (key == "beta") {
            base.beta = detail::json_complex(v, key);
        } else if (key == "recoverer") {
            if (!v.is_string())
                throw ConfigError(key, "expected a string");
            base.recoverer = parse_recoverer_text(key, v.get<std::string>());
        } else if (key == "trials") {
            base.trials = detail::json_count(v, key);
        } else if (key == "seed") {
            base.seed = detail::json_count(v, key);
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    return base;
}

inline RunConfig parse_run_config_text(const std::string &text, RunConfig base = default_run_config()) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ConfigError("config", std::string("malformed document: ") + e.what());
    }
    return parse_run_config(doc, std::move(base));
}

inline RunConfig load_run_config(const std::string &path, RunConfig base = default_run_config()) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str(), std::move(base));
}

} // namespace qos
