#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qos {

enum class ErrorKind {
    DimensionMismatch,
    ZeroNorm,
    NonFinite,
    DuplicateLabel,
    UnknownQubit,
    SameQubit,
    LabelMismatch,
    NotUnitary,
    NormViolation,
    UnownedQubit,
    NotOwner,
    BasisArity,
    SelfSend,
    DivisionByZero,
    InvalidArgument,
    ConfigParse,
    InvariantBreach,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownQubit: return "UnknownQubit";
    case ErrorKind::SameQubit: return "SameQubit";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NormViolation: return "NormViolation";
    case ErrorKind::UnownedQubit: return "UnownedQubit";
    case ErrorKind::NotOwner: return "NotOwner";
    case ErrorKind::BasisArity: return "BasisArity";
    case ErrorKind::SelfSend: return "SelfSend";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::InvariantBreach: return "InvariantBreach";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class QosError : public std::runtime_error {
  public:
    QosError(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Configuration problems name the offending field.
class ConfigError : public QosError {
  public:
    ConfigError(std::string field, const std::string &message)
        : QosError(ErrorKind::ConfigParse, field + ": " + message),
          field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
    throw QosError(kind, message);
}

} // namespace qos
