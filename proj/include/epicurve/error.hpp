#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epicurve {

enum class ErrorKind {
    InvalidParams,
    InvalidState,
    IntegrationFault,
    InsufficientData,
    DegenerateSeries,
    Parse,
    Consistency,
    NoCases,
    InvalidCount,
    NonpositiveOnLog,
    NoData,
};

std::string_view to_string(ErrorKind kind);

/// All library failures are reported through this exception; `kind()` tells
/// callers (the CLI in particular) which class of failure occurred.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

} // namespace epicurve
