#include "epicurve/numfmt.hpp"

#include "epicurve/error.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace epicurve {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::IntegrationFault: return "integration-fault";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateSeries: return "degenerate-series";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::NoCases: return "no-cases";
    case ErrorKind::InvalidCount: return "invalid-count";
    case ErrorKind::NonpositiveOnLog: return "nonpositive-on-log";
    case ErrorKind::NoData: return "no-data";
    }
    return "unknown";
}

std::string format_general(double value, int digits)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, digits);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf.data(), end);
}

std::string format_fixed(double value, int decimals)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed, decimals);
    if (ec != std::errc{})
        return "nan";
    std::string out(buf.data(), end);
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos)
        out.erase(0, 1);
    return out;
}

bool parse_double(const std::string& text, double& out)
{
    if (text.empty())
        return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

} // namespace epicurve
