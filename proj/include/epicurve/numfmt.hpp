#pragma once

#include <string>

namespace epicurve {

// Locale-independent decimal formatting helpers.

/// Shortest-general form with at most `digits` significant digits ("%.Ng").
std::string format_general(double value, int digits = 12);

/// Fixed-point with `decimals` digits after the point; "-0.00" is normalized to "0.00".
std::string format_fixed(double value, int decimals);

/// Parses a decimal number; the entire string must be consumed.
bool parse_double(const std::string& text, double& out);

} // namespace epicurve
