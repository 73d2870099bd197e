#pragma once

#include <gmpxx.h>

#include <string>

namespace sqrtsum {

/// Parses a decimal literal ("0.25", "-1.2e-4", "11075") into an exact
/// rational. Throws std::invalid_argument with the offending position.
mpq_class parse_decimal(const std::string& text);

/// Renders q with the given number of significant digits, rounding half up
/// in magnitude. Uses positional notation when the exponent is small
/// (printf %g style), scientific notation otherwise.
std::string format_decimal(const mpq_class& q, int significant_digits);

/// Like format_decimal but rounds the magnitude up, so the printed value is
/// an upper bound of |q|. Used for enclosure radii.
std::string format_decimal_magnitude_up(const mpq_class& q,
                                        int significant_digits);

}  // namespace sqrtsum
