#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fracstab {

/// Shortest decimal string that parses back to exactly `value`.
/// Non-finite values print as "nan", "inf" or "-inf".
std::string format_double(double value);

/// Strict full-string parse of a real number; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

}  // namespace fracstab
