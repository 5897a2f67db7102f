#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace bimnav
{

using Timestamp = std::chrono::sys_seconds;

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DDThh:mm[:ss][.fff][Z|+hh:mm|-hh:mm]`.
/// Fractional seconds are truncated. Throws ParseError.
Timestamp parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDThh:mm:ssZ`.
std::string format_iso8601(Timestamp t);

constexpr std::chrono::seconds days(long n) {return std::chrono::seconds(n * 86400L);}

}  // namespace bimnav
