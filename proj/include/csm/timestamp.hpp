#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace csm {

/// Epoch milliseconds, UTC. All durations are integer milliseconds as well.
using Millis = std::int64_t;

inline constexpr Millis kMillisPerSecond = 1000;
inline constexpr Millis kMillisPerMinute = 60 * kMillisPerSecond;
inline constexpr Millis kMillisPerHour = 60 * kMillisPerMinute;
inline constexpr Millis kMillisPerDay = 24 * kMillisPerHour;

/// Accepts `YYYY-MM-DD`, optionally followed by `T` or a space and
/// `hh:mm[:ss[.fff...]]`, optionally followed by `Z` or a `±hh[:]mm` offset.
/// A missing offset means UTC. Throws std::invalid_argument on malformed input.
Millis parse_iso8601(std::string_view text);

/// `YYYY-MM-DDThh:mm:ss.fffZ`
std::string format_iso8601(Millis t);

/// Human-readable duration in the largest unit that keeps at least one whole
/// unit: "4d", "2.5h", "30m", "12s", "250ms".
std::string format_duration(Millis d);

}  // namespace csm
