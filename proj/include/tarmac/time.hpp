#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace tarmac {

// All timestamps are UTC with one-second resolution.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;
using Minutes = std::chrono::minutes;

// Parses "YYYY-MM-DDTHH:MM:SS" with an optional trailing 'Z' or a "+HH:MM" /
// "-HH:MM" offset, which is folded into UTC. Throws SchemaError.
Timestamp parse_iso8601(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

std::int64_t epoch_seconds(Timestamp t);
Timestamp from_epoch_seconds(std::int64_t s);

// Civil-day number (days since 1970-01-01) of the UTC date.
std::int64_t utc_day(Timestamp t);

// Minutes elapsed since UTC midnight, in [0, 1440).
double minutes_since_midnight(Timestamp t);

// 0 = Monday ... 6 = Sunday.
int day_of_week(Timestamp t);

}  // namespace tarmac
