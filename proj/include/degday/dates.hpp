#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace degday {

// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Returns nullopt on any
// syntactic or calendar violation (e.g. 2011-02-30).
std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text);

std::string format_iso_date(std::chrono::sys_days day);

// Whole days from epoch to day (negative when day precedes epoch).
inline double day_offset(std::chrono::sys_days epoch, std::chrono::sys_days day) {
  return static_cast<double>((day - epoch).count());
}

}  // namespace degday
