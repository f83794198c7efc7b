#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace actdis {

/// UTC instant with one-second resolution.
using Timestamp = std::chrono::sys_seconds;

inline constexpr std::int64_t kMinute = 60;
inline constexpr std::int64_t kHour = 3600;
inline constexpr std::int64_t kDay = 86400;

inline std::int64_t epoch_seconds(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_epoch_seconds(std::int64_t s) { return Timestamp{std::chrono::seconds{s}}; }

/// Accepts `YYYY-MM-DDTHH:MM[:SS]` with an optional `Z` or `+00:00` suffix;
/// a space may replace the `T`. Throws Error(MalformedCsv) otherwise.
Timestamp parse_timestamp(std::string_view text);

/// Always `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp t);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

std::vector<std::string_view> split_csv_line(std::string_view line);
std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace actdis
