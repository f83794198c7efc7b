#pragma once

// Load and weather ingestion: CSV parsing, minute-grid alignment with gap
// filling, appliance-to-activity bundling and per-hour ground-truth labels.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "actdis/util.hpp"

namespace actdis {

inline constexpr std::size_t kWindowMinutes = 60;
inline constexpr double kDefaultLabelThresholdKw = 0.05;
inline constexpr int kDefaultMaxGapMinutes = 5;

/// Minute-resolution power table for one consumer. Rows form a dense grid
/// starting at `start`; rows whose `observed` flag is 0 carry no data (their
/// values are stored as 0) and make the enclosing window unusable.
struct LoadTable {
  std::string consumer_id;
  Timestamp start{};
  std::vector<std::string> columns;
  std::vector<double> values;  // row-major, rows() x cols()
  std::vector<double> aggregate;
  std::vector<std::uint8_t> observed;
  bool aggregate_metered = false;

  std::size_t rows() const { return aggregate.size(); }
  std::size_t cols() const { return columns.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  Timestamp time_at(std::size_t row) const {
    return start + std::chrono::seconds{static_cast<std::int64_t>(row) * kMinute};
  }
  std::optional<std::size_t> column_index(std::string_view name) const;
  std::vector<double> column(std::size_t col) const;
};

struct TemperatureSeries {
  Timestamp start{};
  std::int64_t step_seconds = kMinute;
  std::vector<double> values;  // degrees C
  std::vector<std::uint8_t> observed;

  std::size_t size() const { return values.size(); }
};

/// Activity name -> appliance columns. Each appliance belongs to at most one
/// activity; entries keep their insertion order.
class ActivityMap {
 public:
  using Entry = std::pair<std::string, std::vector<std::string>>;

  explicit ActivityMap(std::vector<Entry> entries);

  static ActivityMap from_json(std::string_view json_text);
  static ActivityMap load(const std::filesystem::path& path);
  /// Sleeping, grooming, food-preparing, dish-washing, laundry and cooling-heating.
  static ActivityMap default_map();

  std::string to_json() const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<std::string> activity_of(std::string_view appliance) const;
  std::vector<std::string> activity_names() const;

 private:
  std::vector<Entry> entries_;
};

enum class Label : std::uint8_t { Inactive = 0, Active = 1 };

inline int to_sign(Label l) { return l == Label::Active ? 1 : -1; }

/// One label per usable clock-hour window.
struct LabelSeries {
  std::string activity;
  std::vector<Timestamp> window_start;
  std::vector<Label> labels;

  std::size_t size() const { return labels.size(); }
};

/// A complete, fully observed clock-hour window of a LoadTable.
struct Window {
  Timestamp start{};
  std::size_t offset = 0;  // first row in the table
};

LoadTable parse_load_csv(const std::filesystem::path& path);
LoadTable parse_load_csv_text(std::string_view text, std::string consumer_id = {});
/// Writes observed rows only; the `aggregate` column is emitted when metered.
std::string format_load_csv(const LoadTable& table);

TemperatureSeries parse_weather_csv(const std::filesystem::path& path);
TemperatureSeries parse_weather_csv_text(std::string_view text);
std::string format_weather_csv(const TemperatureSeries& temps);

/// Linearly interpolates internal gaps of at most `max_gap` minutes.
LoadTable fill_gaps(const LoadTable& load, int max_gap_minutes = kDefaultMaxGapMinutes);

struct AlignedData {
  LoadTable load;
  TemperatureSeries temperature;  // same start and length as load, 60 s step
};

/// Restricts both series to their common span on the minute grid, filling
/// short gaps. Throws NoOverlap when less than an hour is shared and AllGaps
/// when no usable window survives.
AlignedData align_and_fill(const LoadTable& load, const TemperatureSeries& temps,
                           int max_gap_minutes = kDefaultMaxGapMinutes);

/// One column per activity (sum of its appliances), followed by an
/// `unmapped` column when some appliance columns belong to no activity.
LoadTable bundle_activities(const LoadTable& load, const ActivityMap& map);

/// Complete clock-hour windows in which every minute is observed (and, when
/// given, every minute of `temps` too; `temps` must share the load grid).
std::vector<Window> hour_windows(const LoadTable& load, const TemperatureSeries* temps = nullptr);

/// Active iff the window mean is strictly greater than `threshold_kw`.
LabelSeries window_labels(std::string activity, std::span<const double> minute_power, Timestamp start,
                          double threshold_kw = kDefaultLabelThresholdKw,
                          std::span<const std::uint8_t> observed = {});

/// Labels for one column of a (bundled) table.
LabelSeries label_column(const LoadTable& table, std::string_view column,
                         double threshold_kw = kDefaultLabelThresholdKw);

/// `timestamp,<activity>...` with 0/1 cells; every series must share one grid.
std::string format_labels_csv(std::span<const LabelSeries> series);
std::vector<LabelSeries> parse_labels_csv_text(std::string_view text);
std::vector<LabelSeries> parse_labels_csv(const std::filesystem::path& path);

/// Compensated (Neumaier) summation.
double accurate_sum(std::span<const double> xs);

}  // namespace actdis
