#include "actdis/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "actdis/error.hpp"
#include "actdis/log.hpp"

namespace actdis {

namespace {

struct CsvRows {
  std::vector<std::string> header;
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvRows read_csv(std::string_view text) {
  CsvRows out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (trim(line).empty()) {
      if (nl == text.size()) break;
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      for (auto c : cells) out.header.emplace_back(c);
      have_header = true;
    } else {
      out.rows.push_back(std::move(cells));
      out.line_numbers.push_back(line_no);
    }
    if (nl == text.size()) break;
  }
  if (!have_header) throw Error(ErrorCode::MissingHeader, "empty file");
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void require_timestamp_header(const CsvRows& csv) {
  if (csv.header.empty() || lower(csv.header.front()) != "timestamp")
    throw Error(ErrorCode::MissingHeader, "first column must be 'timestamp'");
  if (csv.header.size() < 2) throw Error(ErrorCode::MissingHeader, "no data columns");
}

// Validates ordering and returns the parsed timestamps.
std::vector<Timestamp> ordered_timestamps(const CsvRows& csv) {
  std::vector<Timestamp> ts;
  ts.reserve(csv.rows.size());
  std::set<Timestamp> seen;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const Timestamp t = parse_timestamp(csv.rows[i].front());
    if (epoch_seconds(t) % kMinute != 0)
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(csv.line_numbers[i]) + ": timestamp not minute-aligned");
    if (!seen.insert(t).second)
      throw Error(ErrorCode::DuplicateTimestamp, "line " + std::to_string(csv.line_numbers[i]) + ": " + format_timestamp(t));
    if (!ts.empty() && t < ts.back())
      throw Error(ErrorCode::NonMonotoneTimestamps, "line " + std::to_string(csv.line_numbers[i]) + ": " + format_timestamp(t));
    ts.push_back(t);
  }
  return ts;
}

std::size_t minute_index(Timestamp start, Timestamp t) {
  return static_cast<std::size_t>((epoch_seconds(t) - epoch_seconds(start)) / kMinute);
}

// Interpolates runs of unobserved rows no longer than max_gap between two
// observed rows. `get`/`set` address one scalar lane.
template <typename Get, typename Set>
void interpolate_runs(const std::vector<std::uint8_t>& observed, int max_gap, Get get, Set set) {
  const std::size_t n = observed.size();
  std::size_t i = 0;
  while (i < n && !observed[i]) ++i;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && !observed[j]) ++j;
    if (j >= n) break;
    const std::size_t gap = j - i - 1;
    if (gap > 0 && gap <= static_cast<std::size_t>(max_gap)) {
      const double a = get(i);
      const double b = get(j);
      for (std::size_t k = i + 1; k < j; ++k) {
        const double f = static_cast<double>(k - i) / static_cast<double>(j - i);
        set(k, a + (b - a) * f);
      }
    }
    i = j;
  }
}

}  // namespace

double accurate_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::optional<std::size_t> LoadTable::column_index(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return c;
  return std::nullopt;
}

std::vector<double> LoadTable::column(std::size_t col) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, col);
  return out;
}

// ---------------------------------------------------------------- ActivityMap

ActivityMap::ActivityMap(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidActivityMap, "no activities");
  std::set<std::string> activities;
  std::map<std::string, std::string> owner;
  for (const auto& [activity, appliances] : entries_) {
    if (activity.empty()) throw Error(ErrorCode::InvalidActivityMap, "empty activity name");
    if (activity == "unmapped") throw Error(ErrorCode::InvalidActivityMap, "'unmapped' is reserved");
    if (!activities.insert(activity).second)
      throw Error(ErrorCode::InvalidActivityMap, "duplicate activity '" + activity + "'");
    if (appliances.empty()) throw Error(ErrorCode::InvalidActivityMap, "activity '" + activity + "' has no appliances");
    for (const auto& a : appliances) {
      auto [it, inserted] = owner.emplace(a, activity);
      if (!inserted)
        throw Error(ErrorCode::InvalidActivityMap,
                    "appliance '" + a + "' mapped to both '" + it->second + "' and '" + activity + "'");
    }
  }
}

ActivityMap ActivityMap::from_json(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidActivityMap, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidActivityMap, "expected a JSON object");
  std::vector<Entry> entries;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array()) throw Error(ErrorCode::InvalidActivityMap, "'" + key + "' must map to an array");
    std::vector<std::string> appliances;
    for (const auto& v : value) {
      if (!v.is_string()) throw Error(ErrorCode::InvalidActivityMap, "appliance names must be strings");
      appliances.push_back(v.get<std::string>());
    }
    entries.emplace_back(key, std::move(appliances));
  }
  return ActivityMap(std::move(entries));
}

ActivityMap ActivityMap::load(const std::filesystem::path& path) { return from_json(read_file(path)); }

ActivityMap ActivityMap::default_map() {
  return ActivityMap({
      {"sleeping", {"bedroom_lights"}},
      {"grooming", {"hair_dryer", "bathroom_lights"}},
      {"food-preparing", {"oven", "microwave"}},
      {"dish-washing", {"dishwasher"}},
      {"laundry", {"washer", "dryer"}},
      {"cooling-heating", {"furnace", "compressor"}},
  });
}

std::string ActivityMap::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [activity, appliances] : entries_) doc[activity] = appliances;
  return doc.dump(2) + "\n";
}

std::optional<std::string> ActivityMap::activity_of(std::string_view appliance) const {
  for (const auto& [activity, appliances] : entries_)
    if (std::find(appliances.begin(), appliances.end(), appliance) != appliances.end()) return activity;
  return std::nullopt;
}

std::vector<std::string> ActivityMap::activity_names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

// ------------------------------------------------------------------- load CSV

LoadTable parse_load_csv(const std::filesystem::path& path) {
  return parse_load_csv_text(read_file(path), path.stem().string());
}

LoadTable parse_load_csv_text(std::string_view text, std::string consumer_id) {
  const CsvRows csv = read_csv(text);
  require_timestamp_header(csv);
  if (csv.rows.empty()) throw Error(ErrorCode::MalformedCsv, "no data rows");

  std::optional<std::size_t> aggregate_col;
  LoadTable table;
  table.consumer_id = std::move(consumer_id);
  std::vector<std::size_t> appliance_cols;
  for (std::size_t c = 1; c < csv.header.size(); ++c) {
    if (csv.header[c] == "aggregate") {
      aggregate_col = c;
    } else {
      table.columns.push_back(csv.header[c]);
      appliance_cols.push_back(c);
    }
  }
  table.aggregate_metered = aggregate_col.has_value();

  const auto ts = ordered_timestamps(csv);
  table.start = ts.front();
  const std::size_t n = minute_index(ts.front(), ts.back()) + 1;
  const std::size_t k = table.cols();
  table.values.assign(n * k, 0.0);
  table.aggregate.assign(n, 0.0);
  table.observed.assign(n, 0);

  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const std::string where = "line " + std::to_string(csv.line_numbers[i]);
    if (row.size() != csv.header.size())
      throw Error(ErrorCode::MalformedCsv, where + ": expected " + std::to_string(csv.header.size()) + " cells");
    auto cell = [&](std::size_t c) {
      double v = 0.0;
      try {
        v = parse_double(row[c]);
      } catch (const Error&) {
        throw Error(ErrorCode::MalformedCsv, where + ": bad number '" + std::string(row[c]) + "'");
      }
      if (!std::isfinite(v)) throw Error(ErrorCode::MalformedCsv, where + ": non-finite value");
      if (v < 0.0) throw Error(ErrorCode::NegativePower, where + " (data row " + std::to_string(i + 1) + "), column " + csv.header[c]);
      return v;
    };
    const std::size_t r = minute_index(table.start, ts[i]);
    for (std::size_t j = 0; j < k; ++j) table.values[r * k + j] = cell(appliance_cols[j]);
    if (aggregate_col) {
      table.aggregate[r] = cell(*aggregate_col);
    } else {
      table.aggregate[r] = accurate_sum(std::span<const double>(table.values).subspan(r * k, k));
    }
    table.observed[r] = 1;
  }
  return table;
}

std::string format_load_csv(const LoadTable& table) {
  std::string out = "timestamp";
  for (const auto& c : table.columns) out += "," + c;
  if (table.aggregate_metered) out += ",aggregate";
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    if (!table.observed[r]) continue;
    out += format_timestamp(table.time_at(r));
    for (std::size_t c = 0; c < table.cols(); ++c) {
      out += ',';
      out += format_double(table.at(r, c));
    }
    if (table.aggregate_metered) {
      out += ',';
      out += format_double(table.aggregate[r]);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- weather CSV

TemperatureSeries parse_weather_csv(const std::filesystem::path& path) { return parse_weather_csv_text(read_file(path)); }

TemperatureSeries parse_weather_csv_text(std::string_view text) {
  const CsvRows csv = read_csv(text);
  require_timestamp_header(csv);
  std::size_t temp_col = 0;
  for (std::size_t c = 1; c < csv.header.size(); ++c)
    if (lower(csv.header[c]) == "temperature_c") temp_col = c;
  if (temp_col == 0) throw Error(ErrorCode::MissingHeader, "weather file needs a 'temperature_c' column");
  if (csv.rows.empty()) throw Error(ErrorCode::MalformedCsv, "no data rows");

  const auto ts = ordered_timestamps(csv);
  std::int64_t step = kHour;
  for (std::size_t i = 1; i < ts.size(); ++i) step = std::min(step, epoch_seconds(ts[i]) - epoch_seconds(ts[i - 1]));
  if (kHour % step != 0) throw Error(ErrorCode::MalformedCsv, "weather step must divide one hour");

  TemperatureSeries out;
  out.start = ts.front();
  out.step_seconds = step;
  const std::size_t n = static_cast<std::size_t>((epoch_seconds(ts.back()) - epoch_seconds(ts.front())) / step) + 1;
  out.values.assign(n, 0.0);
  out.observed.assign(n, 0);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto off = epoch_seconds(ts[i]) - epoch_seconds(out.start);
    if (off % step != 0)
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(csv.line_numbers[i]) + ": off the weather grid");
    if (csv.rows[i].size() != csv.header.size())
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(csv.line_numbers[i]) + ": wrong cell count");
    const double v = parse_double(csv.rows[i][temp_col]);
    if (!std::isfinite(v)) throw Error(ErrorCode::MalformedCsv, "non-finite temperature");
    const auto idx = static_cast<std::size_t>(off / step);
    out.values[idx] = v;
    out.observed[idx] = 1;
  }
  return out;
}

std::string format_weather_csv(const TemperatureSeries& temps) {
  std::string out = "timestamp,temperature_c\n";
  for (std::size_t i = 0; i < temps.size(); ++i) {
    if (!temps.observed[i]) continue;
    out += format_timestamp(temps.start + std::chrono::seconds{static_cast<std::int64_t>(i) * temps.step_seconds});
    out += ',';
    out += format_double(temps.values[i]);
    out += '\n';
  }
  return out;
}

// ------------------------------------------------------------------ alignment

LoadTable fill_gaps(const LoadTable& load, int max_gap_minutes) {
  if (max_gap_minutes < 0) throw Error(ErrorCode::InvalidArgument, "max_gap must be >= 0");
  LoadTable out = load;
  const std::size_t k = out.cols();
  for (std::size_t c = 0; c < k; ++c) {
    interpolate_runs(
        load.observed, max_gap_minutes, [&](std::size_t r) { return load.values[r * k + c]; },
        [&](std::size_t r, double v) { out.values[r * k + c] = v; });
  }
  interpolate_runs(
      load.observed, max_gap_minutes, [&](std::size_t r) { return load.aggregate[r]; },
      [&](std::size_t r, double v) {
        out.aggregate[r] = v;
        out.observed[r] = 1;
      });
  return out;
}

AlignedData align_and_fill(const LoadTable& load, const TemperatureSeries& temps, int max_gap_minutes) {
  if (load.rows() == 0 || temps.size() == 0) throw Error(ErrorCode::NoOverlap, "empty series");
  if (epoch_seconds(temps.start) % kMinute != 0 || temps.step_seconds % kMinute != 0)
    throw Error(ErrorCode::InvalidArgument, "weather timestamps must be minute-aligned");

  const LoadTable filled = fill_gaps(load, max_gap_minutes);
  const std::int64_t load_end = epoch_seconds(load.time_at(load.rows() - 1));
  const std::int64_t temp_end =
      epoch_seconds(temps.start) + static_cast<std::int64_t>(temps.size() - 1) * temps.step_seconds;
  const std::int64_t lo = std::max(epoch_seconds(load.start), epoch_seconds(temps.start));
  const std::int64_t hi = std::min(load_end, temp_end);
  if (hi < lo || (hi - lo) / kMinute + 1 < static_cast<std::int64_t>(kWindowMinutes))
    throw Error(ErrorCode::NoOverlap, "load and weather share less than one hour");

  const std::size_t first = minute_index(load.start, from_epoch_seconds(lo));
  const std::size_t n = static_cast<std::size_t>((hi - lo) / kMinute) + 1;
  const std::size_t k = load.cols();

  AlignedData out;
  LoadTable& l = out.load;
  l.consumer_id = load.consumer_id;
  l.start = from_epoch_seconds(lo);
  l.columns = load.columns;
  l.aggregate_metered = load.aggregate_metered;
  l.values.assign(filled.values.begin() + static_cast<std::ptrdiff_t>(first * k),
                  filled.values.begin() + static_cast<std::ptrdiff_t>((first + n) * k));
  l.aggregate.assign(filled.aggregate.begin() + static_cast<std::ptrdiff_t>(first),
                     filled.aggregate.begin() + static_cast<std::ptrdiff_t>(first + n));
  l.observed.assign(filled.observed.begin() + static_cast<std::ptrdiff_t>(first),
                    filled.observed.begin() + static_cast<std::ptrdiff_t>(first + n));

  // Temperature onto the minute grid: bracket each minute by observed
  // samples, interpolate when they are at most step + max_gap apart.
  TemperatureSeries& t = out.temperature;
  t.start = l.start;
  t.step_seconds = kMinute;
  t.values.assign(n, 0.0);
  t.observed.assign(n, 0);
  std::vector<std::size_t> obs_idx;
  for (std::size_t i = 0; i < temps.size(); ++i)
    if (temps.observed[i]) obs_idx.push_back(i);
  const std::int64_t t0 = epoch_seconds(temps.start);
  const std::int64_t reach = temps.step_seconds + static_cast<std::int64_t>(max_gap_minutes) * kMinute;
  std::size_t cursor = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const std::int64_t now = lo + static_cast<std::int64_t>(m) * kMinute;
    while (cursor + 1 < obs_idx.size() && t0 + static_cast<std::int64_t>(obs_idx[cursor + 1]) * temps.step_seconds <= now)
      ++cursor;
    if (obs_idx.empty()) break;
    const std::int64_t ta = t0 + static_cast<std::int64_t>(obs_idx[cursor]) * temps.step_seconds;
    if (ta == now) {
      t.values[m] = temps.values[obs_idx[cursor]];
      t.observed[m] = 1;
    } else if (ta < now && cursor + 1 < obs_idx.size()) {
      const std::int64_t tb = t0 + static_cast<std::int64_t>(obs_idx[cursor + 1]) * temps.step_seconds;
      if (tb - ta <= reach) {
        const double f = static_cast<double>(now - ta) / static_cast<double>(tb - ta);
        const double a = temps.values[obs_idx[cursor]];
        const double b = temps.values[obs_idx[cursor + 1]];
        t.values[m] = a + (b - a) * f;
        t.observed[m] = 1;
      }
    }
  }

  if (hour_windows(l, &t).empty()) throw Error(ErrorCode::AllGaps, "no complete gap-free hour remains");
  return out;
}

// ------------------------------------------------------------------- bundling

LoadTable bundle_activities(const LoadTable& load, const ActivityMap& map) {
  const auto& entries = map.entries();
  std::vector<std::vector<std::size_t>> members(entries.size());
  std::vector<std::uint8_t> mapped(load.cols(), 0);
  for (std::size_t a = 0; a < entries.size(); ++a) {
    for (const auto& appliance : entries[a].second) {
      const auto idx = load.column_index(appliance);
      if (!idx) throw Error(ErrorCode::UnknownAppliance, "'" + appliance + "' (activity '" + entries[a].first + "')");
      members[a].push_back(*idx);
      mapped[*idx] = 1;
    }
  }
  std::vector<std::size_t> unmapped;
  for (std::size_t c = 0; c < load.cols(); ++c)
    if (!mapped[c]) unmapped.push_back(c);

  LoadTable out;
  out.consumer_id = load.consumer_id;
  out.start = load.start;
  out.columns = map.activity_names();
  if (!unmapped.empty()) {
    out.columns.emplace_back("unmapped");
    members.push_back(unmapped);
  }
  out.aggregate = load.aggregate;
  out.observed = load.observed;
  out.aggregate_metered = load.aggregate_metered;
  const std::size_t k = out.cols();
  out.values.assign(load.rows() * k, 0.0);
  for (std::size_t r = 0; r < load.rows(); ++r)
    for (std::size_t a = 0; a < k; ++a) {
      double s = 0.0;
      for (std::size_t c : members[a]) s += load.at(r, c);
      out.values[r * k + a] = s;
    }
  return out;
}

// ------------------------------------------------------------------- windows

std::vector<Window> hour_windows(const LoadTable& load, const TemperatureSeries* temps) {
  if (temps && (temps->step_seconds != kMinute || temps->start != load.start || temps->size() != load.rows()))
    throw Error(ErrorCode::GridMismatch, "temperature series must share the load grid");
  std::vector<Window> out;
  const std::int64_t s = epoch_seconds(load.start);
  const std::int64_t first_hour = (s % kHour == 0) ? s : s + (kHour - ((s % kHour) + kHour) % kHour);
  for (std::size_t off = static_cast<std::size_t>((first_hour - s) / kMinute); off + kWindowMinutes <= load.rows();
       off += kWindowMinutes) {
    bool ok = true;
    for (std::size_t m = off; m < off + kWindowMinutes && ok; ++m)
      ok = load.observed[m] && (!temps || temps->observed[m]);
    if (ok) out.push_back({load.time_at(off), off});
  }
  return out;
}

LabelSeries window_labels(std::string activity, std::span<const double> minute_power, Timestamp start,
                          double threshold_kw, std::span<const std::uint8_t> observed) {
  if (!(threshold_kw >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be >= 0");
  if (!observed.empty() && observed.size() != minute_power.size())
    throw Error(ErrorCode::DimensionMismatch, "observed mask length differs from series");
  if (epoch_seconds(start) % kMinute != 0) throw Error(ErrorCode::InvalidArgument, "series start not minute-aligned");

  LabelSeries out;
  out.activity = std::move(activity);
  const std::int64_t s = epoch_seconds(start);
  const std::size_t lead = static_cast<std::size_t>((((kHour - s % kHour) % kHour) + kHour) % kHour / kMinute);
  if (lead > 0 && lead < minute_power.size()) warn("leading partial hour dropped (" + std::to_string(lead) + " min)");
  std::size_t off = lead;
  for (; off + kWindowMinutes <= minute_power.size(); off += kWindowMinutes) {
    const auto window = minute_power.subspan(off, kWindowMinutes);
    if (!observed.empty() &&
        !std::all_of(observed.begin() + static_cast<std::ptrdiff_t>(off),
                     observed.begin() + static_cast<std::ptrdiff_t>(off + kWindowMinutes), [](auto v) { return v != 0; }))
      continue;
    const double mean = accurate_sum(window) / static_cast<double>(kWindowMinutes);
    out.window_start.push_back(start + std::chrono::seconds{static_cast<std::int64_t>(off) * kMinute});
    out.labels.push_back(mean > threshold_kw ? Label::Active : Label::Inactive);
  }
  if (off < minute_power.size())
    warn("IncompleteWindow: trailing partial hour dropped (" + std::to_string(minute_power.size() - off) + " min)");
  return out;
}

LabelSeries label_column(const LoadTable& table, std::string_view column, double threshold_kw) {
  const auto idx = table.column_index(column);
  if (!idx) throw Error(ErrorCode::UnknownAppliance, "no column '" + std::string(column) + "'");
  const auto series = table.column(*idx);
  return window_labels(std::string(column), series, table.start, threshold_kw, table.observed);
}

// ----------------------------------------------------------------- label CSV

std::string format_labels_csv(std::span<const LabelSeries> series) {
  if (series.empty()) throw Error(ErrorCode::InvalidArgument, "no label series");
  for (const auto& s : series)
    if (s.window_start != series.front().window_start) throw Error(ErrorCode::GridMismatch, "label series grids differ");
  std::string out = "timestamp";
  for (const auto& s : series) out += "," + s.activity;
  out += '\n';
  for (std::size_t i = 0; i < series.front().size(); ++i) {
    out += format_timestamp(series.front().window_start[i]);
    for (const auto& s : series) out += s.labels[i] == Label::Active ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::vector<LabelSeries> parse_labels_csv_text(std::string_view text) {
  const CsvRows csv = read_csv(text);
  require_timestamp_header(csv);
  std::vector<LabelSeries> out(csv.header.size() - 1);
  for (std::size_t c = 1; c < csv.header.size(); ++c) out[c - 1].activity = csv.header[c];
  std::optional<Timestamp> prev;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const std::string where = "line " + std::to_string(csv.line_numbers[i]);
    if (row.size() != csv.header.size()) throw Error(ErrorCode::MalformedCsv, where + ": wrong cell count");
    const Timestamp t = parse_timestamp(row.front());
    if (epoch_seconds(t) % kHour != 0) throw Error(ErrorCode::MalformedCsv, where + ": window start not hour-aligned");
    if (prev && t == *prev) throw Error(ErrorCode::DuplicateTimestamp, where);
    if (prev && t < *prev) throw Error(ErrorCode::NonMonotoneTimestamps, where);
    prev = t;
    for (std::size_t c = 1; c < row.size(); ++c) {
      Label l;
      if (row[c] == "1" || row[c] == "active")
        l = Label::Active;
      else if (row[c] == "0" || row[c] == "inactive")
        l = Label::Inactive;
      else
        throw Error(ErrorCode::MalformedCsv, where + ": label must be 0 or 1");
      out[c - 1].window_start.push_back(t);
      out[c - 1].labels.push_back(l);
    }
  }
  return out;
}

std::vector<LabelSeries> parse_labels_csv(const std::filesystem::path& path) {
  return parse_labels_csv_text(read_file(path));
}

}  // namespace actdis
