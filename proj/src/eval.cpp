#include "actdis/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "actdis/error.hpp"
#include "actdis/log.hpp"

namespace actdis {

SplitIndices split(std::size_t n, const SplitFractions& f) {
  if (f.train < 0 || f.val < 0 || f.test < 0 || std::abs(f.train + f.val + f.test - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "split fractions must be non-negative and sum to 1");
  if (n < 10) throw Error(ErrorCode::TooFewWindows, "need at least 10 windows, have " + std::to_string(n));
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.train + 1e-9));
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.val + 1e-9));
  SplitIndices s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train)
      s.train.push_back(i);
    else if (i < n_train + n_val)
      s.val.push_back(i);
    else
      s.test.push_back(i);
  }
  return s;
}

ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> pred) {
  if (truth.size() != pred.size()) throw Error(ErrorCode::TimestampMismatch, "label sequences differ in length");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == Label::Active;
    const bool p = pred[i] == Label::Active;
    if (t && p) ++c.tp;
    else if (!t && !p) ++c.tn;
    else if (p) ++c.fp;
    else ++c.fn;
  }
  return c;
}

ConfusionCounts confusion(const LabelSeries& truth, const LabelSeries& pred) {
  if (truth.window_start != pred.window_start)
    throw Error(ErrorCode::TimestampMismatch, "truth and prediction cover different windows");
  return confusion(truth.labels, pred.labels);
}

MetricsReport metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error(ErrorCode::EmptyCounts, "no evaluated windows");
  MetricsReport r;
  r.counts = c;
  r.accuracy = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp > 0) r.precision = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) r.recall = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return r;
}

std::vector<MethodResult> ablation_run(std::span<const WindowFeatures> windows, std::span<const Label> labels,
                                       const AblationOptions& options) {
  if (labels.size() != windows.size()) throw Error(ErrorCode::DimensionMismatch, "labels not parallel to windows");
  const SplitIndices parts = split(windows.size(), options.fractions);
  if (parts.test.empty()) throw Error(ErrorCode::TooFewWindows, "empty test split");

  const bool have_temp =
      std::all_of(windows.begin(), windows.end(), [](const WindowFeatures& w) { return w.temperature.has_value(); });
  std::vector<Method> methods;
  for (Method m : options.methods) {
    if (m == Method::M4 && !have_temp) {
      warn("MissingTemperature: no weather data, skipping M4");
      continue;
    }
    methods.push_back(m);
  }

  std::vector<MethodResult> results(methods.size());
  const auto n = static_cast<std::ptrdiff_t>(methods.size());
  // Each method is independent and deterministic; errors are re-thrown in order.
  std::vector<std::exception_ptr> errors(methods.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      const FeatureMatrix all = assemble(windows, labels, methods[idx], options.features);
      const FeatureMatrix train_raw = select_rows(all, parts.train);
      const FeatureMatrix train_std = standardize(train_raw);
      const FeatureMatrix test_raw = select_rows(all, parts.test);
      MethodResult r;
      r.method = methods[idx];
      r.model = train(train_std, options.hp);
      r.model.feature_options = options.features;
      const auto pred = predict_all(r.model, test_raw);
      r.report = metrics(confusion(test_raw.labels, pred));
      results[idx] = std::move(r);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

namespace {

std::string pct(const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); }

}  // namespace

std::string format_metrics_csv(std::span<const std::pair<std::string, MetricsReport>> rows) {
  std::string out = "method,accuracy_pct,precision_pct,recall_pct\n";
  for (const auto& [name, r] : rows)
    out += name + "," + format_double(r.accuracy) + "," + pct(r.precision) + "," + pct(r.recall) + "\n";
  return out;
}

std::string format_metrics_csv(std::span<const MethodResult> results) {
  std::vector<std::pair<std::string, MetricsReport>> rows;
  for (const auto& r : results) rows.emplace_back(std::string(to_string(r.method)), r.report);
  return format_metrics_csv(rows);
}

std::vector<TimelineRow> timeline(const LabelSeries* truth, const LabelSeries& pred, std::span<const double> load_kwh) {
  if (load_kwh.size() != pred.size()) throw Error(ErrorCode::TimestampMismatch, "load and predictions differ in length");
  if (truth && truth->window_start != pred.window_start)
    throw Error(ErrorCode::TimestampMismatch, "truth and prediction cover different windows");
  std::vector<TimelineRow> rows;
  rows.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    TimelineRow r;
    r.hour = static_cast<std::size_t>((epoch_seconds(pred.window_start[i]) - epoch_seconds(pred.window_start.front())) / kHour);
    r.load_kwh = load_kwh[i];
    r.pred = pred.labels[i];
    if (truth) {
      r.truth = truth->labels[i];
      if (r.pred == Label::Active && *r.truth == Label::Inactive) r.flag = "FP";
      if (r.pred == Label::Inactive && *r.truth == Label::Active) r.flag = "FN";
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_timeline_csv(std::span<const TimelineRow> rows) {
  std::string out = "hour,load_kwh,truth,pred,flag\n";
  for (const auto& r : rows) {
    out += std::to_string(r.hour) + "," + format_double(r.load_kwh) + ",";
    out += r.truth ? (*r.truth == Label::Active ? "1" : "0") : "NA";
    out += r.pred == Label::Active ? ",1," : ",0,";
    out += r.flag + "\n";
  }
  return out;
}

std::vector<TimelineRow> parse_timeline_csv_text(std::string_view text) {
  std::vector<TimelineRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (header) {
      if (cells.size() < 5 || cells[0] != "hour" || cells[2] != "truth" || cells[3] != "pred")
        throw Error(ErrorCode::MissingHeader, "expected hour,load_kwh,truth,pred,flag");
      header = false;
      continue;
    }
    if (cells.size() != 5) throw Error(ErrorCode::MalformedCsv, "timeline rows need 5 cells");
    TimelineRow r;
    r.hour = static_cast<std::size_t>(parse_double(cells[0]));
    r.load_kwh = parse_double(cells[1]);
    if (cells[2] != "NA") r.truth = cells[2] == "1" ? Label::Active : Label::Inactive;
    r.pred = cells[3] == "1" ? Label::Active : Label::Inactive;
    r.flag = std::string(cells[4]);
    rows.push_back(std::move(r));
  }
  if (header) throw Error(ErrorCode::MissingHeader, "empty timeline");
  return rows;
}

}  // namespace actdis
