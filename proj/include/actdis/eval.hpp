#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actdis/features.hpp"
#include "actdis/svm.hpp"

namespace actdis {

struct SplitFractions {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
};

/// Chronological contiguous index ranges.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Sizes are floor(n * fraction) for train and validation, remainder to test.
SplitIndices split(std::size_t n_windows, const SplitFractions& fractions = {});

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const LabelSeries& truth, const LabelSeries& pred);
ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> pred);

/// Percentages. Precision (recall) is absent when TP+FP (TP+FN) is zero.
struct MetricsReport {
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  ConfusionCounts counts;
};

MetricsReport metrics(const ConfusionCounts& c);

struct MethodResult {
  Method method = Method::M1;
  MetricsReport report;
  SvmModel model;
};

struct AblationOptions {
  SvmHyperParams hp;
  SplitFractions fractions;
  FeatureOptions features;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
};

/// Trains one model per method on the identical chronological split and
/// scores it on the test split. M4 is skipped (with a warning) when any
/// window lacks a temperature.
std::vector<MethodResult> ablation_run(std::span<const WindowFeatures> windows, std::span<const Label> labels,
                                       const AblationOptions& options = {});

/// `method,accuracy_pct,precision_pct,recall_pct`; undefined metrics are written as NA.
std::string format_metrics_csv(std::span<const std::pair<std::string, MetricsReport>> rows);
std::string format_metrics_csv(std::span<const MethodResult> results);

struct TimelineRow {
  std::size_t hour = 0;  // hours since the first window
  double load_kwh = 0.0;
  std::optional<Label> truth;
  Label pred = Label::Inactive;
  std::string flag;  // "FP", "FN" or empty
};

/// One row per window. `load_kwh` is the energy of each window.
std::vector<TimelineRow> timeline(const LabelSeries* truth, const LabelSeries& pred,
                                  std::span<const double> load_kwh);
/// `hour,load_kwh,truth,pred,flag`; an unknown truth is written as NA.
std::string format_timeline_csv(std::span<const TimelineRow> rows);
std::vector<TimelineRow> parse_timeline_csv_text(std::string_view text);

}  // namespace actdis
