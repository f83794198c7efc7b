#pragma once

// Per-window feature extraction and the four ablation feature layouts:
//   M1  f0..f9                        (amplitude spectrum bins 0-9)
//   M2  d_mean,d_std,var,mean,max     (time domain)
//   M3  M1 columns then M2 columns
//   M4  M3 columns then temp_c
// With FeatureOptions::minimal_time the time block shrinks to d_mean,var.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actdis/ingest.hpp"

namespace actdis {

inline constexpr std::size_t kSpectrumBins = 10;
inline constexpr std::size_t kTimeFeatures = 5;

using Spectrum = std::array<double, kSpectrumBins>;
/// mean(d), stddev(d), var(x), mean(x), max(x) with d[i] = x[i+1] - x[i].
using TimeFeatures = std::array<double, kTimeFeatures>;

enum class Method { M1, M2, M3, M4 };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);
inline constexpr std::array<Method, 4> kAllMethods{Method::M1, Method::M2, Method::M3, Method::M4};

struct FeatureOptions {
  bool detrend = false;       // subtract the window mean before the DFT
  bool minimal_time = false;  // keep only d_mean and var
};

TimeFeatures time_domain_features(std::span<const double> window);
Spectrum amplitude_spectrum(std::span<const double> window, bool detrend = false);
/// All 60 complex bins of a window.
std::vector<std::complex<double>> full_spectrum(std::span<const double> window);

struct WindowFeatures {
  Timestamp start{};
  Spectrum freq{};
  TimeFeatures time{};
  std::optional<double> temperature;
};

/// OpenMP kernel over windows of the aggregate column. `temps`, when given,
/// must share the load grid.
std::vector<WindowFeatures> extract_features(const LoadTable& load, std::span<const Window> windows,
                                             const TemperatureSeries* temps = nullptr,
                                             const FeatureOptions& options = {});
/// Single-threaded reference for extract_features.
std::vector<WindowFeatures> extract_features_serial(const LoadTable& load, std::span<const Window> windows,
                                                    const TemperatureSeries* temps = nullptr,
                                                    const FeatureOptions& options = {});

struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline constexpr double kDegenerateStddev = 1e-12;

struct FeatureMatrix {
  Method method = Method::M4;
  std::vector<std::string> columns;
  std::vector<double> data;  // row-major
  std::vector<Label> labels;  // empty when unlabeled
  std::vector<Timestamp> window_start;
  std::optional<Scaler> scaler;

  std::size_t rows() const { return window_start.size(); }
  std::size_t cols() const { return columns.size(); }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols(), cols()}; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }
};

std::vector<std::string> feature_columns(Method method, const FeatureOptions& options = {});

/// Builds the method's matrix; `labels` may be empty or parallel to `windows`.
FeatureMatrix assemble(std::span<const WindowFeatures> windows, std::span<const Label> labels, Method method,
                       const FeatureOptions& options = {});

FeatureMatrix select_rows(const FeatureMatrix& matrix, std::span<const std::size_t> indices);

Scaler fit_scaler(const FeatureMatrix& matrix);
std::vector<double> apply_scaler(const Scaler& scaler, std::span<const double> raw);

/// Z-scores every column. Without `stats` the matrix is treated as the
/// training split and its own statistics are fitted and recorded.
FeatureMatrix standardize(const FeatureMatrix& matrix, const Scaler* stats = nullptr);

/// Header `f0..f9,d_mean,...,temp_c,label` restricted to present columns.
std::string format_feature_csv(const FeatureMatrix& matrix);

}  // namespace actdis
