#include "actdis/features.hpp"

#include <algorithm>
#include <cmath>

#include "actdis/dft.hpp"
#include "actdis/error.hpp"

namespace actdis {

namespace {

const MixedRadixDft& window_dft() {
  static const MixedRadixDft dft(kWindowMinutes);
  return dft;
}

void check_window(std::span<const double> window) {
  if (window.size() != kWindowMinutes)
    throw Error(ErrorCode::WrongWindowLength,
                "expected " + std::to_string(kWindowMinutes) + " samples, got " + std::to_string(window.size()));
}

constexpr std::array<std::string_view, kTimeFeatures> kTimeNames{"d_mean", "d_std", "var", "mean", "max"};

WindowFeatures features_of(const LoadTable& load, const Window& w, const TemperatureSeries* temps,
                           const FeatureOptions& options) {
  const std::span<const double> x(load.aggregate.data() + w.offset, kWindowMinutes);
  WindowFeatures f;
  f.start = w.start;
  f.freq = amplitude_spectrum(x, options.detrend);
  f.time = time_domain_features(x);
  if (temps) {
    f.temperature = accurate_sum(std::span<const double>(temps->values.data() + w.offset, kWindowMinutes)) /
                    static_cast<double>(kWindowMinutes);
  }
  return f;
}

void check_grid(const LoadTable& load, const TemperatureSeries* temps) {
  if (temps && (temps->step_seconds != kMinute || temps->start != load.start || temps->size() != load.rows()))
    throw Error(ErrorCode::GridMismatch, "temperature series must share the load grid");
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::M1: return "M1";
    case Method::M2: return "M2";
    case Method::M3: return "M3";
    case Method::M4: return "M4";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "M1" || text == "m1" || text == "1") return Method::M1;
  if (text == "M2" || text == "m2" || text == "2") return Method::M2;
  if (text == "M3" || text == "m3" || text == "3") return Method::M3;
  if (text == "M4" || text == "m4" || text == "4") return Method::M4;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

TimeFeatures time_domain_features(std::span<const double> window) {
  check_window(window);
  const std::size_t n = window.size();
  std::array<double, kWindowMinutes - 1> d{};
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = window[i + 1] - window[i];

  // Welford keeps the variances non-negative and stable for large offsets.
  auto moments = [](auto&& xs) {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double v : xs) {
      ++k;
      const double delta = v - mean;
      mean += delta / static_cast<double>(k);
      m2 += delta * (v - mean);
    }
    return std::pair{mean, std::max(0.0, m2 / static_cast<double>(k))};
  };
  const auto [d_mean, d_var] = moments(d);
  const auto [x_mean, x_var] = moments(window);
  return {d_mean, std::sqrt(d_var), x_var, x_mean, *std::max_element(window.begin(), window.end())};
}

std::vector<std::complex<double>> full_spectrum(std::span<const double> window) {
  check_window(window);
  return window_dft().transform(window);
}

Spectrum amplitude_spectrum(std::span<const double> window, bool detrend) {
  check_window(window);
  std::array<double, kWindowMinutes> buf{};
  std::copy(window.begin(), window.end(), buf.begin());
  if (detrend) {
    const double mean = accurate_sum(window) / static_cast<double>(kWindowMinutes);
    for (double& v : buf) v -= mean;
  }
  std::array<std::complex<double>, kWindowMinutes> coeffs{};
  window_dft().transform(buf, coeffs);
  Spectrum out{};
  for (std::size_t k = 0; k < kSpectrumBins; ++k) out[k] = std::abs(coeffs[k]);
  return out;
}

std::vector<WindowFeatures> extract_features_serial(const LoadTable& load, std::span<const Window> windows,
                                                    const TemperatureSeries* temps, const FeatureOptions& options) {
  check_grid(load, temps);
  std::vector<WindowFeatures> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(features_of(load, w, temps, options));
  return out;
}

std::vector<WindowFeatures> extract_features(const LoadTable& load, std::span<const Window> windows,
                                             const TemperatureSeries* temps, const FeatureOptions& options) {
  check_grid(load, temps);
  for (const auto& w : windows)
    if (w.offset + kWindowMinutes > load.rows()) throw Error(ErrorCode::WrongWindowLength, "window past end of table");
  window_dft();  // build the shared plan before the parallel region
  std::vector<WindowFeatures> out(windows.size());
  const auto n = static_cast<std::ptrdiff_t>(windows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = features_of(load, windows[static_cast<std::size_t>(i)], temps, options);
  return out;
}

std::vector<std::string> feature_columns(Method method, const FeatureOptions& options) {
  std::vector<std::string> cols;
  const bool freq = method != Method::M2;
  const bool time = method != Method::M1;
  if (freq)
    for (std::size_t k = 0; k < kSpectrumBins; ++k) cols.push_back("f" + std::to_string(k));
  if (time)
    for (std::size_t j = 0; j < kTimeFeatures; ++j)
      if (!options.minimal_time || j == 0 || j == 2) cols.emplace_back(kTimeNames[j]);
  if (method == Method::M4) cols.emplace_back("temp_c");
  return cols;
}

FeatureMatrix assemble(std::span<const WindowFeatures> windows, std::span<const Label> labels, Method method,
                       const FeatureOptions& options) {
  if (!labels.empty() && labels.size() != windows.size())
    throw Error(ErrorCode::DimensionMismatch, "labels not parallel to windows");
  FeatureMatrix m;
  m.method = method;
  m.columns = feature_columns(method, options);
  m.labels.assign(labels.begin(), labels.end());
  m.data.reserve(windows.size() * m.cols());
  const bool freq = method != Method::M2;
  const bool time = method != Method::M1;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (i > 0 && w.start <= windows[i - 1].start)
      throw Error(ErrorCode::NonMonotoneTimestamps, "windows must be in chronological order");
    if (freq) m.data.insert(m.data.end(), w.freq.begin(), w.freq.end());
    if (time)
      for (std::size_t j = 0; j < kTimeFeatures; ++j)
        if (!options.minimal_time || j == 0 || j == 2) m.data.push_back(w.time[j]);
    if (method == Method::M4) {
      if (!w.temperature)
        throw Error(ErrorCode::MissingTemperature, "M4 needs a temperature for window " + format_timestamp(w.start));
      m.data.push_back(*w.temperature);
    }
    m.window_start.push_back(w.start);
  }
  return m;
}

FeatureMatrix select_rows(const FeatureMatrix& matrix, std::span<const std::size_t> indices) {
  FeatureMatrix out;
  out.method = matrix.method;
  out.columns = matrix.columns;
  out.scaler = matrix.scaler;
  out.data.reserve(indices.size() * matrix.cols());
  for (std::size_t i : indices) {
    if (i >= matrix.rows()) throw Error(ErrorCode::InvalidArgument, "row index out of range");
    const auto r = matrix.row(i);
    out.data.insert(out.data.end(), r.begin(), r.end());
    out.window_start.push_back(matrix.window_start[i]);
    if (!matrix.labels.empty()) out.labels.push_back(matrix.labels[i]);
  }
  return out;
}

Scaler fit_scaler(const FeatureMatrix& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) throw Error(ErrorCode::EmptyMatrix, "cannot fit scaler on an empty matrix");
  const std::size_t n = matrix.rows();
  const std::size_t k = matrix.cols();
  Scaler s;
  s.mean.assign(k, 0.0);
  s.stddev.assign(k, 0.0);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = matrix.at(i, j);
    const double mean = accurate_sum(col) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    s.mean[j] = mean;
    s.stddev[j] = std::sqrt(ss / static_cast<double>(n));
  }
  return s;
}

std::vector<double> apply_scaler(const Scaler& scaler, std::span<const double> raw) {
  if (raw.size() != scaler.mean.size())
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(scaler.mean.size()) + " features, got " + std::to_string(raw.size()));
  std::vector<double> z(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j)
    z[j] = scaler.stddev[j] < kDegenerateStddev ? 0.0 : (raw[j] - scaler.mean[j]) / scaler.stddev[j];
  return z;
}

FeatureMatrix standardize(const FeatureMatrix& matrix, const Scaler* stats) {
  if (matrix.rows() == 0 || matrix.cols() == 0) throw Error(ErrorCode::EmptyMatrix, "nothing to standardize");
  const Scaler s = stats ? *stats : fit_scaler(matrix);
  if (s.mean.size() != matrix.cols()) throw Error(ErrorCode::DimensionMismatch, "scaler width differs from matrix");
  FeatureMatrix out = matrix;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const auto z = apply_scaler(s, matrix.row(i));
    std::copy(z.begin(), z.end(), out.data.begin() + static_cast<std::ptrdiff_t>(i * out.cols()));
  }
  out.scaler = s;
  return out;
}

std::string format_feature_csv(const FeatureMatrix& matrix) {
  std::string out;
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    if (j) out += ',';
    out += matrix.columns[j];
  }
  if (!matrix.labels.empty()) out += ",label";
  out += '\n';
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (j) out += ',';
      out += format_double(matrix.at(i, j));
    }
    if (!matrix.labels.empty()) out += matrix.labels[i] == Label::Active ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

}  // namespace actdis
