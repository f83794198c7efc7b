#pragma once

// Soft-margin linear SVM trained by sequential minimal optimization on the
// dual, minimizing (1/2)|w|^2 + sum_i C_i max(0, 1 - y_i (w.x_i + b)).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actdis/features.hpp"

namespace actdis {

inline constexpr int kModelVersion = 1;

struct SvmHyperParams {
  double C = 1.0;
  double tol = 1e-4;  // maximal KKT violation and relative duality gap at termination
  std::size_t max_iter = 100000;
  std::uint64_t seed = 42;
  /// Per-class penalties C+ and C- proportional to inverse class frequency.
  bool balance_classes = false;
  std::size_t checkpoint_every = 100;
};

struct TrainMeta {
  std::size_t iterations = 0;
  bool converged = false;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double kkt_violation = 0.0;
  std::size_t support_vectors = 0;
  std::uint64_t seed = 42;
  std::string warning;
  /// Dual objective in minimization form, (1/2)|w|^2 - sum(alpha), sampled
  /// during training. Non-increasing.
  std::vector<double> checkpoints;
};

struct SvmModel {
  std::vector<double> weights;  // one per standardized column
  double bias = 0.0;
  double C = 1.0;
  double C_pos = 1.0;
  double C_neg = 1.0;
  Scaler scaler;
  std::vector<std::string> columns;
  std::string method;
  FeatureOptions feature_options;  // layout the columns were built with
  TrainMeta meta;
};

/// `matrix` must be standardized (scaler present) and labeled. A single-class
/// training set yields a constant classifier and a recorded warning.
SvmModel train(const FeatureMatrix& matrix, const SvmHyperParams& hp = {});

/// w . scale(raw) + b.
double decision_value(const SvmModel& model, std::span<const double> raw);
/// Active iff the decision value is strictly positive.
Label predict(const SvmModel& model, std::span<const double> raw);

/// OpenMP kernel over the rows of an unstandardized matrix.
std::vector<double> decision_values(const SvmModel& model, const FeatureMatrix& raw);
std::vector<double> decision_values_serial(const SvmModel& model, const FeatureMatrix& raw);
std::vector<Label> predict_all(const SvmModel& model, const FeatureMatrix& raw);

/// Primal objective on an already standardized matrix.
double primal_objective(std::span<const double> w, double b, const FeatureMatrix& standardized, double c_pos,
                        double c_neg);

std::string to_json(const SvmModel& model);
SvmModel model_from_json(std::string_view text);
void save(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace actdis
