#include "actdis/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "actdis/error.hpp"
#include "actdis/log.hpp"

namespace actdis {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinTol = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class SmoSolver {
 public:
  SmoSolver(const FeatureMatrix& x, std::vector<double> y, double c_pos, double c_neg)
      : x_(x), y_(std::move(y)), n_(x.rows()), d_(x.cols()), alpha_(n_, 0.0), grad_(n_, -1.0), w_(d_, 0.0) {
    c_.resize(n_);
    diag_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      c_[i] = y_[i] > 0 ? c_pos : c_neg;
      diag_[i] = dot(x_.row(i), x_.row(i));
    }
  }

  void solve(const SvmHyperParams& hp, TrainMeta& meta) {
    meta.checkpoints.push_back(dual_min_objective());
    std::size_t iter = 0;
    double tol = hp.tol;
    for (; iter < hp.max_iter; ++iter) {
      std::size_t i = 0;
      std::size_t j = 0;
      if (!select_working_set(tol, i, j)) {
        // A small KKT violation can still leave a large duality gap when C is
        // large, so tighten until the relative gap meets tol as well.
        const double p = primal();
        if (p + dual_min_objective() <= hp.tol * std::max(1.0, std::abs(p)) || tol <= kMinTol) {
          meta.converged = true;
          break;
        }
        tol = std::max(kMinTol, tol / 10.0);
        continue;
      }
      update_pair(i, j);
      if (hp.checkpoint_every && (iter + 1) % hp.checkpoint_every == 0)
        meta.checkpoints.push_back(dual_min_objective());
    }
    meta.iterations = iter;
    meta.checkpoints.push_back(dual_min_objective());
    meta.kkt_violation = kkt_violation();
  }

  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& alpha() const { return alpha_; }

  double bias() const {
    double ub = kInf;
    double lb = -kInf;
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (at_upper(t)) {
        if (y_[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (at_lower(t)) {
        if (y_[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    return -rho;
  }

  double primal() const {
    const double b = bias();
    double loss = 0.0;
    for (std::size_t t = 0; t < n_; ++t) loss += c_[t] * std::max(0.0, 1.0 - y_[t] * (dot(w_, x_.row(t)) + b));
    return 0.5 * dot(w_, w_) + loss;
  }

  double dual_min_objective() const {
    double s = 0.0;
    for (double a : alpha_) s += a;
    return 0.5 * dot(w_, w_) - s;
  }

 private:
  bool at_upper(std::size_t t) const { return alpha_[t] >= c_[t]; }
  bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }
  bool in_up(std::size_t t) const { return y_[t] > 0 ? !at_upper(t) : !at_lower(t); }
  bool in_low(std::size_t t) const { return y_[t] > 0 ? !at_lower(t) : !at_upper(t); }

  double kkt_violation() const {
    double m = -kInf;
    double big_m = kInf;
    for (std::size_t t = 0; t < n_; ++t) {
      if (in_up(t)) m = std::max(m, -y_[t] * grad_[t]);
      if (in_low(t)) big_m = std::min(big_m, -y_[t] * grad_[t]);
    }
    return std::max(0.0, m - big_m);
  }

  // Second-order working set selection.
  bool select_working_set(double tol, std::size_t& out_i, std::size_t& out_j) const {
    double gmax = -kInf;
    std::size_t i = n_;
    for (std::size_t t = 0; t < n_; ++t)
      if (in_up(t) && -y_[t] * grad_[t] >= gmax) {
        if (-y_[t] * grad_[t] > gmax || i == n_) i = t;
        gmax = -y_[t] * grad_[t];
      }
    if (i == n_) return false;

    double gmin = kInf;
    double best = kInf;
    std::size_t j = n_;
    const auto xi = x_.row(i);
    for (std::size_t t = 0; t < n_; ++t) {
      if (!in_low(t)) continue;
      const double v = -y_[t] * grad_[t];
      gmin = std::min(gmin, v);
      const double b = gmax - v;
      if (b > 0.0) {
        double a = diag_[i] + diag_[t] - 2.0 * dot(xi, x_.row(t));
        if (a <= 0.0) a = kTau;
        const double score = -(b * b) / a;
        if (score < best) {
          best = score;
          j = t;
        }
      }
    }
    if (gmax - gmin < tol || j == n_) return false;
    out_i = i;
    out_j = j;
    return true;
  }

  void update_pair(std::size_t i, std::size_t j) {
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    const double ci = c_[i];
    const double cj = c_[j];
    const double kij = dot(x_.row(i), x_.row(j));
    double quad = diag_[i] + diag_[j] - 2.0 * kij;
    if (quad <= 0.0) quad = kTau;

    double& ai = alpha_[i];
    double& aj = alpha_[j];
    if (y_[i] != y_[j]) {
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else {
        if (ai < 0) { ai = 0; aj = -diff; }
      }
      if (diff > ci - cj) {
        if (ai > ci) { ai = ci; aj = ci - diff; }
      } else {
        if (aj > cj) { aj = cj; ai = cj + diff; }
      }
    } else {
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > ci) {
        if (ai > ci) { ai = ci; aj = sum - ci; }
      } else {
        if (aj < 0) { aj = 0; ai = sum; }
      }
      if (sum > cj) {
        if (aj > cj) { aj = cj; ai = sum - cj; }
      } else {
        if (ai < 0) { ai = 0; aj = sum; }
      }
    }

    const double di = (ai - old_i) * y_[i];
    const double dj = (aj - old_j) * y_[j];
    const auto xi = x_.row(i);
    const auto xj = x_.row(j);
    std::vector<double> dw(d_);
    for (std::size_t k = 0; k < d_; ++k) {
      dw[k] = di * xi[k] + dj * xj[k];
      w_[k] += dw[k];
    }
    for (std::size_t t = 0; t < n_; ++t) grad_[t] += y_[t] * dot(x_.row(t), dw);
  }

  const FeatureMatrix& x_;
  std::vector<double> y_;
  std::size_t n_;
  std::size_t d_;
  std::vector<double> c_;
  std::vector<double> diag_;
  std::vector<double> alpha_;
  std::vector<double> grad_;  // Q alpha - e
  std::vector<double> w_;
};

}  // namespace

double primal_objective(std::span<const double> w, double b, const FeatureMatrix& m, double c_pos, double c_neg) {
  double loss = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double y = to_sign(m.labels[i]);
    const double margin = 1.0 - y * (dot(w, m.row(i)) + b);
    if (margin > 0.0) loss += (y > 0 ? c_pos : c_neg) * margin;
  }
  return 0.5 * dot(w, w) + loss;
}

SvmModel train(const FeatureMatrix& matrix, const SvmHyperParams& hp) {
  if (!matrix.scaler) throw Error(ErrorCode::NotStandardized, "train() needs a standardized matrix");
  if (matrix.labels.size() != matrix.rows()) throw Error(ErrorCode::InvalidArgument, "training matrix is unlabeled");
  if (matrix.rows() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples");
  if (!(hp.C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be positive");
  if (!(hp.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");

  SvmModel model;
  model.C = hp.C;
  model.scaler = *matrix.scaler;
  model.columns = matrix.columns;
  model.method = std::string(to_string(matrix.method));
  model.weights.assign(matrix.cols(), 0.0);
  model.meta.seed = hp.seed;

  std::vector<double> y(matrix.rows());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = to_sign(matrix.labels[i]);
    if (y[i] > 0) ++n_pos;
  }
  const std::size_t n_neg = y.size() - n_pos;
  model.C_pos = model.C_neg = hp.C;
  if (n_pos == 0 || n_neg == 0) {
    model.bias = n_pos > 0 ? 1.0 : -1.0;
    model.meta.converged = true;
    model.meta.warning = std::string("SingleClass: every training label is ") + (n_pos > 0 ? "active" : "inactive") +
                         "; returning a constant classifier";
    warn(model.meta.warning);
    model.meta.primal_objective = primal_objective(model.weights, model.bias, matrix, model.C_pos, model.C_neg);
    return model;
  }
  if (hp.balance_classes) {
    const double n = static_cast<double>(y.size());
    model.C_pos = hp.C * n / (2.0 * static_cast<double>(n_pos));
    model.C_neg = hp.C * n / (2.0 * static_cast<double>(n_neg));
  }

  SmoSolver solver(matrix, y, model.C_pos, model.C_neg);
  solver.solve(hp, model.meta);
  model.weights = solver.weights();
  model.bias = solver.bias();

  auto& meta = model.meta;
  for (double a : solver.alpha())
    if (a > 0.0) ++meta.support_vectors;
  meta.primal_objective = primal_objective(model.weights, model.bias, matrix, model.C_pos, model.C_neg);
  meta.dual_objective = -solver.dual_min_objective();
  meta.duality_gap = meta.primal_objective - meta.dual_objective;
  if (!meta.converged) {
    meta.warning = "SMO stopped at max_iter=" + std::to_string(hp.max_iter) +
                   " with KKT violation " + format_double(meta.kkt_violation);
    warn(meta.warning);
  }
  return model;
}

double decision_value(const SvmModel& model, std::span<const double> raw) {
  if (raw.size() != model.weights.size())
    throw Error(ErrorCode::DimensionMismatch,
                "model expects " + std::to_string(model.weights.size()) + " features, got " + std::to_string(raw.size()));
  const auto z = apply_scaler(model.scaler, raw);
  return dot(model.weights, z) + model.bias;
}

Label predict(const SvmModel& model, std::span<const double> raw) {
  return decision_value(model, raw) > 0.0 ? Label::Active : Label::Inactive;
}

std::vector<double> decision_values_serial(const SvmModel& model, const FeatureMatrix& raw) {
  if (raw.cols() != model.weights.size())
    throw Error(ErrorCode::DimensionMismatch, "matrix width differs from model");
  std::vector<double> out(raw.rows());
  for (std::size_t i = 0; i < raw.rows(); ++i) out[i] = decision_value(model, raw.row(i));
  return out;
}

std::vector<double> decision_values(const SvmModel& model, const FeatureMatrix& raw) {
  if (raw.cols() != model.weights.size())
    throw Error(ErrorCode::DimensionMismatch, "matrix width differs from model");
  std::vector<double> out(raw.rows());
  const auto n = static_cast<std::ptrdiff_t>(raw.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = decision_value(model, raw.row(r));
  }
  return out;
}

std::vector<Label> predict_all(const SvmModel& model, const FeatureMatrix& raw) {
  const auto dv = decision_values(model, raw);
  std::vector<Label> out(dv.size());
  std::transform(dv.begin(), dv.end(), out.begin(), [](double v) { return v > 0.0 ? Label::Active : Label::Inactive; });
  return out;
}

std::string to_json(const SvmModel& model) {
  nlohmann::ordered_json j;
  j["version"] = kModelVersion;
  j["method"] = model.method;
  j["columns"] = model.columns;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["C"] = model.C;
  j["C_pos"] = model.C_pos;
  j["C_neg"] = model.C_neg;
  j["scaler"] = {{"mean", model.scaler.mean}, {"std", model.scaler.stddev}};
  j["features"] = {{"detrend", model.feature_options.detrend}, {"minimal_time", model.feature_options.minimal_time}};
  const auto& m = model.meta;
  j["train_meta"] = {{"iterations", m.iterations},
                     {"converged", m.converged},
                     {"primal_objective", m.primal_objective},
                     {"dual_objective", m.dual_objective},
                     {"duality_gap", m.duality_gap},
                     {"kkt_violation", m.kkt_violation},
                     {"support_vectors", m.support_vectors},
                     {"seed", m.seed},
                     {"warning", m.warning},
                     {"checkpoints", m.checkpoints}};
  return j.dump(2) + "\n";
}

SvmModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModelFile, e.what());
  }
  if (!j.is_object() || !j.contains("version")) throw Error(ErrorCode::MalformedModelFile, "missing version");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kModelVersion)
    throw Error(ErrorCode::VersionMismatch, "unsupported model version " + j["version"].dump());
  SvmModel m;
  try {
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.C = j.at("C").get<double>();
    m.C_pos = j.value("C_pos", m.C);
    m.C_neg = j.value("C_neg", m.C);
    m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    m.scaler.stddev = j.at("scaler").at("std").get<std::vector<double>>();
    m.columns = j.at("columns").get<std::vector<std::string>>();
    m.method = j.value("method", std::string{});
    if (j.contains("features")) {
      m.feature_options.detrend = j["features"].value("detrend", false);
      m.feature_options.minimal_time = j["features"].value("minimal_time", false);
    }
    if (j.contains("train_meta")) {
      const auto& t = j["train_meta"];
      m.meta.iterations = t.value("iterations", std::size_t{0});
      m.meta.converged = t.value("converged", false);
      m.meta.primal_objective = t.value("primal_objective", 0.0);
      m.meta.dual_objective = t.value("dual_objective", 0.0);
      m.meta.duality_gap = t.value("duality_gap", 0.0);
      m.meta.kkt_violation = t.value("kkt_violation", 0.0);
      m.meta.support_vectors = t.value("support_vectors", std::size_t{0});
      m.meta.seed = t.value("seed", std::uint64_t{42});
      m.meta.warning = t.value("warning", std::string{});
      m.meta.checkpoints = t.value("checkpoints", std::vector<double>{});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModelFile, e.what());
  }
  const std::size_t k = m.weights.size();
  if (m.scaler.mean.size() != k || m.scaler.stddev.size() != k || m.columns.size() != k)
    throw Error(ErrorCode::MalformedModelFile, "weights, scaler and columns lengths differ");
  if (!(m.C > 0.0)) throw Error(ErrorCode::MalformedModelFile, "C must be positive");
  return m;
}

void save(const SvmModel& model, const std::filesystem::path& path) { write_file_atomic(path, to_json(model)); }

SvmModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace actdis
