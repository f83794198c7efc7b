#pragma once
// Independent reference computations used by the unit and acceptance tests.
// They share no code with the library and favour clarity over speed.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

/// Direct O(N^2) DFT evaluated in long double.
inline std::vector<std::complex<long double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<long double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t mod n first so the angle stays small and accurate.
      const long double angle =
          -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * t) % n) / static_cast<long double>(n);
      acc += static_cast<long double>(x[t]) * std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

/// Two-pass population statistics: mean(d), std(d), var(x), mean(x), max(x).
inline std::vector<double> two_pass_time_features(const std::vector<double>& x) {
  auto mean_of = [](const std::vector<long double>& v) {
    long double s = 0;
    for (auto e : v) s += e;
    return s / static_cast<long double>(v.size());
  };
  auto var_of = [&](const std::vector<long double>& v) {
    const long double m = mean_of(v);
    long double s = 0;
    for (auto e : v) s += (e - m) * (e - m);
    return s / static_cast<long double>(v.size());
  };
  std::vector<long double> xs(x.begin(), x.end()), d;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d.push_back(xs[i + 1] - xs[i]);
  return {static_cast<double>(mean_of(d)), static_cast<double>(std::sqrt(var_of(d))), static_cast<double>(var_of(xs)),
          static_cast<double>(mean_of(xs)), *std::max_element(x.begin(), x.end())};
}

/// num/den rounded to the nearest double, ties to even, using exact integers.
inline double correctly_rounded_ratio(const boost::multiprecision::cpp_int& num,
                                      const boost::multiprecision::cpp_int& den) {
  using boost::multiprecision::cpp_int;
  if (num == 0) return 0.0;
  // Pick e so that q = floor(num * 2^-e / den) has exactly 53 bits.
  int e = static_cast<int>(boost::multiprecision::msb(num)) - static_cast<int>(boost::multiprecision::msb(den)) - 53;
  auto scaled = [&](int shift, cpp_int& q, cpp_int& r, cpp_int& d) {
    cpp_int n = num;
    d = den;
    if (shift >= 0)
      d <<= shift;
    else
      n <<= -shift;
    q = n / d;
    r = n % d;
  };
  cpp_int q, r, d;
  scaled(e, q, r, d);
  while (boost::multiprecision::msb(q) < 52) scaled(--e, q, r, d);
  while (boost::multiprecision::msb(q) > 52) scaled(++e, q, r, d);
  const cpp_int twice = 2 * r;
  if (twice > d || (twice == d && (q & 1) != 0)) ++q;
  return std::ldexp(static_cast<double>(q), e);
}

struct ExactMetrics {
  double accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
};

/// Metric percentages from rational arithmetic.
inline ExactMetrics exact_metrics(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
  using boost::multiprecision::cpp_int;
  ExactMetrics m{};
  const cpp_int total = cpp_int(tp) + tn + fp + fn;
  m.accuracy = correctly_rounded_ratio(100 * (cpp_int(tp) + tn), total);
  if (tp + fp > 0) m.precision = correctly_rounded_ratio(100 * cpp_int(tp), cpp_int(tp) + fp);
  if (tp + fn > 0) m.recall = correctly_rounded_ratio(100 * cpp_int(tp), cpp_int(tp) + fn);
  return m;
}

/// Soft-margin linear SVM reference. For a fixed bias the dual has box
/// constraints only, so cyclic coordinate ascent solves it; the primal
/// optimum over the bias is convex and located by golden-section search.
struct SvmSolution {
  std::vector<double> w;
  double b = 0.0;
  double primal = 0.0;
  double gap = 0.0;  // full primal-dual gap, or the fixed-bias gap when refinement fails
};

class SvmOracle {
 public:
  SvmOracle(std::vector<std::vector<double>> x, std::vector<double> y, std::vector<double> c)
      : x_(std::move(x)), y_(std::move(y)), c_(std::move(c)), alpha_(x_.size(), 0.0) {
    sq_.resize(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      long double s = 0;
      for (double v : x_[i]) s += static_cast<long double>(v) * v;
      sq_[i] = static_cast<double>(s);
    }
  }

  double primal(const std::vector<double>& w, double b) const {
    long double obj = 0;
    for (double v : w) obj += 0.5L * v * v;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      long double m = b;
      for (std::size_t j = 0; j < w.size(); ++j) m += static_cast<long double>(w[j]) * x_[i][j];
      obj += c_[i] * std::max<long double>(0.0L, 1.0L - y_[i] * m);
    }
    return static_cast<double>(obj);
  }

  SvmSolution solve() {
    double max_norm = 0.0, c_sum = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      max_norm = std::max(max_norm, std::sqrt(sq_[i]));
      c_sum += c_[i];
    }
    // |w*|^2 <= 2 P(0, 0) = 2 sum C, and some margin constraint is tight or violated at b*.
    double lo = -(1.0 + max_norm * std::sqrt(2.0 * c_sum)) - 1.0;
    double hi = -lo;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double b1 = hi - phi * (hi - lo), b2 = lo + phi * (hi - lo);
    // Probes only need to be ordered correctly; refine() certifies the result.
    constexpr double kProbeGap = 1e-8;
    double f1 = solve_fixed_bias(b1, kProbeGap).primal, f2 = solve_fixed_bias(b2, kProbeGap).primal;
    while (hi - lo > 1e-9 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
      if (f1 <= f2) {
        hi = b2;
        b2 = b1;
        f2 = f1;
        b1 = hi - phi * (hi - lo);
        f1 = solve_fixed_bias(b1, kProbeGap).primal;
      } else {
        lo = b1;
        b1 = b2;
        f1 = f2;
        b2 = lo + phi * (hi - lo);
        f2 = solve_fixed_bias(b2, kProbeGap).primal;
      }
    }
    return refine(solve_fixed_bias(0.5 * (lo + hi), kProbeGap));
  }

  /// Solves the KKT equalities of the full problem on the free set of a
  /// near-optimal fixed-bias solution, for the free alphas and the bias
  /// together. When the result is feasible the reported gap is the full
  /// primal-dual gap; otherwise the fixed-bias solution is returned.
  SvmSolution refine(const SvmSolution& fallback) const {
    const std::size_t n = x_.size(), d = x_.empty() ? 0 : x_[0].size();
    std::vector<long double> alpha(alpha_.begin(), alpha_.end());
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] <= 1e-10 * c_[i]) alpha[i] = 0.0L;
      else if (alpha[i] >= c_[i] * (1.0 - 1e-10)) alpha[i] = c_[i];
      else free.push_back(i);
    }
    const std::size_t k = free.size();
    std::vector<long double> w_bound(d, 0.0L);
    long double y_bound = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(free.begin(), free.end(), i) != free.end()) continue;
      y_bound += alpha[i] * y_[i];
      for (std::size_t j = 0; j < d; ++j) w_bound[j] += alpha[i] * y_[i] * x_[i][j];
    }
    // Unknowns: alpha_F then b. Rows: margin equalities then sum(alpha * y) = 0.
    std::vector<std::vector<long double>> a(k + 1, std::vector<long double>(k + 2, 0.0L));
    long double scale = 1.0L;
    for (std::size_t r = 0; r < k; ++r) {
      const auto& xr = x_[free[r]];
      for (std::size_t c = 0; c < k; ++c) {
        long double dot = 0.0L;
        for (std::size_t j = 0; j < d; ++j) dot += static_cast<long double>(xr[j]) * x_[free[c]][j];
        a[r][c] = y_[free[r]] * y_[free[c]] * dot;
        scale = std::max(scale, std::abs(a[r][c]));
      }
      a[r][k] = y_[free[r]];
      long double m = 0.0L;
      for (std::size_t j = 0; j < d; ++j) m += w_bound[j] * xr[j];
      a[r][k + 1] = 1.0L - y_[free[r]] * m;
    }
    for (std::size_t c = 0; c < k; ++c) a[k][c] = y_[free[c]];
    a[k][k + 1] = -y_bound;
    for (std::size_t col = 0; col <= k; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r <= k; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (std::abs(a[piv][col]) <= 1e-12L * scale) return fallback;
      std::swap(a[piv], a[col]);
      for (std::size_t r = 0; r <= k; ++r) {
        if (r == col) continue;
        const long double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c <= k + 1; ++c) a[r][c] -= f * a[col][c];
      }
    }
    for (std::size_t r = 0; r < k; ++r) {
      const long double v = a[r][k + 1] / a[r][r];
      if (v < 0.0L || v > c_[free[r]]) return fallback;
      alpha[free[r]] = v;
    }
    const double b = static_cast<double>(a[k][k + 1] / a[k][k]);
    std::vector<long double> w(d, 0.0L);
    long double alpha_sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      alpha_sum += alpha[i];
      for (std::size_t j = 0; j < d; ++j) w[j] += alpha[i] * y_[i] * x_[i][j];
    }
    SvmSolution s;
    s.w.assign(w.begin(), w.end());
    s.b = b;
    s.primal = primal(s.w, b);
    long double dual = alpha_sum;
    for (long double v : w) dual -= 0.5L * v * v;
    s.gap = std::abs(s.primal - static_cast<double>(dual));
    return s.primal <= fallback.primal ? s : fallback;
  }

  /// Solution of the fixed-bias subproblem to the given relative duality gap.
  SvmSolution solve_fixed_bias(double b, double rel_gap = 1e-13) {
    const std::size_t n = x_.size(), d = x_.empty() ? 0 : x_[0].size();
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) w[j] += alpha_[i] * y_[i] * x_[i][j];
    SvmSolution s;
    for (int epoch = 0; epoch < 200000; ++epoch) {
      for (std::size_t i = 0; i < n; ++i) {
        if (sq_[i] == 0.0) {
          alpha_[i] = (1.0 - y_[i] * b) > 0.0 ? c_[i] : 0.0;
          continue;
        }
        double m = 0.0;
        for (std::size_t j = 0; j < d; ++j) m += w[j] * x_[i][j];
        const double grad = 1.0 - y_[i] * b - y_[i] * m;
        const double next = std::clamp(alpha_[i] + grad / sq_[i], 0.0, c_[i]);
        const double delta = next - alpha_[i];
        if (delta != 0.0) {
          for (std::size_t j = 0; j < d; ++j) w[j] += delta * y_[i] * x_[i][j];
          alpha_[i] = next;
        }
      }
      if (epoch % 10 == 9) {
        // Rebuild w from alpha to shed accumulated rounding.
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < d; ++j) w[j] += alpha_[i] * y_[i] * x_[i][j];
        const double p = primal(w, b);
        const double dual = dual_fixed_bias(w, b);
        if (p - dual <= rel_gap * std::max(1.0, std::abs(p))) {
          s.w = w;
          s.b = b;
          s.primal = p;
          s.gap = p - dual;
          return s;
        }
      }
    }
    s.w = w;
    s.b = b;
    s.primal = primal(w, b);
    s.gap = s.primal - dual_fixed_bias(w, b);
    return s;
  }

 private:
  double dual_fixed_bias(const std::vector<double>& w, double b) const {
    long double v = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) v += alpha_[i] * (1.0L - y_[i] * b);
    for (double e : w) v -= 0.5L * e * e;
    return static_cast<double>(v);
  }

  std::vector<std::vector<double>> x_;
  std::vector<double> y_;
  std::vector<double> c_;
  std::vector<double> alpha_;
  std::vector<double> sq_;
};

/// Stationary distribution from a long-double power method on the lazy chain.
inline std::vector<long double> stationary(const std::vector<std::vector<double>>& P) {
  const std::size_t k = P.size();
  std::vector<long double> pi(k, 1.0L / static_cast<long double>(k)), next(k);
  for (int it = 0; it < 1000000; ++it) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) next[j] += pi[i] * (0.5L * P[i][j] + (i == j ? 0.5L : 0.0L));
    long double diff = 0;
    for (std::size_t j = 0; j < k; ++j) diff += std::abs(next[j] - pi[j]);
    pi.swap(next);
    if (diff < 1e-18L) break;
  }
  return pi;
}

/// Random row-stochastic matrix with strictly positive entries.
inline std::vector<std::vector<double>> random_stochastic(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> P(k, std::vector<double>(k));
  for (auto& row : P) {
    double s = 0;
    for (auto& v : row) s += (v = u(rng));
    for (auto& v : row) v /= s;
  }
  return P;
}

}  // namespace oracle
