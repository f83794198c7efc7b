#pragma once

// Behavioral models over labeled activity windows: 24-hour occurrence
// profiles and a first-order Markov chain over activity onsets.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "actdis/ingest.hpp"

namespace actdis {

/// Ordered, unique activity names; the order fixes matrix indices.
class ActivitySet {
 public:
  explicit ActivitySet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  std::size_t index_of(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

struct HourlyProfile {
  std::string activity;
  std::array<double, 24> frequency{};  // fraction of days active in each UTC hour
  std::array<std::size_t, 24> days{};  // days contributing to each hour
};

/// frequency[h] = days active at hour h / days with a usable window at hour h.
/// Requires at least one day with all 24 windows.
HourlyProfile hourly_distribution(const LabelSeries& labels);

/// Emits the state index of every activity onset (inactive -> active edge, a
/// window after a grid gap counting as preceded by inactivity). Onsets in the
/// same window come out in ActivitySet order.
std::vector<std::size_t> build_state_sequence(std::span<const LabelSeries> labels, const ActivitySet& states);

struct TransitionMatrix {
  ActivitySet states;
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::vector<double>> P;
  std::vector<bool> observed_rows;  // false for rows without transitions (and no smoothing)
  double smoothing = 0.0;
};

/// P[i][j] = (counts[i][j] + alpha) / (sum_j counts[i][j] + alpha K).
TransitionMatrix estimate_transition_matrix(std::span<const std::size_t> sequence, const ActivitySet& states,
                                            double smoothing = 0.0);

/// Stationary distribution by power iteration on the lazy chain (P + I) / 2.
std::vector<double> stationary_distribution(const TransitionMatrix& tm, double tol = 1e-10);

/// `activity,hour,frequency`.
std::string format_profile_csv(std::span<const HourlyProfile> profiles);
/// `{states[], counts[][], P[][], smoothing}`.
std::string format_transitions_json(const TransitionMatrix& tm);

}  // namespace actdis
