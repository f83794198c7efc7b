#include "actdis/activity_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "actdis/error.hpp"

namespace actdis {

ActivitySet::ActivitySet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidArgument, "activity set is empty");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw Error(ErrorCode::InvalidArgument, "duplicate activity '" + n + "'");
}

std::size_t ActivitySet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error(ErrorCode::InvalidArgument, "activity '" + std::string(name) + "' not in state set");
}

HourlyProfile hourly_distribution(const LabelSeries& labels) {
  // day index -> 24 slots: -1 missing, 0 inactive, 1 active
  std::map<std::int64_t, std::array<int, 24>> days;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::int64_t t = epoch_seconds(labels.window_start[i]);
    const std::int64_t day = t >= 0 ? t / kDay : (t - kDay + 1) / kDay;
    const auto hour = static_cast<std::size_t>((t - day * kDay) / kHour);
    auto [it, inserted] = days.try_emplace(day);
    if (inserted) it->second.fill(-1);
    it->second[hour] = labels.labels[i] == Label::Active ? 1 : 0;
  }
  const bool any_complete = std::any_of(days.begin(), days.end(), [](const auto& d) {
    return std::none_of(d.second.begin(), d.second.end(), [](int v) { return v < 0; });
  });
  if (!any_complete) throw Error(ErrorCode::NoCompleteDays, "no day has all 24 hourly windows");

  HourlyProfile p;
  p.activity = labels.activity;
  std::array<std::size_t, 24> active{};
  for (const auto& [day, slots] : days)
    for (std::size_t h = 0; h < 24; ++h)
      if (slots[h] >= 0) {
        ++p.days[h];
        active[h] += static_cast<std::size_t>(slots[h]);
      }
  for (std::size_t h = 0; h < 24; ++h)
    p.frequency[h] = p.days[h] ? static_cast<double>(active[h]) / static_cast<double>(p.days[h]) : 0.0;
  return p;
}

std::vector<std::size_t> build_state_sequence(std::span<const LabelSeries> labels, const ActivitySet& states) {
  std::vector<const LabelSeries*> by_state(states.size(), nullptr);
  for (const auto& s : labels) {
    const std::size_t idx = states.index_of(s.activity);
    by_state[idx] = &s;
  }
  const LabelSeries* ref = nullptr;
  for (const auto* s : by_state) {
    if (!s) continue;
    if (!ref) ref = s;
    if (s->window_start != ref->window_start || s->labels.size() != s->window_start.size())
      throw Error(ErrorCode::GridMismatch, "label series '" + s->activity + "' is on a different window grid");
  }
  std::vector<std::size_t> seq;
  if (!ref) return seq;
  for (std::size_t w = 0; w < ref->size(); ++w) {
    const bool contiguous = w > 0 && ref->window_start[w] - ref->window_start[w - 1] == std::chrono::seconds{kHour};
    for (std::size_t k = 0; k < states.size(); ++k) {
      const auto* s = by_state[k];
      if (!s || s->labels[w] != Label::Active) continue;
      if (contiguous && s->labels[w - 1] == Label::Active) continue;
      seq.push_back(k);
    }
  }
  return seq;
}

TransitionMatrix estimate_transition_matrix(std::span<const std::size_t> sequence, const ActivitySet& states,
                                            double smoothing) {
  if (sequence.size() < 2) throw Error(ErrorCode::SequenceTooShort, "need at least two states");
  if (!(smoothing >= 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing must be >= 0");
  const std::size_t k = states.size();
  TransitionMatrix tm{states, std::vector<std::vector<std::size_t>>(k, std::vector<std::size_t>(k, 0)),
                      std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0)), std::vector<bool>(k, false),
                      smoothing};
  for (std::size_t s : sequence)
    if (s >= k) throw Error(ErrorCode::InvalidArgument, "state index out of range");
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) ++tm.counts[sequence[i]][sequence[i + 1]];
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t row = 0;
    for (std::size_t c : tm.counts[i]) row += c;
    const double denom = static_cast<double>(row) + smoothing * static_cast<double>(k);
    if (denom <= 0.0) continue;
    tm.observed_rows[i] = true;
    for (std::size_t j = 0; j < k; ++j) tm.P[i][j] = (static_cast<double>(tm.counts[i][j]) + smoothing) / denom;
  }
  return tm;
}

std::vector<double> stationary_distribution(const TransitionMatrix& tm, double tol) {
  const std::size_t k = tm.states.size();
  for (std::size_t i = 0; i < k; ++i)
    if (!tm.observed_rows[i]) throw Error(ErrorCode::ZeroRow, "row '" + tm.states[i] + "' has no observations");

  // Irreducible iff every state reaches every other along positive entries.
  for (std::size_t src = 0; src < k; ++src) {
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> stack{src};
    seen[src] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < k; ++v)
        if (tm.P[u][v] > 0.0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw Error(ErrorCode::ReducibleChain, "not every state is reachable from '" + tm.states[src] + "'");
  }

  std::vector<double> pi(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k);
  for (std::size_t iter = 0; iter < 10'000'000; ++iter) {
    for (std::size_t j = 0; j < k; ++j) next[j] = 0.5 * pi[j];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) next[j] += 0.5 * pi[i] * tm.P[i][j];
    double total = 0.0;
    for (double v : next) total += v;
    double change = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      next[j] /= total;
      change += std::abs(next[j] - pi[j]);
    }
    pi.swap(next);
    if (change < tol * 1e-2) break;
  }
  return pi;
}

std::string format_profile_csv(std::span<const HourlyProfile> profiles) {
  std::string out = "activity,hour,frequency\n";
  for (const auto& p : profiles)
    for (std::size_t h = 0; h < 24; ++h) out += p.activity + "," + std::to_string(h) + "," + format_double(p.frequency[h]) + "\n";
  return out;
}

std::string format_transitions_json(const TransitionMatrix& tm) {
  nlohmann::ordered_json j;
  j["states"] = tm.states.names();
  j["counts"] = tm.counts;
  j["P"] = tm.P;
  j["observed_rows"] = tm.observed_rows;
  j["smoothing"] = tm.smoothing;
  return j.dump(2) + "\n";
}

}  // namespace actdis
