#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "actdis/activity_model.hpp"
#include "actdis/error.hpp"
#include "actdis/synth.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace actdis;
using testutil::code_of;

namespace {

const Timestamp kT0 = parse_timestamp("2020-01-01T00:00:00Z");

LabelSeries hourly(const std::string& name, std::size_t hours, const std::function<bool(std::size_t)>& active,
                   Timestamp start = kT0) {
  LabelSeries s;
  s.activity = name;
  for (std::size_t h = 0; h < hours; ++h) {
    s.window_start.push_back(start + std::chrono::hours(h));
    s.labels.push_back(active(h) ? Label::Active : Label::Inactive);
  }
  return s;
}

double row_sum(const std::vector<double>& row) { return std::accumulate(row.begin(), row.end(), 0.0); }

}  // namespace

TEST_CASE("activity set validation") {
  CHECK(code_of([] { ActivitySet({}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ActivitySet({"a", "a"}); }) == ErrorCode::InvalidArgument);
  const ActivitySet s({"x", "y"});
  CHECK(s.index_of("y") == 1);
  CHECK(code_of([&] { s.index_of("z"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("spike profile and never-active profile") {
  const auto spike = hourly_distribution(hourly("a", 24 * 10, [](std::size_t h) { return h % 24 == 18; }));
  for (std::size_t h = 0; h < 24; ++h) {
    CHECK(spike.frequency[h] == (h == 18 ? 1.0 : 0.0));
    CHECK(spike.days[h] == 10);
  }
  const auto never = hourly_distribution(hourly("a", 48, [](std::size_t) { return false; }));
  for (double f : never.frequency) CHECK(f == 0.0);
}

TEST_CASE("profiles need one complete day and count partial days per hour") {
  CHECK(code_of([] { hourly_distribution(hourly("a", 23, [](std::size_t) { return true; })); }) ==
        ErrorCode::NoCompleteDays);
  auto s = hourly("a", 24 * 2 + 6, [](std::size_t h) { return h % 24 < 3; });
  const auto p = hourly_distribution(s);
  CHECK(p.days[0] == 3);
  CHECK(p.days[10] == 2);
  CHECK(p.frequency[2] == 1.0);
}

TEST_CASE("profiles do not depend on the order days are listed in") {
  std::mt19937_64 rng(5);
  auto s = hourly("a", 24 * 30, [&](std::size_t) { return rng() % 3 == 0; });
  const auto p = hourly_distribution(s);
  // Reorder whole days, each keeping its own timestamps.
  std::vector<std::size_t> order(30);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  LabelSeries shuffled{"a", {}, {}};
  for (std::size_t d : order)
    for (std::size_t h = 0; h < 24; ++h) {
      shuffled.window_start.push_back(s.window_start[d * 24 + h]);
      shuffled.labels.push_back(s.labels[d * 24 + h]);
    }
  const auto q = hourly_distribution(shuffled);
  CHECK(p.frequency == q.frequency);
}

TEST_CASE("state sequence from onsets") {
  const ActivitySet states({"A", "B"});
  // A@1, B@3, A@5 with A held for three hours starting at 5.
  std::vector<LabelSeries> labels{hourly("A", 10, [](std::size_t h) { return h == 1 || (h >= 5 && h <= 7); }),
                                  hourly("B", 10, [](std::size_t h) { return h == 3; })};
  CHECK(build_state_sequence(labels, states) == std::vector<std::size_t>{0, 1, 0});

  std::vector<LabelSeries> same{hourly("A", 4, [](std::size_t h) { return h == 2; }),
                                hourly("B", 4, [](std::size_t h) { return h == 2; })};
  CHECK(build_state_sequence(same, states) == std::vector<std::size_t>{0, 1});
  std::swap(same[0], same[1]);
  CHECK(build_state_sequence(same, states) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("appending inactive windows leaves the sequence unchanged") {
  const ActivitySet states({"A", "B"});
  std::mt19937_64 rng(9);
  std::vector<int> a(100), b(100);
  for (auto& v : a) v = static_cast<int>(rng() % 2);
  for (auto& v : b) v = static_cast<int>(rng() % 2);
  std::vector<LabelSeries> base{hourly("A", 100, [&](std::size_t h) { return a[h] != 0; }),
                                hourly("B", 100, [&](std::size_t h) { return b[h] != 0; })};
  std::vector<LabelSeries> longer{hourly("A", 150, [&](std::size_t h) { return h < 100 && a[h] != 0; }),
                                  hourly("B", 150, [&](std::size_t h) { return h < 100 && b[h] != 0; })};
  CHECK(build_state_sequence(base, states) == build_state_sequence(longer, states));
}

TEST_CASE("grid mismatch and unknown series are rejected") {
  const ActivitySet states({"A", "B"});
  std::vector<LabelSeries> bad{hourly("A", 10, [](std::size_t) { return false; }),
                               hourly("B", 9, [](std::size_t) { return false; })};
  CHECK(code_of([&] { build_state_sequence(bad, states); }) == ErrorCode::GridMismatch);
}

TEST_CASE("a window after a gap in the grid counts as an onset") {
  const ActivitySet states({"A"});
  LabelSeries s = hourly("A", 4, [](std::size_t) { return true; });
  s.window_start[2] += std::chrono::hours(5);
  s.window_start[3] += std::chrono::hours(5);
  const std::vector<LabelSeries> labels{s};
  CHECK(build_state_sequence(labels, states) == std::vector<std::size_t>{0, 0});
}

TEST_CASE("alternating chain and single-state chain") {
  const ActivitySet ab({"A", "B"});
  const std::vector<std::size_t> seq{0, 1, 0, 1, 0};
  const auto tm = estimate_transition_matrix(seq, ab);
  CHECK(tm.P[0] == std::vector<double>{0.0, 1.0});
  CHECK(tm.P[1] == std::vector<double>{1.0, 0.0});

  const ActivitySet one({"A"});
  const std::vector<std::size_t> repeat{0, 0, 0};
  CHECK(estimate_transition_matrix(repeat, one).P == std::vector<std::vector<double>>{{1.0}});

  const std::vector<std::size_t> single{0};
  CHECK(code_of([&] { estimate_transition_matrix(single, ab); }) == ErrorCode::SequenceTooShort);
  const std::vector<std::size_t> out_of_range{0, 2};
  CHECK(code_of([&] { estimate_transition_matrix(out_of_range, ab); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("published-style 5-state rows come out as exact fractions") {
  const ActivitySet s({"Sleeping", "Grooming", "Food-Preparing", "Dish-Washing", "Laundry"});
  // Sleeping -> {Grooming x1, Food x5}; Dish-Washing -> {Sleeping x4, Dish x3}.
  const std::vector<std::size_t> seq{3, 3, 3, 3, 0, 2, 3, 0, 2, 3, 0, 2, 3, 0, 1, 0, 2, 4, 0, 2};
  const auto tm = estimate_transition_matrix(seq, s);
  CHECK(tm.P[0] == std::vector<double>{0.0, 1.0 / 6.0, 5.0 / 6.0, 0.0, 0.0});
  CHECK(tm.P[3] == std::vector<double>{4.0 / 7.0, 0.0, 0.0, 3.0 / 7.0, 0.0});
}

TEST_CASE("unobserved rows are flagged unless smoothed") {
  const ActivitySet s({"A", "B", "C"});
  const std::vector<std::size_t> seq{0, 1, 0, 1};
  const auto raw = estimate_transition_matrix(seq, s);
  CHECK(raw.observed_rows == std::vector<bool>{true, true, false});
  CHECK(row_sum(raw.P[2]) == 0.0);
  const auto smooth = estimate_transition_matrix(seq, s, 1.0);
  for (const auto& row : smooth.P) CHECK(std::abs(row_sum(row) - 1.0) <= 1e-12);
  CHECK(smooth.P[2][0] == doctest::Approx(1.0 / 3.0));
  CHECK(code_of([&] { estimate_transition_matrix(seq, s, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("counts are conserved and smoothed rows stay stochastic on random sequences") {
  std::mt19937_64 rng(3);
  const ActivitySet s({"a", "b", "c", "d"});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> seq(2 + rng() % 500);
    for (auto& v : seq) v = rng() % 4;
    const auto tm = estimate_transition_matrix(seq, s, 0.5);
    std::size_t total = 0;
    for (const auto& row : tm.counts) total = std::accumulate(row.begin(), row.end(), total);
    CHECK(total == seq.size() - 1);
    for (const auto& row : tm.P) CHECK(std::abs(row_sum(row) - 1.0) <= 1e-12);
  }
}

TEST_CASE("planted matrix is recovered from a long simulated chain") {
  std::mt19937_64 rng(55);
  const auto P = oracle::random_stochastic(5, rng);
  const auto seq = simulate_chain(P, 100000, 7);
  const auto tm = estimate_transition_matrix(seq, ActivitySet({"a", "b", "c", "d", "e"}));
  for (std::size_t i = 0; i < 5; ++i) {
    double l1 = 0;
    for (std::size_t j = 0; j < 5; ++j) l1 += std::abs(tm.P[i][j] - P[i][j]);
    CHECK(l1 < 0.02);
  }
}

TEST_CASE("stationary distributions") {
  TransitionMatrix swap{ActivitySet({"a", "b"}), {{0, 1}, {1, 0}}, {{0.0, 1.0}, {1.0, 0.0}}, {true, true}, 0.0};
  const auto pi = stationary_distribution(swap);
  CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-10));

  TransitionMatrix id{ActivitySet({"a", "b"}), {{1, 0}, {0, 1}}, {{1.0, 0.0}, {0.0, 1.0}}, {true, true}, 0.0};
  CHECK(code_of([&] { stationary_distribution(id); }) == ErrorCode::ReducibleChain);

  TransitionMatrix zero{ActivitySet({"a", "b"}), {{0, 1}, {0, 0}}, {{0.0, 1.0}, {0.0, 0.0}}, {true, false}, 0.0};
  CHECK(code_of([&] { stationary_distribution(zero); }) == ErrorCode::ZeroRow);
}

TEST_CASE("stationary distribution matches a long-double power-method oracle and empirical frequencies") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = oracle::random_stochastic(5, rng);
    TransitionMatrix tm{ActivitySet({"a", "b", "c", "d", "e"}), std::vector<std::vector<std::size_t>>(5, std::vector<std::size_t>(5, 1)),
                        P, std::vector<bool>(5, true), 0.0};
    const auto pi = stationary_distribution(tm);
    const auto want = oracle::stationary(P);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(pi[i] - static_cast<double>(want[i])) < 1e-9);

    const auto path = simulate_chain(P, 200000, 100 + trial);
    std::vector<double> freq(5, 0.0);
    for (auto s : path) freq[s] += 1.0 / static_cast<double>(path.size());
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(freq[i] - pi[i]) < 0.01);
  }
}

TEST_CASE("profile CSV and transitions JSON formats") {
  const auto p = hourly_distribution(hourly("cooling", 48, [](std::size_t h) { return h % 24 == 14; }));
  const std::vector<HourlyProfile> profiles{p};
  const auto csv = format_profile_csv(profiles);
  CHECK(csv.rfind("activity,hour,frequency\ncooling,0,0\n", 0) == 0);
  CHECK(csv.find("\ncooling,14,1\n") != std::string::npos);

  const std::vector<std::size_t> seq{0, 1, 0};
  const auto tm = estimate_transition_matrix(seq, ActivitySet({"A", "B"}));
  const auto j = nlohmann::json::parse(format_transitions_json(tm));
  CHECK(j["states"] == nlohmann::json::array({"A", "B"}));
  CHECK(j["counts"][0][1] == 1);
  CHECK(j["P"][1][0] == 1.0);
  CHECK(j["smoothing"] == 0.0);
}
