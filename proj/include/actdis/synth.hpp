#pragma once

// Synthetic household generator. Planted hourly activations (optionally
// driven by an onset Markov chain) switch appliance signatures on; the
// aggregate adds a base load and clipped Gaussian noise.
//
// Randomness: std::mt19937_64 seeded with `seed`; uniforms are
// (bits >> 11) * 2^-53 and normals come from Box-Muller on two uniforms, so
// corpora reproduce bit-for-bit across standard libraries.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "actdis/ingest.hpp"

namespace actdis {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n))); }
  /// Draws an index from a discrete distribution whose weights sum to ~1.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// IrregularCycle keeps the regular cycle's on-time and number of on/off runs
/// in every hour but draws the run lengths at random, so it has nearly the
/// same time-domain statistics but no spectral line.
enum class SignatureShape { Constant, OnOffCycle, Ramp, IrregularCycle };

struct ApplianceSignature {
  SignatureShape shape = SignatureShape::Constant;
  double power_kw = 1.0;
  double duty_cycle = 1.0;    // (0, 1]; cycling shapes only
  int period_min = 10;        // cycling shapes only
  int duration_min = 60;      // minutes of use within each active hour
  /// On-minutes alternate between power + ripple and power - ripple, which
  /// moves energy above the exported spectrum bins.
  double ripple_kw = 0.0;
};

struct SynthAppliance {
  std::string name;
  ApplianceSignature signature;
};

struct SynthActivity {
  std::string name;
  std::vector<SynthAppliance> appliances;
  std::array<double, 24> hourly_activation{};  // onset probability per UTC hour
  int duration_hours = 1;
};

struct WeatherModel {
  double mean_c = 25.0;
  double daily_amplitude_c = 6.0;
  double peak_hour = 15.0;
  double day_std_c = 3.0;
  double noise_std_c = 0.2;
  int step_minutes = 1;
};

struct TempCoupling {
  bool enabled = false;
  std::string activity = "cooling-heating";
  double threshold_c = 26.0;
  double probability_gain = 0.15;    // added onset probability per degree above threshold
  double power_gain_kw_per_c = 0.0;  // added appliance power per degree above threshold
};

struct SynthConfig {
  std::uint64_t seed = 42;
  int days = 60;
  Timestamp start{};  // midnight UTC
  std::string consumer_id = "synth";
  double base_load_kw = 0.3;
  double noise_std_kw = 0.05;
  std::vector<SynthActivity> activities;
  std::vector<SynthAppliance> background;  // always on, mapped to no activity
  std::optional<std::vector<std::vector<double>>> planted_transitions;
  TempCoupling coupling;
  WeatherModel weather;

  /// The standard acceptance corpus: 60 days from 2017-06-01, seven
  /// activities, a 1.5 kW cycling cooling signature, coupling enabled. A
  /// rippled dryer mimics the cooling spectrum and an irregular water heater
  /// mimics its time statistics, so neither feature block suffices alone.
  static SynthConfig standard();
  static SynthConfig from_json(std::string_view text);
  static SynthConfig load(const std::filesystem::path& path);
  std::string to_json() const;
  void validate() const;
};

struct SynthOutput {
  LoadTable load;                       // appliance columns + metered aggregate
  TemperatureSeries temperature;
  std::vector<LabelSeries> labels;      // one per activity, every hour
  std::vector<std::array<double, 24>> planted_hourly;  // mean onset probability used per hour
  std::vector<double> activity_energy_kwh;
  std::vector<std::size_t> onset_sequence;
  std::size_t clip_events = 0;
};

SynthOutput generate(const SynthConfig& config);

/// Two traces that are on during exactly the same minutes; the first cycle
/// starts `phase` minutes in.
std::pair<std::vector<double>, std::vector<double>> cycling_pair(double power_a, double power_b, int period_min,
                                                                 double duty, std::size_t minutes, int phase = 0);

/// Markov chain path of `steps` states from a row-stochastic matrix.
std::vector<std::size_t> simulate_chain(const std::vector<std::vector<double>>& P, std::size_t steps,
                                        std::uint64_t seed, std::size_t initial = 0);

/// Writes load.csv, weather.csv and labels.csv into `dir`.
void write_dataset(const SynthOutput& out, const std::filesystem::path& dir);

}  // namespace actdis
