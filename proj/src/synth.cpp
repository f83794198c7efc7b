#include "actdis/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "actdis/error.hpp"

namespace actdis {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kMinutesPerDay = 1440;

int on_minutes(const ApplianceSignature& s) {
  return std::max(1, static_cast<int>(std::lround(s.duty_cycle * s.period_min)));
}

bool cycle_on(std::size_t minute, int period, int on_len, int phase) {
  const auto p = static_cast<std::size_t>(period);
  const std::size_t shift = p - static_cast<std::size_t>(phase % period);
  return static_cast<int>((minute + shift) % p) < on_len;
}

std::string_view shape_name(SignatureShape s) {
  switch (s) {
    case SignatureShape::Constant: return "constant";
    case SignatureShape::OnOffCycle: return "on-off-cycle";
    case SignatureShape::Ramp: return "ramp";
    case SignatureShape::IrregularCycle: return "irregular-cycle";
  }
  return "constant";
}

SignatureShape parse_shape(const std::string& s) {
  if (s == "constant") return SignatureShape::Constant;
  if (s == "on-off-cycle") return SignatureShape::OnOffCycle;
  if (s == "ramp") return SignatureShape::Ramp;
  if (s == "irregular-cycle") return SignatureShape::IrregularCycle;
  throw Error(ErrorCode::InvalidConfig, "unknown signature shape '" + s + "'");
}

json appliance_to_json(const SynthAppliance& a) {
  const auto& s = a.signature;
  return {{"name", a.name},
          {"signature",
           {{"shape", shape_name(s.shape)},
            {"power_kw", s.power_kw},
            {"duty_cycle", s.duty_cycle},
            {"period_min", s.period_min},
            {"duration_min", s.duration_min},
            {"ripple_kw", s.ripple_kw}}}};
}

SynthAppliance appliance_from_json(const json& j) {
  SynthAppliance a;
  a.name = j.at("name").get<std::string>();
  const auto& s = j.at("signature");
  a.signature.shape = parse_shape(s.value("shape", std::string("constant")));
  a.signature.power_kw = s.at("power_kw").get<double>();
  a.signature.duty_cycle = s.value("duty_cycle", 1.0);
  a.signature.period_min = s.value("period_min", 10);
  a.signature.duration_min = s.value("duration_min", 60);
  a.signature.ripple_kw = s.value("ripple_kw", 0.0);
  return a;
}

void validate_signature(const std::string& name, const ApplianceSignature& s) {
  if (!(s.power_kw >= 0.0) || !std::isfinite(s.power_kw))
    throw Error(ErrorCode::InvalidConfig, name + ": power must be >= 0");
  if (!(s.duty_cycle > 0.0 && s.duty_cycle <= 1.0)) throw Error(ErrorCode::InvalidConfig, name + ": duty_cycle must be in (0,1]");
  if (s.duration_min < 1 || s.duration_min > static_cast<int>(kWindowMinutes))
    throw Error(ErrorCode::InvalidConfig, name + ": duration_min must be in [1,60]");
  if ((s.shape == SignatureShape::OnOffCycle || s.shape == SignatureShape::IrregularCycle) && s.period_min < 2)
    throw Error(ErrorCode::InvalidConfig, name + ": period_min must be >= 2");
  if (!(s.ripple_kw >= 0.0 && s.ripple_kw <= s.power_kw))
    throw Error(ErrorCode::InvalidConfig, name + ": ripple_kw must be in [0, power_kw]");
}

// Power of an appliance `m` minutes into its usage block.
double signature_power(const ApplianceSignature& s, double power, std::size_t m, int phase) {
  if (s.ripple_kw > 0.0) power += (m % 2 == 0) ? s.ripple_kw : -s.ripple_kw;
  switch (s.shape) {
    case SignatureShape::Constant: return power;
    case SignatureShape::Ramp: return power * static_cast<double>(m + 1) / static_cast<double>(s.duration_min);
    case SignatureShape::OnOffCycle: return cycle_on(m, s.period_min, on_minutes(s), phase) ? power : 0.0;
    case SignatureShape::IrregularCycle: break;  // drawn by irregular_trace
  }
  return 0.0;
}

// Random composition of `total` into `parts` positive run lengths.
std::vector<std::size_t> random_runs(std::size_t total, std::size_t parts, Rng& rng) {
  std::vector<std::size_t> cuts(total - 1);
  std::iota(cuts.begin(), cuts.end(), std::size_t{1});
  for (std::size_t i = 0; i + 1 < parts; ++i) std::swap(cuts[i], cuts[i + rng.index(cuts.size() - i)]);
  cuts.resize(parts - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::size_t> runs;
  std::size_t prev = 0;
  for (std::size_t c : cuts) {
    runs.push_back(c - prev);
    prev = c;
  }
  runs.push_back(total - prev);
  return runs;
}

// Each hour-long block keeps the regular cycle's on-time and run count but
// draws the run lengths at random.
std::vector<std::uint8_t> irregular_trace(const ApplianceSignature& s, std::size_t minutes, Rng& rng) {
  const auto period = static_cast<std::size_t>(s.period_min);
  const auto on_len = static_cast<std::size_t>(std::min(on_minutes(s), s.period_min - 1));
  std::vector<std::uint8_t> out(minutes, 0);
  for (std::size_t begin = 0; begin < minutes; begin += kWindowMinutes) {
    const std::size_t len = std::min(kWindowMinutes, minutes - begin);
    if (len < 2) {
      out[begin] = rng.uniform() < s.duty_cycle ? 1 : 0;
      continue;
    }
    const std::size_t cycles = std::max<std::size_t>(1, len / period);
    const std::size_t on_total = std::min(cycles * on_len, len - 1);
    const std::size_t n = std::min({cycles, on_total, len - on_total});
    const auto on_runs = random_runs(on_total, n, rng);
    const auto off_runs = random_runs(len - on_total, n, rng);
    std::vector<std::uint8_t> block;
    for (std::size_t i = 0; i < n; ++i) {
      block.insert(block.end(), on_runs[i], 1);
      block.insert(block.end(), off_runs[i], 0);
    }
    // A random rotation plays the role of the regular cycle's phase.
    std::rotate(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(rng.index(len)), block.end());
    std::copy(block.begin(), block.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
  }
  return out;
}

SynthActivity make_activity(std::string name, std::vector<SynthAppliance> appliances,
                            std::initializer_list<std::pair<int, double>> hours) {
  SynthActivity a;
  a.name = std::move(name);
  a.appliances = std::move(appliances);
  for (auto [h, p] : hours) a.hourly_activation[static_cast<std::size_t>(h)] = p;
  return a;
}

}  // namespace

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::size_t Rng::categorical(const std::vector<double>& weights) {
  const double u = uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return weights.size() - 1;
}

// ------------------------------------------------------------------- config

SynthConfig SynthConfig::standard() {
  using S = SignatureShape;
  SynthConfig c;
  c.seed = 42;
  c.days = 60;
  c.start = parse_timestamp("2017-06-01T00:00:00Z");
  c.base_load_kw = 0.3;
  c.noise_std_kw = 0.05;
  c.activities = {
      make_activity("sleeping", {{"bedroom_lights", {S::Constant, 0.12, 1.0, 10, 40}}},
                    {{21, 0.06}, {22, 0.08}, {23, 0.06}}),
      make_activity("grooming",
                    {{"hair_dryer", {S::Constant, 1.4, 1.0, 10, 8}}, {"bathroom_lights", {S::Constant, 0.1, 1.0, 10, 30}}},
                    {{6, 0.08}, {7, 0.08}, {8, 0.05}}),
      make_activity("food-preparing",
                    {{"oven", {S::Ramp, 2.4, 1.0, 10, 40}}, {"microwave", {S::Constant, 1.1, 1.0, 10, 5}}},
                    {{7, 0.08}, {12, 0.06}, {17, 0.06}, {18, 0.08}, {19, 0.05}}),
      make_activity("dish-washing", {{"dishwasher", {S::OnOffCycle, 1.3, 0.6, 15, 50}}},
                    {{8, 0.03}, {13, 0.03}, {19, 0.05}, {20, 0.08}, {21, 0.05}}),
      // Washer and dryer cycle in phase like the cooling pair, so the low
      // spectrum bins match; the dryer ripple shows up in the time statistics.
      make_activity("laundry",
                    {{"washer", {S::OnOffCycle, 0.3, 0.5, 12, 60}}, {"dryer", {S::OnOffCycle, 1.2, 0.5, 12, 60, 1.0}}},
                    {}),
      // Same duty and power as cooling but without a periodic tone.
      make_activity("water-heating", {{"water_heater", {S::IrregularCycle, 1.5, 0.5, 12, 60}}}, {}),
      make_activity("cooling-heating",
                    {{"compressor", {S::OnOffCycle, 1.2, 0.5, 12, 60}}, {"furnace", {S::OnOffCycle, 0.3, 0.5, 12, 60}}},
                    {}),
  };
  auto& laundry = c.activities[4].hourly_activation;
  auto& water = c.activities[5].hourly_activation;
  auto& cooling = c.activities[6].hourly_activation;
  for (std::size_t h = 0; h < 24; ++h) {
    laundry[h] = (h >= 8 && h <= 19) ? 0.08 : 0.0;
    water[h] = (h >= 6 && h <= 9) || (h >= 18 && h <= 21) ? 0.08 : (h >= 10 && h <= 17) ? 0.05 : 0.03;
    cooling[h] = (h >= 10 && h <= 20) ? 0.12 : 0.02;
  }
  c.background = {{"refrigerator", {S::OnOffCycle, 0.15, 0.4, 30, 60}}};
  c.coupling.enabled = true;
  c.coupling.activity = "cooling-heating";
  c.coupling.threshold_c = 26.0;
  c.coupling.probability_gain = 0.006;
  c.coupling.power_gain_kw_per_c = 0.0;
  return c;
}

void SynthConfig::validate() const {
  if (days < 1) throw Error(ErrorCode::InvalidConfig, "days must be >= 1");
  if (epoch_seconds(start) % kDay != 0) throw Error(ErrorCode::InvalidConfig, "start must be midnight UTC");
  if (!(base_load_kw >= 0.0)) throw Error(ErrorCode::InvalidConfig, "base_load_kw must be >= 0");
  if (!(noise_std_kw >= 0.0)) throw Error(ErrorCode::InvalidConfig, "noise_std_kw must be >= 0");
  if (activities.empty()) throw Error(ErrorCode::InvalidConfig, "no activities");
  if (weather.step_minutes < 1 || 60 % weather.step_minutes != 0)
    throw Error(ErrorCode::InvalidConfig, "weather step_minutes must divide 60");
  if (!(weather.day_std_c >= 0.0) || !(weather.noise_std_c >= 0.0))
    throw Error(ErrorCode::InvalidConfig, "weather standard deviations must be >= 0");
  std::set<std::string> names;
  std::set<std::string> appliance_names;
  for (const auto& a : activities) {
    if (a.name.empty() || !names.insert(a.name).second) throw Error(ErrorCode::InvalidConfig, "bad or duplicate activity name");
    if (a.appliances.empty()) throw Error(ErrorCode::InvalidConfig, a.name + ": no appliances");
    if (a.duration_hours < 1) throw Error(ErrorCode::InvalidConfig, a.name + ": duration_hours must be >= 1");
    for (double p : a.hourly_activation)
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, a.name + ": probabilities must be in [0,1]");
    for (const auto& ap : a.appliances) {
      if (ap.name.empty() || ap.name == "aggregate" || !appliance_names.insert(ap.name).second)
        throw Error(ErrorCode::InvalidConfig, "bad or duplicate appliance name '" + ap.name + "'");
      validate_signature(ap.name, ap.signature);
    }
  }
  for (const auto& ap : background) {
    if (ap.name.empty() || ap.name == "aggregate" || !appliance_names.insert(ap.name).second)
      throw Error(ErrorCode::InvalidConfig, "bad or duplicate appliance name '" + ap.name + "'");
    validate_signature(ap.name, ap.signature);
  }
  if (planted_transitions) {
    const auto& P = *planted_transitions;
    if (P.size() != activities.size()) throw Error(ErrorCode::InvalidConfig, "planted_transitions must be K x K");
    for (std::size_t i = 0; i < P.size(); ++i) {
      if (P[i].size() != activities.size()) throw Error(ErrorCode::InvalidConfig, "planted_transitions must be K x K");
      double sum = 0.0;
      for (double v : P[i]) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidConfig, "transition probabilities must be in [0,1]");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidConfig, "planted_transitions rows must sum to 1");
      if (std::all_of(activities[i].hourly_activation.begin(), activities[i].hourly_activation.end(),
                      [](double p) { return p == 0.0; }))
        throw Error(ErrorCode::InvalidConfig, activities[i].name + ": chain mode needs a non-zero onset probability");
    }
  }
  if (coupling.enabled) {
    if (!names.contains(coupling.activity))
      throw Error(ErrorCode::InvalidConfig, "coupled activity '" + coupling.activity + "' not defined");
    if (!(coupling.probability_gain >= 0.0) || !(coupling.power_gain_kw_per_c >= 0.0))
      throw Error(ErrorCode::InvalidConfig, "coupling gains must be >= 0");
  }
}

std::string SynthConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["days"] = days;
  j["start"] = format_timestamp(start);
  j["consumer_id"] = consumer_id;
  j["base_load_kw"] = base_load_kw;
  j["noise_std_kw"] = noise_std_kw;
  j["activities"] = json::array();
  for (const auto& a : activities) {
    json ja;
    ja["name"] = a.name;
    ja["duration_hours"] = a.duration_hours;
    ja["hourly_activation"] = a.hourly_activation;
    ja["appliances"] = json::array();
    for (const auto& ap : a.appliances) ja["appliances"].push_back(appliance_to_json(ap));
    j["activities"].push_back(ja);
  }
  j["background"] = json::array();
  for (const auto& ap : background) j["background"].push_back(appliance_to_json(ap));
  j["planted_transitions"] = planted_transitions ? json(*planted_transitions) : json(nullptr);
  j["cooling_temp_coupling"] = {{"enabled", coupling.enabled},
                                {"activity", coupling.activity},
                                {"threshold_c", coupling.threshold_c},
                                {"probability_gain", coupling.probability_gain},
                                {"power_gain_kw_per_c", coupling.power_gain_kw_per_c}};
  j["weather"] = {{"mean_c", weather.mean_c},
                  {"daily_amplitude_c", weather.daily_amplitude_c},
                  {"peak_hour", weather.peak_hour},
                  {"day_std_c", weather.day_std_c},
                  {"noise_std_c", weather.noise_std_c},
                  {"step_minutes", weather.step_minutes}};
  return j.dump(2) + "\n";
}

SynthConfig SynthConfig::from_json(std::string_view text) {
  SynthConfig c;
  try {
    const json j = json::parse(text);
    c.seed = j.value("seed", std::uint64_t{42});
    c.days = j.value("days", 60);
    c.start = parse_timestamp(j.value("start", std::string("2017-06-01T00:00:00Z")));
    c.consumer_id = j.value("consumer_id", std::string("synth"));
    c.base_load_kw = j.value("base_load_kw", 0.3);
    c.noise_std_kw = j.value("noise_std_kw", 0.05);
    for (const auto& ja : j.at("activities")) {
      SynthActivity a;
      a.name = ja.at("name").get<std::string>();
      a.duration_hours = ja.value("duration_hours", 1);
      const auto probs = ja.at("hourly_activation").get<std::vector<double>>();
      if (probs.size() != 24) throw Error(ErrorCode::InvalidConfig, a.name + ": hourly_activation needs 24 values");
      std::copy(probs.begin(), probs.end(), a.hourly_activation.begin());
      for (const auto& jp : ja.at("appliances")) a.appliances.push_back(appliance_from_json(jp));
      c.activities.push_back(std::move(a));
    }
    if (j.contains("background"))
      for (const auto& jp : j["background"]) c.background.push_back(appliance_from_json(jp));
    if (j.contains("planted_transitions") && !j["planted_transitions"].is_null())
      c.planted_transitions = j["planted_transitions"].get<std::vector<std::vector<double>>>();
    if (j.contains("cooling_temp_coupling")) {
      const auto& t = j["cooling_temp_coupling"];
      c.coupling.enabled = t.value("enabled", true);
      c.coupling.activity = t.value("activity", c.coupling.activity);
      c.coupling.threshold_c = t.value("threshold_c", c.coupling.threshold_c);
      c.coupling.probability_gain = t.value("probability_gain", c.coupling.probability_gain);
      c.coupling.power_gain_kw_per_c = t.value("power_gain_kw_per_c", c.coupling.power_gain_kw_per_c);
    }
    if (j.contains("weather")) {
      const auto& w = j["weather"];
      c.weather.mean_c = w.value("mean_c", c.weather.mean_c);
      c.weather.daily_amplitude_c = w.value("daily_amplitude_c", c.weather.daily_amplitude_c);
      c.weather.peak_hour = w.value("peak_hour", c.weather.peak_hour);
      c.weather.day_std_c = w.value("day_std_c", c.weather.day_std_c);
      c.weather.noise_std_c = w.value("noise_std_c", c.weather.noise_std_c);
      c.weather.step_minutes = w.value("step_minutes", c.weather.step_minutes);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.validate();
  return c;
}

SynthConfig SynthConfig::load(const std::filesystem::path& path) { return from_json(read_file(path)); }

// --------------------------------------------------------------- generation

std::pair<std::vector<double>, std::vector<double>> cycling_pair(double power_a, double power_b, int period_min,
                                                                 double duty, std::size_t minutes, int phase) {
  if (period_min < 2) throw Error(ErrorCode::InvalidPeriod, "period must be >= 2 minutes");
  if (!(duty > 0.0 && duty <= 1.0)) throw Error(ErrorCode::InvalidArgument, "duty must be in (0,1]");
  if (!(power_a >= 0.0) || !(power_b >= 0.0)) throw Error(ErrorCode::InvalidArgument, "power must be >= 0");
  const int on_len = std::max(1, static_cast<int>(std::lround(duty * period_min)));
  std::pair<std::vector<double>, std::vector<double>> out{std::vector<double>(minutes, 0.0),
                                                          std::vector<double>(minutes, 0.0)};
  for (std::size_t m = 0; m < minutes; ++m)
    if (cycle_on(m, period_min, on_len, phase)) {
      out.first[m] = power_a;
      out.second[m] = power_b;
    }
  return out;
}

std::vector<std::size_t> simulate_chain(const std::vector<std::vector<double>>& P, std::size_t steps,
                                        std::uint64_t seed, std::size_t initial) {
  if (P.empty() || initial >= P.size()) throw Error(ErrorCode::InvalidArgument, "bad chain");
  Rng rng(seed);
  std::vector<std::size_t> path;
  path.reserve(steps);
  std::size_t s = initial;
  for (std::size_t i = 0; i < steps; ++i) {
    path.push_back(s);
    s = rng.categorical(P[s]);
  }
  return path;
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t days = static_cast<std::size_t>(config.days);
  const std::size_t minutes = days * kMinutesPerDay;
  const std::size_t hours = days * 24;
  const std::size_t n_act = config.activities.size();

  // Column layout: activity appliances in order, then background appliances.
  std::vector<std::string> columns;
  std::vector<std::vector<std::size_t>> act_cols(n_act);
  for (std::size_t a = 0; a < n_act; ++a)
    for (const auto& ap : config.activities[a].appliances) {
      act_cols[a].push_back(columns.size());
      columns.push_back(ap.name);
    }
  const std::size_t first_bg = columns.size();
  for (const auto& ap : config.background) columns.push_back(ap.name);
  const std::size_t k = columns.size();

  SynthOutput out;
  LoadTable& load = out.load;
  load.consumer_id = config.consumer_id;
  load.start = config.start;
  load.columns = columns;
  load.values.assign(minutes * k, 0.0);
  load.aggregate.assign(minutes, 0.0);
  load.observed.assign(minutes, 1);
  load.aggregate_metered = true;

  // Temperature, one value per minute.
  std::vector<double> temp(minutes);
  const auto& wm = config.weather;
  for (std::size_t d = 0; d < days; ++d) {
    const double anomaly = wm.day_std_c * rng.normal();
    for (std::size_t m = 0; m < kMinutesPerDay; ++m) {
      const double hour = static_cast<double>(m) / 60.0;
      temp[d * kMinutesPerDay + m] = wm.mean_c + anomaly +
                                     wm.daily_amplitude_c * std::cos(2.0 * std::numbers::pi * (hour - wm.peak_hour) / 24.0) +
                                     wm.noise_std_c * rng.normal();
    }
  }

  std::optional<std::size_t> coupled;
  if (config.coupling.enabled)
    for (std::size_t a = 0; a < n_act; ++a)
      if (config.activities[a].name == config.coupling.activity) coupled = a;

  std::vector<std::vector<Label>> active(n_act, std::vector<Label>(hours, Label::Inactive));
  // Coupling boost summed per hour of day, so an uncoupled mean stays exact.
  std::vector<std::array<double, 24>> p_sum(n_act);
  std::vector<std::array<double, 24>> p_cnt(n_act);
  std::vector<int> remaining(n_act, 0);
  const bool chain = config.planted_transitions.has_value();
  std::size_t pending = chain ? rng.index(n_act) : 0;
  std::size_t ready_at = 0;

  for (std::size_t h = 0; h < hours; ++h) {
    const std::size_t hod = h % 24;
    const double hour_temp =
        accurate_sum(std::span<const double>(temp.data() + h * kWindowMinutes, kWindowMinutes)) / 60.0;
    const double excess = std::max(0.0, hour_temp - config.coupling.threshold_c);
    auto onset_probability = [&](std::size_t a) {
      double p = config.activities[a].hourly_activation[hod];
      if (coupled && *coupled == a) p = std::clamp(p + config.coupling.probability_gain * excess, 0.0, 1.0);
      return p;
    };

    for (std::size_t a = 0; a < n_act; ++a)
      if (remaining[a] > 0) {
        active[a][h] = Label::Active;
        --remaining[a];
      }
    if (chain) {
      if (h >= ready_at) {
        const double p = onset_probability(pending);
        p_sum[pending][hod] += p - config.activities[pending].hourly_activation[hod];
        p_cnt[pending][hod] += 1.0;
        if (rng.uniform() < p) {
          const int d = config.activities[pending].duration_hours;
          active[pending][h] = Label::Active;
          remaining[pending] = d - 1;
          out.onset_sequence.push_back(pending);
          ready_at = h + static_cast<std::size_t>(d) + 1;
          pending = rng.categorical((*config.planted_transitions)[pending]);
        }
      }
    } else {
      for (std::size_t a = 0; a < n_act; ++a) {
        if (active[a][h] == Label::Active) continue;
        const double p = onset_probability(a);
        p_sum[a][hod] += p - config.activities[a].hourly_activation[hod];
        p_cnt[a][hod] += 1.0;
        if (rng.uniform() < p) {
          active[a][h] = Label::Active;
          remaining[a] = config.activities[a].duration_hours - 1;
          out.onset_sequence.push_back(a);
        }
      }
    }

    // Appliance traces for this hour.
    for (std::size_t a = 0; a < n_act; ++a) {
      if (active[a][h] != Label::Active) continue;
      const auto& act = config.activities[a];
      int longest = 1;
      for (const auto& ap : act.appliances) longest = std::max(longest, ap.signature.duration_min);
      const std::size_t offset = rng.index(kWindowMinutes - static_cast<std::size_t>(longest) + 1);
      const int phase = static_cast<int>(rng.index(kWindowMinutes));
      for (std::size_t i = 0; i < act.appliances.size(); ++i) {
        const auto& sig = act.appliances[i].signature;
        double power = sig.power_kw;
        if (coupled && *coupled == a) power += config.coupling.power_gain_kw_per_c * excess;
        const std::size_t col = act_cols[a][i];
        const auto dur = static_cast<std::size_t>(sig.duration_min);
        std::vector<std::uint8_t> irregular;
        if (sig.shape == SignatureShape::IrregularCycle) irregular = irregular_trace(sig, dur, rng);
        for (std::size_t m = 0; m < dur; ++m) {
          const std::size_t row = h * kWindowMinutes + offset + m;
          load.values[row * k + col] =
              sig.shape == SignatureShape::IrregularCycle ? (irregular[m] ? power : 0.0) : signature_power(sig, power, m, phase);
        }
      }
    }
  }

  // Background appliances run continuously with a fixed random phase.
  for (std::size_t b = 0; b < config.background.size(); ++b) {
    const auto& sig = config.background[b].signature;
    const bool continuous = sig.shape == SignatureShape::OnOffCycle || sig.shape == SignatureShape::IrregularCycle;
    const int phase = sig.shape == SignatureShape::OnOffCycle ? static_cast<int>(rng.index(static_cast<std::size_t>(sig.period_min))) : 0;
    std::vector<std::uint8_t> irregular;
    if (sig.shape == SignatureShape::IrregularCycle) irregular = irregular_trace(sig, minutes, rng);
    for (std::size_t row = 0; row < minutes; ++row) {
      const std::size_t m = continuous ? row : row % kWindowMinutes;
      double v = 0.0;
      if (sig.shape == SignatureShape::IrregularCycle)
        v = irregular[row] ? sig.power_kw : 0.0;
      else if (continuous || m < static_cast<std::size_t>(sig.duration_min))
        v = signature_power(sig, sig.power_kw, m, phase);
      load.values[row * k + first_bg + b] = v;
    }
  }

  for (std::size_t row = 0; row < minutes; ++row) {
    double total = config.base_load_kw;
    for (std::size_t c = 0; c < k; ++c) total += load.values[row * k + c];
    if (config.noise_std_kw > 0.0) total += config.noise_std_kw * rng.normal();
    if (total < 0.0) {
      total = 0.0;
      ++out.clip_events;
    }
    load.aggregate[row] = total;
  }

  out.temperature.start = config.start;
  out.temperature.step_seconds = static_cast<std::int64_t>(wm.step_minutes) * kMinute;
  for (std::size_t m = 0; m < minutes; m += static_cast<std::size_t>(wm.step_minutes)) {
    out.temperature.values.push_back(temp[m]);
    out.temperature.observed.push_back(1);
  }

  out.planted_hourly.resize(n_act);
  out.activity_energy_kwh.assign(n_act, 0.0);
  for (std::size_t a = 0; a < n_act; ++a) {
    for (std::size_t h = 0; h < 24; ++h)
      out.planted_hourly[a][h] =
          config.activities[a].hourly_activation[h] + (p_cnt[a][h] > 0 ? p_sum[a][h] / p_cnt[a][h] : 0.0);
    LabelSeries ls;
    ls.activity = config.activities[a].name;
    for (std::size_t h = 0; h < hours; ++h) {
      ls.window_start.push_back(config.start + std::chrono::seconds{static_cast<std::int64_t>(h) * kHour});
      ls.labels.push_back(active[a][h]);
    }
    out.labels.push_back(std::move(ls));
    double e = 0.0;
    for (std::size_t row = 0; row < minutes; ++row)
      for (std::size_t c : act_cols[a]) e += load.values[row * k + c];
    out.activity_energy_kwh[a] = e / 60.0;
  }
  return out;
}

void write_dataset(const SynthOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "load.csv", format_load_csv(out.load));
  write_file_atomic(dir / "weather.csv", format_weather_csv(out.temperature));
  write_file_atomic(dir / "labels.csv", format_labels_csv(out.labels));
}

}  // namespace actdis
