#include "actdis/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "actdis/activity_model.hpp"
#include "actdis/error.hpp"
#include "actdis/eval.hpp"
#include "actdis/features.hpp"
#include "actdis/ingest.hpp"
#include "actdis/log.hpp"
#include "actdis/svm.hpp"
#include "actdis/synth.hpp"

namespace actdis::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string now_utc() {
  const auto t = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return format_timestamp(Timestamp{t.time_since_epoch()});
}

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> args, std::uint64_t seed)
      : command_(std::move(command)), args_(std::move(args)), seed_(seed), started_(now_utc()) {}

  void input(const fs::path& path) { inputs_[path.string()] = sha256_hex(read_file(path)); }
  void config(std::string_view text) { config_hash_ = sha256_hex(text); }
  void output(const fs::path& path) { outputs_[path.filename().string()] = sha256_hex(read_file(path)); }

  void write(const fs::path& dir) const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["args"] = args_;
    j["config_hash"] = config_hash_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["seed"] = seed_;
    j["tool_version"] = kToolVersion;
    j["started_at"] = started_;
    j["finished_at"] = now_utc();
    write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::uint64_t seed_;
  std::string started_;
  std::string config_hash_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

struct Globals {
  std::uint64_t seed = 42;
  std::string out = ".";
  std::string config;
  bool seed_given = false;
};

struct DataOptions {
  std::string load;
  std::string weather;
  std::string labels;
  std::string activity_map;
  std::string activity = "cooling-heating";
  double threshold = kDefaultLabelThresholdKw;
  int max_gap = kDefaultMaxGapMinutes;
  bool detrend = false;
  bool minimal_time = false;
};

// Windows with features and (when a truth source exists) labels.
struct Dataset {
  LoadTable load;
  std::vector<WindowFeatures> features;
  std::vector<double> window_kwh;
  std::optional<LabelSeries> truth;  // aligned with features
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--load", o.load, "load CSV (timestamp,<appliance>...[,aggregate])")->required()->check(CLI::ExistingFile);
  cmd->add_option("--weather", o.weather, "weather CSV (timestamp,temperature_c)")->check(CLI::ExistingFile);
  cmd->add_option("--labels", o.labels, "ground-truth labels CSV (timestamp,<activity>...)")
                     ->check(CLI::ExistingFile);
  cmd->add_option("--activity-map", o.activity_map, "activity map JSON used to derive labels from sub-metered columns")
      ->check(CLI::ExistingFile);
  cmd->add_option("--activity", o.activity, "activity to detect")->capture_default_str();
  cmd->add_option("--threshold", o.threshold, "ground-truth threshold in kW (window mean must exceed it)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-gap", o.max_gap, "longest gap (minutes) filled by interpolation")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--detrend", o.detrend, "remove the window mean before the DFT");
  cmd->add_flag("--minimal-time", o.minimal_time, "time-domain block limited to d_mean and var");
}

std::optional<LabelSeries> truth_labels(const DataOptions& o, const LoadTable& load, bool required) {
  if (!o.labels.empty()) {
    for (auto& s : parse_labels_csv(o.labels))
      if (s.activity == o.activity) return s;
    throw Error(ErrorCode::InvalidArgument, "labels file has no column '" + o.activity + "'");
  }
  const bool has_appliances = load.cols() > 0;
  if (!o.activity_map.empty() || (required && has_appliances)) {
    const ActivityMap map = o.activity_map.empty() ? ActivityMap::default_map() : ActivityMap::load(o.activity_map);
    const LoadTable bundled = bundle_activities(load, map);
    return label_column(bundled, o.activity, o.threshold);
  }
  if (required) throw Error(ErrorCode::InvalidArgument, "no ground truth: pass --labels or --activity-map");
  return std::nullopt;
}

Dataset prepare(const DataOptions& o, bool truth_required, bool need_temperature, Manifest& manifest) {
  Dataset ds;
  LoadTable raw = parse_load_csv(o.load);
  manifest.input(o.load);
  std::optional<TemperatureSeries> temps;
  if (!o.weather.empty()) {
    manifest.input(o.weather);
    auto aligned = align_and_fill(raw, parse_weather_csv(o.weather), o.max_gap);
    ds.load = std::move(aligned.load);
    temps = std::move(aligned.temperature);
  } else {
    if (need_temperature) throw Error(ErrorCode::MissingTemperature, "method M4 needs --weather");
    ds.load = fill_gaps(raw, o.max_gap);
  }
  if (!o.labels.empty()) manifest.input(o.labels);
  if (!o.activity_map.empty()) manifest.input(o.activity_map);

  const auto windows = hour_windows(ds.load, temps ? &*temps : nullptr);
  if (windows.empty()) throw Error(ErrorCode::AllGaps, "no complete gap-free hour in the load data");
  FeatureOptions fo{o.detrend, o.minimal_time};
  auto all = extract_features(ds.load, windows, temps ? &*temps : nullptr, fo);

  auto truth = truth_labels(o, ds.load, truth_required);
  std::map<Timestamp, Label> truth_at;
  if (truth)
    for (std::size_t i = 0; i < truth->size(); ++i) truth_at[truth->window_start[i]] = truth->labels[i];
  if (truth) {
    ds.truth = LabelSeries{};
    ds.truth->activity = truth->activity;
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (truth) {
      auto it = truth_at.find(all[i].start);
      if (it == truth_at.end()) continue;
      ds.truth->window_start.push_back(all[i].start);
      ds.truth->labels.push_back(it->second);
    }
    ds.window_kwh.push_back(
        accurate_sum(std::span<const double>(ds.load.aggregate.data() + windows[i].offset, kWindowMinutes)) / 60.0);
    ds.features.push_back(all[i]);
  }
  if (ds.features.empty()) throw Error(ErrorCode::TimestampMismatch, "no window has a ground-truth label");
  return ds;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : split_csv_line(s))
    if (!part.empty()) out.emplace_back(part);
  return out;
}

// ------------------------------------------------------------------ commands

int cmd_simulate(const Globals& g, const std::vector<std::string>& args, bool standard, int days_override) {
  std::string config_text;
  SynthConfig config;
  if (!g.config.empty()) {
    config_text = read_file(g.config);
    config = SynthConfig::from_json(config_text);
  } else if (standard) {
    config = SynthConfig::standard();
  } else {
    throw UsageError("simulate needs --config <file> or --standard");
  }
  if (g.seed_given) config.seed = g.seed;
  if (days_override > 0) config.days = days_override;
  const std::string effective = config.to_json();
  Manifest manifest("simulate", args, config.seed);
  manifest.config(effective);
  if (!g.config.empty()) manifest.input(g.config);

  const fs::path out(g.out);
  const SynthOutput data = generate(config);
  write_dataset(data, out);
  write_file_atomic(out / "config.json", effective);
  for (const char* f : {"load.csv", "weather.csv", "labels.csv", "config.json"}) manifest.output(out / f);
  manifest.write(out);
  if (data.clip_events > 0) warn(std::to_string(data.clip_events) + " noise clipping events");
  std::cout << "wrote " << (out / "load.csv").string() << ", weather.csv, labels.csv (" << data.load.rows()
            << " minutes)\n";
  return kExitOk;
}

int cmd_train(const Globals& g, const std::vector<std::string>& args, const DataOptions& o, const std::string& method,
              const SvmHyperParams& hp_in) {
  std::vector<Method> methods;
  if (method == "all")
    methods.assign(kAllMethods.begin(), kAllMethods.end());
  else
    methods.push_back(parse_method(method));
  const bool need_temp = method != "all" && methods.front() == Method::M4;

  SvmHyperParams hp = hp_in;
  hp.seed = g.seed;
  Manifest manifest("train", args, g.seed);
  const Dataset ds = prepare(o, true, need_temp, manifest);

  AblationOptions opts;
  opts.hp = hp;
  opts.features = FeatureOptions{o.detrend, o.minimal_time};
  opts.methods = methods;
  const auto results = ablation_run(ds.features, ds.truth->labels, opts);

  const fs::path out(g.out);
  fs::create_directories(out);
  for (const auto& r : results) {
    const auto name = "model_" + std::string(to_string(r.method)) + ".json";
    save(r.model, out / name);
    manifest.output(out / name);
  }
  write_file_atomic(out / "metrics.csv", format_metrics_csv(results));
  manifest.output(out / "metrics.csv");
  manifest.write(out);
  std::cout << format_metrics_csv(results);
  return kExitOk;
}

int cmd_detect(const Globals& g, const std::vector<std::string>& args, const DataOptions& o_in,
               const std::string& model_path) {
  Manifest manifest("detect", args, g.seed);
  const SvmModel model = load_model(model_path);
  manifest.input(model_path);
  const Method method = parse_method(model.method.empty() ? "M4" : model.method);
  if (model.columns != feature_columns(method, model.feature_options))
    throw Error(ErrorCode::DimensionMismatch, "model columns do not match the " + std::string(to_string(method)) + " layout");

  DataOptions o = o_in;
  o.detrend = model.feature_options.detrend;
  o.minimal_time = model.feature_options.minimal_time;
  const bool has_truth_source = !o.labels.empty() || !o.activity_map.empty();
  const Dataset ds = prepare(o, has_truth_source, method == Method::M4, manifest);

  const FeatureMatrix raw = assemble(ds.features, {}, method, model.feature_options);
  LabelSeries pred;
  pred.activity = o.activity;
  pred.window_start = raw.window_start;
  pred.labels = predict_all(model, raw);

  const auto rows = timeline(ds.truth ? &*ds.truth : nullptr, pred, ds.window_kwh);
  const fs::path out(g.out);
  fs::create_directories(out);
  write_file_atomic(out / "timeline.csv", format_timeline_csv(rows));
  const std::vector<LabelSeries> detections{pred};
  write_file_atomic(out / "detections.csv", format_labels_csv(detections));
  manifest.output(out / "timeline.csv");
  manifest.output(out / "detections.csv");
  manifest.write(out);
  const auto flagged = std::count_if(rows.begin(), rows.end(), [](const TimelineRow& r) { return !r.flag.empty(); });
  std::cout << rows.size() << " windows, " << flagged << " flagged\n";
  return kExitOk;
}

int cmd_evaluate(const Globals& g, const std::vector<std::string>& args, const std::string& timeline_path,
                 const std::string& name) {
  Manifest manifest("evaluate", args, g.seed);
  manifest.input(timeline_path);
  const auto rows = parse_timeline_csv_text(read_file(timeline_path));
  std::vector<Label> truth;
  std::vector<Label> pred;
  for (const auto& r : rows)
    if (r.truth) {
      truth.push_back(*r.truth);
      pred.push_back(r.pred);
    }
  const MetricsReport report = metrics(confusion(truth, pred));
  const std::vector<std::pair<std::string, MetricsReport>> table{{name, report}};
  const fs::path out(g.out);
  fs::create_directories(out);
  write_file_atomic(out / "metrics.csv", format_metrics_csv(table));
  manifest.output(out / "metrics.csv");
  manifest.write(out);
  std::cout << format_metrics_csv(table);
  return kExitOk;
}

int cmd_model(const Globals& g, const std::vector<std::string>& args, const std::vector<std::string>& label_files,
              const std::string& states_arg, double smoothing) {
  Manifest manifest("model", args, g.seed);
  std::vector<LabelSeries> series;
  for (const auto& f : label_files) {
    manifest.input(f);
    for (auto& s : parse_labels_csv(f)) {
      if (std::any_of(series.begin(), series.end(), [&](const LabelSeries& e) { return e.activity == s.activity; }))
        throw Error(ErrorCode::InvalidArgument, "activity '" + s.activity + "' appears in more than one file");
      series.push_back(std::move(s));
    }
  }
  std::vector<std::string> names = states_arg.empty() ? std::vector<std::string>{} : split_list(states_arg);
  if (names.empty())
    for (const auto& s : series) names.push_back(s.activity);
  const ActivitySet states(names);

  std::vector<LabelSeries> selected;
  std::vector<HourlyProfile> profiles;
  for (const auto& name : states.names()) {
    auto it = std::find_if(series.begin(), series.end(), [&](const LabelSeries& s) { return s.activity == name; });
    if (it == series.end()) throw Error(ErrorCode::InvalidArgument, "no labels for state '" + name + "'");
    selected.push_back(*it);
    profiles.push_back(hourly_distribution(*it));
  }
  const auto seq = build_state_sequence(selected, states);
  const TransitionMatrix tm = estimate_transition_matrix(seq, states, smoothing);

  const fs::path out(g.out);
  fs::create_directories(out);
  write_file_atomic(out / "profile.csv", format_profile_csv(profiles));
  write_file_atomic(out / "transitions.json", format_transitions_json(tm));
  manifest.output(out / "profile.csv");
  manifest.output(out / "transitions.json");
  manifest.write(out);
  std::cout << seq.size() << " onsets over " << states.size() << " states\n";
  return kExitOk;
}

int cmd_plot_data(const Globals& g, const std::vector<std::string>& args, const std::string& input) {
  const std::string text = read_file(input);
  const std::string header = text.substr(0, text.find('\n'));
  const auto cols = split_list(header);
  const fs::path out(g.out);
  std::string tidy;
  std::string name;
  if (cols == std::vector<std::string>{"method", "accuracy_pct", "precision_pct", "recall_pct"}) {
    name = "metrics_tidy.csv";
    tidy = "method,metric,value\n";
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != 4) throw Error(ErrorCode::MalformedCsv, "metrics rows need 4 cells");
      tidy += std::string(cells[0]) + ",accuracy," + std::string(cells[1]) + "\n";
      tidy += std::string(cells[0]) + ",precision," + std::string(cells[2]) + "\n";
      tidy += std::string(cells[0]) + ",recall," + std::string(cells[3]) + "\n";
    }
  } else if (cols.size() >= 4 && cols[0] == "hour" && cols[2] == "truth" && cols[3] == "pred") {
    name = "timeline_step.csv";
    tidy = "x,series,value\n";
    for (const auto& r : parse_timeline_csv_text(text)) {
      const std::string truth = r.truth ? (*r.truth == Label::Active ? "1" : "0") : "NA";
      const std::string pred = r.pred == Label::Active ? "1" : "0";
      for (std::size_t x : {r.hour, r.hour + 1}) {
        const std::string xs = std::to_string(x);
        tidy += xs + ",load_kwh," + format_double(r.load_kwh) + "\n";
        tidy += xs + ",truth," + truth + "\n";
        tidy += xs + ",pred," + pred + "\n";
      }
    }
  } else if (cols == std::vector<std::string>{"activity", "hour", "frequency"}) {
    name = "profile_tidy.csv";
    tidy = text;
  } else {
    throw UsageError("plot-data: unrecognized input kind (header '" + header + "')");
  }
  Manifest manifest("plot-data", args, g.seed);
  manifest.input(input);
  fs::create_directories(out);
  write_file_atomic(out / name, tidy);
  manifest.output(out / name);
  manifest.write(out);
  std::cout << "wrote " << (out / name).string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
  CLI::App app{"Activity detection and modeling from smart-meter load data", "actdis"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals g;
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--config", g.config, "configuration file")->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic labeled household");
  bool standard = false;
  int days = 0;
  simulate->add_flag("--standard", standard, "use the built-in acceptance corpus configuration");
  simulate->add_option("--days", days, "override the number of days")->check(CLI::PositiveNumber);

  auto* train_cmd = app.add_subcommand("train", "train detectors and report test-split metrics");
  DataOptions train_data;
  add_data_options(train_cmd, train_data);
  std::string method = "M4";
  SvmHyperParams hp;
  train_cmd->add_option("--method", method, "M1|M2|M3|M4|all")->capture_default_str();
  train_cmd->add_option("--C", hp.C, "soft-margin penalty")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--tol", hp.tol, "KKT tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--max-iter", hp.max_iter, "SMO iteration cap")->capture_default_str();
  train_cmd->add_flag("--balance", hp.balance_classes, "per-class penalties by inverse class frequency");

  auto* detect = app.add_subcommand("detect", "run a trained model over load data");
  DataOptions detect_data;
  add_data_options(detect, detect_data);
  std::string model_path;
  detect->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);

  auto* evaluate = app.add_subcommand("evaluate", "metrics from a detection timeline");
  std::string timeline_path;
  std::string eval_name = "detect";
  evaluate->add_option("--timeline", timeline_path, "timeline.csv")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--name", eval_name, "method column value")->capture_default_str();

  auto* model = app.add_subcommand("model", "hourly profiles and onset transition matrix");
  std::vector<std::string> label_files;
  std::string states;
  double smoothing = 0.0;
  model->add_option("--labels", label_files, "labels or detections CSV (repeatable)")->required()->check(CLI::ExistingFile);
  model->add_option("--states", states, "comma-separated activity order (default: file order)");
  model->add_option("--smoothing", smoothing, "additive smoothing")->capture_default_str()->check(CLI::NonNegativeNumber);

  auto* plot = app.add_subcommand("plot-data", "tidy CSVs for external plotting");
  std::string plot_input;
  plot->add_option("--input", plot_input, "metrics.csv, timeline.csv or profile.csv")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  g.seed_given = app.get_option("--seed")->count() > 0;
  std::vector<std::string> args(argv + 1, argv + argc);

  try {
    if (simulate->parsed()) return cmd_simulate(g, args, standard, days);
    if (train_cmd->parsed()) return cmd_train(g, args, train_data, method, hp);
    if (detect->parsed()) return cmd_detect(g, args, detect_data, model_path);
    if (evaluate->parsed()) return cmd_evaluate(g, args, timeline_path, eval_name);
    if (model->parsed()) return cmd_model(g, args, label_files, states, smoothing);
    if (plot->parsed()) return cmd_plot_data(g, args, plot_input);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace actdis::cli
