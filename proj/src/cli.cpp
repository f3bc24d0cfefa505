// Copyright 2026 The ACS Diagnostic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acs/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <json.hpp>
#include <optional>

#include "acs/config.hpp"
#include "acs/error.hpp"
#include "acs/eval.hpp"
#include "acs/forest.hpp"
#include "acs/model_format.hpp"
#include "acs/replicate.hpp"
#include "acs/simulator.hpp"
#include "acs/telemetry.hpp"

namespace acs::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

// Everything a subcommand reads or reports besides its own flags.
struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string config_path;
  std::string manifest_path;
  KeyValueConfig config;
  json manifest = json::object();

  std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    return f;
  }

  // Runs `write` against the named file, or the data stream if none.
  void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
      write(out);
    } else {
      auto f = open_out(path);
      write(f);
      manifest["outputs"].push_back(path);
    }
  }
};

// Fills `value` from the config file unless the flag was given.
template <typename T>
void from_config(const CLI::Option* flag, const std::optional<T>& cfg, T& value) {
  if (flag->count() == 0 && cfg) value = *cfg;
}

void load_config(Context& ctx) {
  if (ctx.config_path.empty()) return;
  ctx.config = KeyValueConfig::load(ctx.config_path);
  ctx.manifest["config_file"] = ctx.config_path;
}

void reject_unused_config(const Context& ctx) {
  const auto unused = ctx.config.unused_keys();
  if (!unused.empty()) {
    std::string keys;
    for (const auto& k : unused) keys += (keys.empty() ? "" : ", ") + k;
    throw UsageError("unknown config keys for this command: " + keys);
  }
}

json metrics_json(const eval::Metrics& m, const eval::ConfusionMatrix& cm) {
  json j;
  for (auto k : eval::kAllMetrics) j[eval::metric_name(k)] = m[k];
  j["tp"] = cm.tp;
  j["tn"] = cm.tn;
  j["fp"] = cm.fp;
  j["fn"] = cm.fn;
  return j;
}

json sim_json(const sim::SimConfig& c) {
  json j{{"vcc", c.vcc},
         {"r_fixed", c.r_fixed},
         {"r0", c.r0},
         {"alpha", c.alpha},
         {"adc_max", c.adc_max},
         {"noise_sigma", c.noise_sigma},
         {"levels", c.levels},
         {"rows_per_level", c.rows_per_level},
         {"sample_rate_hz", c.sample_rate_hz},
         {"motion.amplitude", c.motion.amplitude},
         {"motion.frequency", c.motion.frequency_hz},
         {"motion.spike_prob", c.motion.spike_prob},
         {"motion.spike_mag", c.motion.spike_mag}};
  if (c.sensor_gain) j["sensor_gain"] = *c.sensor_gain;
  if (c.sensor_offset) j["sensor_offset"] = *c.sensor_offset;
  if (c.motion.phase) j["motion.phase"] = *c.motion.phase;
  return j;
}

json params_json(const forest::TrainParams& p) {
  return {{"trees", p.n_trees},
          {"max_depth", p.max_depth},
          {"max_features", p.max_features},
          {"min_samples_split", p.min_samples_split},
          {"bootstrap", p.bootstrap}};
}

// Train-parameter flags shared by `train` and `replicate`.
struct ParamFlags {
  forest::TrainParams params;
  CLI::Option* trees = nullptr;
  CLI::Option* depth = nullptr;
  CLI::Option* features = nullptr;
  CLI::Option* min_split = nullptr;
  CLI::Option* no_bootstrap = nullptr;
  bool bootstrap_off = false;

  void add(CLI::App* app) {
    trees = app->add_option("--trees", params.n_trees, "Number of trees")
                ->capture_default_str();
    depth = app->add_option("--max-depth", params.max_depth, "Depth cap")
                ->capture_default_str();
    features = app->add_option("--max-features", params.max_features,
                               "Features tried per split")
                   ->capture_default_str();
    min_split = app->add_option("--min-samples-split", params.min_samples_split,
                                "Smallest node that may split")
                    ->capture_default_str();
    no_bootstrap = app->add_flag("--no-bootstrap", bootstrap_off,
                                 "Grow every tree on the full training set");
  }

  forest::TrainParams resolve(const KeyValueConfig& cfg) {
    auto as_int = [](std::optional<long long> v) -> std::optional<int> {
      if (!v) return std::nullopt;
      return static_cast<int>(*v);
    };
    from_config(trees, as_int(cfg.get_int("trees")), params.n_trees);
    from_config(depth, as_int(cfg.get_int("max_depth")), params.max_depth);
    from_config(features, as_int(cfg.get_int("max_features")),
                params.max_features);
    from_config(min_split, as_int(cfg.get_int("min_samples_split")),
                params.min_samples_split);
    if (no_bootstrap->count() > 0) {
      params.bootstrap = false;
    } else if (auto b = cfg.get_bool("bootstrap")) {
      params.bootstrap = *b;
    }
    params.validate();
    return params;
  }
};

forest::RandomForest load_model(Context& ctx, const std::string& path) {
  const auto blob = model::read_model_file(path);
  auto forest = model::decode_model(blob);
  ctx.manifest["inputs"].push_back(path);
  ctx.manifest["model_digest"] = model::model_digest(blob);
  return forest;
}

Dataset load_dataset(Context& ctx, const std::string& path) {
  auto d = sim::read_csv(fs::path(path));
  ctx.manifest["inputs"].push_back(path);
  return d;
}

sim::SimConfig resolve_sim(const KeyValueConfig& cfg, CLI::Option* levels_flag,
                           const std::vector<double>& levels,
                           CLI::Option* rows_flag, int rows_per_level) {
  sim::SimConfig sc;
  sc.apply(cfg);
  if (levels_flag->count() > 0) sc.levels = levels;
  if (rows_flag->count() > 0) sc.rows_per_level = rows_per_level;
  sc.validate();
  return sc;
}

void write_events_text(const std::vector<telemetry::DiagnosticEvent>& events,
                       std::ostream& out) {
  out << "timestamp_ms,class,probability\n";
  for (const auto& e : events) {
    out << e.timestamp_ms << ',' << to_string(e.label) << ','
        << eval::format_double(e.probability) << '\n';
  }
}

int run(const std::vector<std::string>& args, Context& ctx) {
  CLI::App app{"Noninvasive ACS diagnostic pipeline"};
  app.require_subcommand(1);
  app.add_option("--config", ctx.config_path, "key = value config file");
  app.add_option("--manifest", ctx.manifest_path,
                 "Write the run manifest (JSON) to this file");
  app.set_version_flag("--version", kToolVersion);

  std::function<void()> action;

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Generate a protocol dataset");
  std::string sim_scenario = "motionless";
  std::uint64_t sim_seed = 42;
  std::string sim_out;
  std::string sim_frames_out;
  std::vector<double> sim_levels;
  int sim_rows = 80;
  auto* sim_scenario_opt =
      simulate->add_option("--scenario", sim_scenario, "motionless | motion")
          ->check(CLI::IsMember({"motionless", "motion"}))
          ->capture_default_str();
  auto* sim_seed_opt =
      simulate->add_option("--seed", sim_seed, "Dataset seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output CSV")->required();
  auto* sim_levels_opt = simulate->add_option(
      "--levels", sim_levels, "Comma-separated pressure levels (mmHg)")
      ->delimiter(',');
  auto* sim_rows_opt =
      simulate->add_option("--rows-per-level", sim_rows, "Rows per level");
  simulate->add_option("--frames-out", sim_frames_out,
                       "Also write the frames as a wire-format stream");
  simulate->callback([&] {
    action = [&] {
      from_config(sim_scenario_opt, ctx.config.get_string("scenario"), sim_scenario);
      auto cfg_seed = ctx.config.get_int("seed");
      from_config(sim_seed_opt,
                  cfg_seed ? std::optional<std::uint64_t>(
                                 static_cast<std::uint64_t>(*cfg_seed))
                           : std::nullopt,
                  sim_seed);
      const auto sc = resolve_sim(ctx.config, sim_levels_opt, sim_levels,
                                  sim_rows_opt, sim_rows);
      reject_unused_config(ctx);
      const auto scenario =
          sim_scenario == "motion" ? Scenario::kMotion : Scenario::kMotionless;
      const auto data = sim::generate_dataset(scenario, sc, sim_seed);
      sim::write_csv(data, fs::path(sim_out));
      if (!sim_frames_out.empty()) {
        std::vector<std::uint8_t> bytes;
        for (const auto& r : data.rows) telemetry::append_frame(bytes, r.frame);
        auto f = ctx.open_out(sim_frames_out);
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        ctx.manifest["outputs"].push_back(sim_frames_out);
      }
      ctx.manifest["outputs"].push_back(sim_out);
      ctx.manifest["seeds"] = {{"dataset", sim_seed}};
      ctx.manifest["config"] = sim_json(sim::resolve_sensors(sc, sim_seed));
      ctx.manifest["config"]["scenario"] = sim_scenario;
      ctx.err << "wrote " << data.size() << " rows (" << data.count(Label::kPositive)
              << " positive) to " << sim_out << '\n';
    };
  });

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train a forest on a dataset CSV");
  std::string train_in;
  std::string train_out;
  std::uint64_t train_seed = 42;
  ParamFlags train_flags;
  train->add_option("--train", train_in, "Training CSV")->required();
  train->add_option("--out", train_out, "Output .rfm model")->required();
  auto* train_seed_opt =
      train->add_option("--seed", train_seed, "Forest seed")->capture_default_str();
  train_flags.add(train);
  train->callback([&] {
    action = [&] {
      const auto params = train_flags.resolve(ctx.config);
      auto cfg_seed = ctx.config.get_int("seed");
      from_config(train_seed_opt,
                  cfg_seed ? std::optional<std::uint64_t>(
                                 static_cast<std::uint64_t>(*cfg_seed))
                           : std::nullopt,
                  train_seed);
      reject_unused_config(ctx);
      const auto data = load_dataset(ctx, train_in);
      const auto forest = forest::train_forest(data.rows, params, train_seed);
      bool saturated = false;
      const auto blob = model::encode_model(forest, &saturated);
      if (saturated) ctx.err << "warning: leaf counts saturated at 2^24-1\n";
      model::write_model_file(train_out, blob);
      ctx.manifest["outputs"].push_back(train_out);
      ctx.manifest["seeds"] = {{"forest", train_seed}};
      ctx.manifest["config"] = params_json(params);
      ctx.manifest["model_digest"] = model::model_digest(blob);
      ctx.out << model::model_digest(blob) << '\n';
    };
  });

  // evaluate ---------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "Score a model on a test CSV");
  std::string eval_model;
  std::string eval_test;
  std::string eval_out;
  double eval_threshold = 0.5;
  evaluate->add_option("--model", eval_model, "Model .rfm")->required();
  evaluate->add_option("--test", eval_test, "Test CSV")->required();
  auto* eval_threshold_opt =
      evaluate->add_option("--threshold", eval_threshold, "Vote-fraction cut")
          ->capture_default_str();
  evaluate->add_option("--out", eval_out, "Metrics CSV (default: stdout)");
  evaluate->callback([&] {
    action = [&] {
      from_config(eval_threshold_opt, ctx.config.get_double("threshold"),
                  eval_threshold);
      reject_unused_config(ctx);
      const auto forest = load_model(ctx, eval_model);
      const auto test = load_dataset(ctx, eval_test);
      const auto cm = eval::confusion_matrix(
          eval::labels_of(test),
          eval::forest_predictions(forest, test, eval_threshold));
      const auto m = eval::compute_metrics(cm);
      ctx.emit(eval_out, [&](std::ostream& o) { eval::write_metrics_csv(m, cm, o); });
      ctx.manifest["config"] = {{"threshold", eval_threshold}};
      ctx.manifest["metrics"] = metrics_json(m, cm);
    };
  });

  // roc --------------------------------------------------------------------
  auto* roc = app.add_subcommand("roc", "ROC curve and AUC of a model");
  std::string roc_model;
  std::string roc_test;
  std::string roc_out;
  roc->add_option("--model", roc_model, "Model .rfm")->required();
  roc->add_option("--test", roc_test, "Test CSV")->required();
  roc->add_option("--out", roc_out, "ROC CSV (default: stdout)");
  roc->callback([&] {
    action = [&] {
      reject_unused_config(ctx);
      const auto forest = load_model(ctx, roc_model);
      const auto test = load_dataset(ctx, roc_test);
      const auto curve = eval::roc_points(eval::forest_scores(forest, test),
                                          eval::labels_of(test));
      ctx.emit(roc_out, [&](std::ostream& o) { eval::write_roc_csv(curve, o); });
      (roc_out.empty() ? ctx.err : ctx.out)
          << "auc " << eval::format_double(curve.auc) << '\n';
      ctx.manifest["metrics"] = {{"auc", curve.auc}};
    };
  });

  // compare ----------------------------------------------------------------
  auto* compare = app.add_subcommand(
      "compare", "Significance verdicts between two metrics CSVs");
  std::string cmp_a;
  std::string cmp_b;
  double cmp_rel = 0.10;
  compare->add_option("first", cmp_a, "Metrics CSV")->required();
  compare->add_option("second", cmp_b, "Metrics CSV")->required();
  auto* cmp_rel_opt =
      compare->add_option("--rel", cmp_rel, "Relative error bar")->capture_default_str();
  compare->callback([&] {
    action = [&] {
      from_config(cmp_rel_opt, ctx.config.get_double("rel"), cmp_rel);
      reject_unused_config(ctx);
      auto read = [&](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open " + path);
        ctx.manifest["inputs"].push_back(path);
        return eval::read_metrics_csv(in);
      };
      const auto a = read(cmp_a);
      const auto b = read(cmp_b);
      ctx.out << "metric,first,second,verdict\n";
      for (auto m : eval::kAllMetrics) {
        const auto v = eval::significance_overlap(a.at(m), b.at(m), cmp_rel);
        const char* verdict =
            v == eval::Significance::kSignificant ? "significant" : "insignificant";
        ctx.out << eval::metric_name(m) << ',' << eval::format_double(a.at(m))
                << ',' << eval::format_double(b.at(m)) << ',' << verdict << '\n';
        ctx.manifest["metrics"][eval::metric_name(m)] = verdict;
      }
      ctx.manifest["config"] = {{"rel", cmp_rel}};
    };
  });

  // baseline ---------------------------------------------------------------
  auto* baseline = app.add_subcommand(
      "baseline", "Linear-average baseline: calibrate on train, score test");
  std::string base_train;
  std::string base_test;
  std::string base_out;
  std::string base_rule = "mean";
  baseline->add_option("--train", base_train, "Calibration CSV")->required();
  baseline->add_option("--test", base_test, "Test CSV")->required();
  baseline->add_option("--rule", base_rule, "mean | any")
      ->check(CLI::IsMember({"mean", "any"}))
      ->capture_default_str();
  baseline->add_option("--out", base_out, "Metrics CSV (default: stdout)");
  baseline->callback([&] {
    action = [&] {
      reject_unused_config(ctx);
      const auto train_set = load_dataset(ctx, base_train);
      const auto test = load_dataset(ctx, base_test);
      const auto cal = eval::calibrate_linear(train_set);
      const auto rule = base_rule == "any" ? eval::BaselineRule::kAnySensor
                                           : eval::BaselineRule::kMean;
      const auto cm = eval::confusion_matrix(
          eval::labels_of(test), eval::baseline_predictions(cal, test, rule));
      const auto m = eval::compute_metrics(cm);
      ctx.emit(base_out, [&](std::ostream& o) { eval::write_metrics_csv(m, cm, o); });
      ctx.manifest["config"] = {{"rule", base_rule}};
      ctx.manifest["metrics"] = metrics_json(m, cm);
    };
  });

  // export -----------------------------------------------------------------
  auto* exporter = app.add_subcommand("export", "Model digest and tree dump");
  std::string exp_model;
  bool exp_digest_only = false;
  exporter->add_option("--model", exp_model, "Model .rfm")->required();
  exporter->add_flag("--digest-only", exp_digest_only, "Print only the digest");
  exporter->callback([&] {
    action = [&] {
      reject_unused_config(ctx);
      const auto forest = load_model(ctx, exp_model);
      ctx.out << "digest " << ctx.manifest["model_digest"].get<std::string>()
              << '\n';
      if (!exp_digest_only) ctx.out << model::dump_forest(forest);
    };
  });

  // stream -----------------------------------------------------------------
  auto* stream = app.add_subcommand(
      "stream", "Classify a frame stream and emit diagnostic events");
  std::string st_model;
  std::string st_input;
  std::string st_input_format;
  std::string st_format = "text";
  std::string st_out;
  double st_threshold = 0.5;
  int st_debounce = 1;
  double st_rate = 0.0;
  stream->add_option("--model", st_model, "Model .rfm")->required();
  stream->add_option("--input", st_input, "Frames: dataset CSV or wire stream")
      ->required();
  stream->add_option("--input-format", st_input_format, "csv | wire")
      ->check(CLI::IsMember({"csv", "wire"}));
  stream->add_option("--format", st_format, "text | wire")
      ->check(CLI::IsMember({"text", "wire"}))
      ->capture_default_str();
  stream->add_option("--out", st_out, "Event output (default: stdout)");
  auto* st_threshold_opt =
      stream->add_option("--threshold", st_threshold, "Vote-fraction cut")
          ->capture_default_str();
  auto* st_debounce_opt =
      stream->add_option("--debounce", st_debounce, "Odd majority window")
          ->capture_default_str();
  stream->add_option("--rate", st_rate, "Replay rate in frames/s (0 = ASAP)")
      ->capture_default_str();
  stream->callback([&] {
    action = [&] {
      from_config(st_threshold_opt, ctx.config.get_double("threshold"), st_threshold);
      auto cfg_debounce = ctx.config.get_int("debounce");
      from_config(st_debounce_opt,
                  cfg_debounce ? std::optional<int>(static_cast<int>(*cfg_debounce))
                               : std::nullopt,
                  st_debounce);
      reject_unused_config(ctx);
      const auto forest = load_model(ctx, st_model);
      if (st_input_format.empty()) {
        st_input_format = fs::path(st_input).extension() == ".csv" ? "csv" : "wire";
      }

      Dataset frames;
      if (st_input_format == "csv") {
        frames = load_dataset(ctx, st_input);
      } else {
        std::ifstream in(st_input, std::ios::binary);
        if (!in) throw DataError("cannot open " + st_input);
        const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
        const auto decoded = telemetry::decode_stream(bytes);
        for (const auto& f : decoded.frames) {
          if (const auto* s = std::get_if<SensorFrame>(&f)) {
            frames.rows.push_back({*s, 0.0, Label::kNegative});
          }
        }
        if (decoded.skipped > 0) {
          ctx.err << "skipped " << decoded.skipped << " malformed octets\n";
        }
        ctx.manifest["inputs"].push_back(st_input);
        ctx.manifest["skipped_octets"] = decoded.skipped;
      }

      telemetry::Pipeline pipeline(forest, {st_threshold, st_debounce});
      telemetry::ReplaySource source(frames, st_rate);
      std::vector<telemetry::DiagnosticEvent> events;
      while (auto f = source.next()) {
        if (auto e = pipeline.process(*f)) events.push_back(*e);
      }
      if (pipeline.malformed() > 0) {
        ctx.err << "skipped " << pipeline.malformed() << " malformed frames\n";
      }

      ctx.emit(st_out, [&](std::ostream& o) {
        if (st_format == "text") {
          write_events_text(events, o);
          return;
        }
        std::vector<std::uint8_t> bytes;
        for (const auto& e : events) {
          telemetry::append_frame(bytes, telemetry::to_wire(e));
        }
        o.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
      });
      ctx.manifest["config"] = {{"threshold", st_threshold},
                                {"debounce", st_debounce},
                                {"format", st_format},
                                {"input_format", st_input_format}};
      ctx.manifest["events"] = events.size();
    };
  });

  // replicate --------------------------------------------------------------
  auto* replicate = app.add_subcommand(
      "replicate", "Run the motionless + motion study end to end");
  ReplicationOptions rep;
  ParamFlags rep_flags;
  std::vector<double> rep_levels;
  int rep_rows = 80;
  std::string rep_out_dir;
  auto* rep_seed_opt =
      replicate->add_option("--seed", rep.seed, "Master seed")->capture_default_str();
  auto* rep_fraction_opt =
      replicate->add_option("--test-fraction", rep.test_fraction, "Held-out share")
          ->capture_default_str();
  auto* rep_threshold_opt =
      replicate->add_option("--threshold", rep.threshold, "Vote-fraction cut")
          ->capture_default_str();
  auto* rep_levels_opt =
      replicate->add_option("--levels", rep_levels, "Pressure levels (mmHg)")
          ->delimiter(',');
  auto* rep_rows_opt =
      replicate->add_option("--rows-per-level", rep_rows, "Rows per level");
  replicate->add_option("--out-dir", rep_out_dir,
                        "Also write datasets, model, metrics and ROC here");
  rep_flags.add(replicate);
  replicate->callback([&] {
    action = [&] {
      auto cfg_seed = ctx.config.get_int("seed");
      from_config(rep_seed_opt,
                  cfg_seed ? std::optional<std::uint64_t>(
                                 static_cast<std::uint64_t>(*cfg_seed))
                           : std::nullopt,
                  rep.seed);
      from_config(rep_fraction_opt, ctx.config.get_double("test_fraction"),
                  rep.test_fraction);
      from_config(rep_threshold_opt, ctx.config.get_double("threshold"),
                  rep.threshold);
      rep.params = rep_flags.resolve(ctx.config);
      rep.sim = resolve_sim(ctx.config, rep_levels_opt, rep_levels, rep_rows_opt,
                            rep_rows);
      reject_unused_config(ctx);

      const auto report = run_replication(rep);
      print_replication_table(report, ctx.out);

      if (!rep_out_dir.empty()) {
        const fs::path dir(rep_out_dir);
        fs::create_directories(dir);
        auto out_file = [&](const std::string& name) {
          const auto p = (dir / name).string();
          ctx.manifest["outputs"].push_back(p);
          return ctx.open_out(p);
        };
        sim::write_csv(report.motionless_data, dir / "motionless.csv");
        sim::write_csv(report.motion_data, dir / "motion.csv");
        ctx.manifest["outputs"].push_back((dir / "motionless.csv").string());
        ctx.manifest["outputs"].push_back((dir / "motion.csv").string());
        model::write_model_file(dir / "model.rfm", report.model_blob);
        ctx.manifest["outputs"].push_back((dir / "model.rfm").string());
        for (const auto* r : {&report.motionless, &report.motion}) {
          const std::string tag = r == &report.motionless ? "motionless" : "motion";
          auto m = out_file("metrics_" + tag + ".csv");
          eval::write_metrics_csv(r->metrics, r->cm, m);
          auto b = out_file("baseline_" + tag + ".csv");
          eval::write_metrics_csv(r->baseline, r->baseline_cm, b);
          auto c = out_file("roc_" + tag + ".csv");
          eval::write_roc_csv(r->roc, c);
        }
      }

      ctx.manifest["seeds"] = {{"master", rep.seed},
                               {"motionless_data", report.seeds.motionless_data},
                               {"motion_data", report.seeds.motion_data},
                               {"motionless_split", report.seeds.motionless_split},
                               {"motion_split", report.seeds.motion_split},
                               {"forest", report.seeds.forest}};
      ctx.manifest["config"] = {{"sim", sim_json(rep.sim)},
                                {"train", params_json(rep.params)},
                                {"test_fraction", rep.test_fraction},
                                {"threshold", rep.threshold}};
      ctx.manifest["model_digest"] = report.model_digest;
      ctx.manifest["metrics"] = {
          {"motionless", metrics_json(report.motionless.metrics, report.motionless.cm)},
          {"motion", metrics_json(report.motion.metrics, report.motion.cm)},
          {"motionless_auc", report.motionless.roc.auc},
          {"motion_auc", report.motion.roc.auc},
          {"baseline_motion",
           metrics_json(report.motion.baseline, report.motion.baseline_cm)}};
    };
  });

  // CLI11 wants argv-style input.
  std::vector<std::string> argv_store{"acs"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, ctx.out, ctx.err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, ctx.out, ctx.err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, ctx.out, ctx.err);
    return kUsage;
  }

  load_config(ctx);
  ctx.manifest["tool"] = "acs";
  ctx.manifest["version"] = kToolVersion;
  ctx.manifest["command"] = app.get_subcommands().front()->get_name();
  ctx.manifest["args"] = args;
  action();

  if (ctx.manifest_path.empty()) {
    ctx.err << "manifest " << ctx.manifest.dump() << '\n';
  } else {
    auto f = ctx.open_out(ctx.manifest_path);
    f << ctx.manifest.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Context ctx{out, err, {}, {}, {}, json::object()};
  try {
    return run(args, ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kModelError;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace acs::cli
