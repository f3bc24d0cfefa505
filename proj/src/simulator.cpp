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

#include "acs/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "acs/error.hpp"

namespace acs::sim {

namespace {

// Substreams of a dataset seed.
enum Stream : std::uint64_t {
  kNoiseStream = 1,
  kMotionStream = 2,
  kGainStream = 10,
  kOffsetStream = 11,
  kPhaseStream = 12,
};

SensorArray draw_array(std::uint64_t seed, Stream stream, double lo,
                       double hi) {
  Rng rng(derive_seed(seed, stream));
  SensorArray out{};
  for (auto& v : out) v = rng.uniform(lo, hi);
  return out;
}

void check_sensor_index(int i) {
  if (i < 0 || i >= static_cast<int>(kNumSensors)) {
    throw ParameterError("sensor index out of range: " + std::to_string(i));
  }
}

int clamp_counts(long v, int adc_max) {
  return static_cast<int>(std::clamp<long>(v, 0, adc_max));
}

SensorArray to_sensor_array(const std::vector<double>& v,
                            const std::string& key) {
  if (v.size() != kNumSensors) {
    throw DataError("config key " + key + ": expected 5 values");
  }
  SensorArray out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

constexpr std::string_view kColumns[] = {
    "timestamp_ms", "s0", "s1", "s2", "s3", "s4",
    "bag_pressure_mmhg", "label", "scenario"};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
bool parse_field(std::string_view s, T& value) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

[[noreturn]] void schema_error(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

void SimConfig::validate() const {
  if (!(vcc > 0 && r_fixed > 0 && r0 > 0 && alpha > 0)) {
    throw ParameterError("vcc, r_fixed, r0 and alpha must be positive");
  }
  if (adc_max < 1 || adc_max > kAdcMax) {
    throw ParameterError("adc_max must be in [1, 4095]");
  }
  if (sensor_gain) {
    for (double g : *sensor_gain) {
      if (!(g > 0 && g <= 1.0)) {
        throw ParameterError("sensor gains must be in (0, 1]");
      }
    }
  }
  if (!(noise_sigma >= 0)) throw ParameterError("noise_sigma must be >= 0");
  if (!(motion.amplitude >= 0 && motion.spike_mag >= 0)) {
    throw ParameterError("motion amplitude and spike_mag must be >= 0");
  }
  if (!(motion.frequency_hz > 0)) {
    throw ParameterError("motion frequency must be positive");
  }
  if (!(motion.spike_prob >= 0 && motion.spike_prob <= 1)) {
    throw ParameterError("spike_prob must be in [0, 1]");
  }
  if (levels.empty()) throw ParameterError("at least one pressure level");
  for (double p : levels) {
    if (!(p >= 0)) throw ParameterError("pressure levels must be >= 0");
  }
  if (rows_per_level < 1) throw ParameterError("rows_per_level must be >= 1");
  if (!(sample_rate_hz > 0)) {
    throw ParameterError("sample_rate_hz must be positive");
  }
}

void SimConfig::apply(const KeyValueConfig& cfg) {
  if (auto v = cfg.get_double("vcc")) vcc = *v;
  if (auto v = cfg.get_double("r_fixed")) r_fixed = *v;
  if (auto v = cfg.get_double("r0")) r0 = *v;
  if (auto v = cfg.get_double("alpha")) alpha = *v;
  if (auto v = cfg.get_int("adc_max")) adc_max = static_cast<int>(*v);
  if (auto v = cfg.get_doubles("sensor_gain")) {
    sensor_gain = to_sensor_array(*v, "sensor_gain");
  }
  if (auto v = cfg.get_doubles("sensor_offset")) {
    sensor_offset = to_sensor_array(*v, "sensor_offset");
  }
  if (auto v = cfg.get_double("noise_sigma")) noise_sigma = *v;
  if (auto v = cfg.get_doubles("levels")) levels = *v;
  if (auto v = cfg.get_int("rows_per_level")) {
    rows_per_level = static_cast<int>(*v);
  }
  if (auto v = cfg.get_double("sample_rate_hz")) sample_rate_hz = *v;
  if (auto v = cfg.get_double("motion.amplitude")) motion.amplitude = *v;
  if (auto v = cfg.get_double("motion.frequency")) motion.frequency_hz = *v;
  if (auto v = cfg.get_doubles("motion.phase")) {
    motion.phase = to_sensor_array(*v, "motion.phase");
  }
  if (auto v = cfg.get_double("motion.spike_prob")) motion.spike_prob = *v;
  if (auto v = cfg.get_double("motion.spike_mag")) motion.spike_mag = *v;
}

SimConfig resolve_sensors(SimConfig config, std::uint64_t seed) {
  if (!config.sensor_gain) {
    config.sensor_gain = draw_array(seed, kGainStream, kGainMin, kGainMax);
  }
  if (!config.sensor_offset) {
    config.sensor_offset =
        draw_array(seed, kOffsetStream, kOffsetMin, kOffsetMax);
  }
  if (!config.motion.phase) {
    config.motion.phase = draw_array(seed, kPhaseStream, kPhaseMin, kPhaseMax);
  }
  return config;
}

std::uint16_t sensor_response(double bag_pressure_mmhg, int sensor_index,
                              const SimConfig& config, Rng* noise) {
  if (!(bag_pressure_mmhg >= 0)) {
    throw ParameterError("bag pressure must be >= 0");
  }
  check_sensor_index(sensor_index);
  const auto i = static_cast<std::size_t>(sensor_index);
  const double gain = config.sensor_gain ? (*config.sensor_gain)[i] : 1.0;
  const double offset = config.sensor_offset ? (*config.sensor_offset)[i] : 0.0;

  const double contact = std::max(0.0, gain * bag_pressure_mmhg + offset);
  const double r_fsr = config.r0 / (1.0 + config.alpha * contact);
  const double v = config.vcc * config.r_fixed / (config.r_fixed + r_fsr);
  long counts = std::lround(v / config.vcc * config.adc_max);
  if (noise != nullptr && config.noise_sigma > 0) {
    counts += std::lround(config.noise_sigma * noise->normal());
  }
  return static_cast<std::uint16_t>(clamp_counts(counts, config.adc_max));
}

int motion_offset(double t_seconds, int sensor_index, const SimConfig& config,
                  Rng& rng) {
  check_sensor_index(sensor_index);
  const auto& m = config.motion;
  const double phase =
      m.phase ? (*m.phase)[static_cast<std::size_t>(sensor_index)] : 0.0;
  double offset =
      m.amplitude *
      std::sin(2.0 * std::numbers::pi * m.frequency_hz * t_seconds + phase);
  const double u = rng.uniform01();
  const double spike = rng.uniform(-m.spike_mag, m.spike_mag);
  if (u < m.spike_prob) offset += spike;
  return static_cast<int>(std::lround(offset));
}

Dataset generate_dataset(Scenario scenario, const SimConfig& config,
                         std::uint64_t seed) {
  config.validate();
  const SimConfig resolved = resolve_sensors(config, seed);
  Rng noise(derive_seed(seed, kNoiseStream));
  Rng motion(derive_seed(seed, kMotionStream));

  Dataset out;
  out.scenario = scenario;
  out.rows.reserve(resolved.levels.size() *
                   static_cast<std::size_t>(resolved.rows_per_level));
  std::uint64_t k = 0;
  for (double pressure : resolved.levels) {
    for (int r = 0; r < resolved.rows_per_level; ++r, ++k) {
      const double t = static_cast<double>(k) / resolved.sample_rate_hz;
      LabeledSample row;
      row.frame.timestamp_ms = static_cast<std::uint32_t>(std::llround(t * 1000.0));
      for (int i = 0; i < static_cast<int>(kNumSensors); ++i) {
        long counts = sensor_response(pressure, i, resolved, &noise);
        if (scenario == Scenario::kMotion) {
          counts += motion_offset(t, i, resolved, motion);
        }
        row.frame.counts[static_cast<std::size_t>(i)] =
            static_cast<std::uint16_t>(clamp_counts(counts, resolved.adc_max));
      }
      row.bag_pressure_mmhg = pressure;
      row.label = label_for_pressure(pressure);
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  for (std::size_t i = 0; i < std::size(kColumns); ++i) {
    out << (i ? "," : "") << kColumns[i];
  }
  out << '\n';
  const auto scenario = to_string(dataset.scenario);
  for (const auto& row : dataset.rows) {
    out << row.frame.timestamp_ms;
    for (auto c : row.frame.counts) out << ',' << c;
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), row.bag_pressure_mmhg);
    out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << ',' << static_cast<int>(row.label) << ',' << scenario << '\n';
  }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_csv(dataset, out);
  if (!out) throw DataError("failed writing " + path.string());
}

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) schema_error(1, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  std::array<std::size_t, std::size(kColumns)> col{};
  for (std::size_t c = 0; c < std::size(kColumns); ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      schema_error(1, "missing column " + std::string(kColumns[c]));
    }
    col[c] = static_cast<std::size_t>(it - header.begin());
  }

  Dataset out;
  bool scenario_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      schema_error(line_no, "expected " + std::to_string(header.size()) +
                                " fields, found " +
                                std::to_string(fields.size()));
    }

    LabeledSample row;
    if (!parse_field(fields[col[0]], row.frame.timestamp_ms)) {
      schema_error(line_no, "bad timestamp_ms");
    }
    for (std::size_t s = 0; s < kNumSensors; ++s) {
      int v = 0;
      const auto name = std::string(kColumns[1 + s]);
      if (!parse_field(fields[col[1 + s]], v)) {
        schema_error(line_no, name + " is not an integer count");
      }
      if (v < 0 || v > kAdcMax) {
        schema_error(line_no, name + " = " + std::to_string(v) +
                                  " is outside [0, 4095]");
      }
      row.frame.counts[s] = static_cast<std::uint16_t>(v);
    }
    if (!parse_field(fields[col[6]], row.bag_pressure_mmhg) ||
        !(row.bag_pressure_mmhg >= 0)) {
      schema_error(line_no, "bad bag_pressure_mmhg");
    }
    int label = 0;
    if (!parse_field(fields[col[7]], label) || (label != 0 && label != 1)) {
      schema_error(line_no, "label must be 0 or 1");
    }
    row.label = static_cast<Label>(label);
    if (row.label != label_for_pressure(row.bag_pressure_mmhg)) {
      schema_error(line_no, "label inconsistent with the 30 mmHg rule");
    }

    Scenario scenario;
    if (fields[col[8]] == "motionless") {
      scenario = Scenario::kMotionless;
    } else if (fields[col[8]] == "motion") {
      scenario = Scenario::kMotion;
    } else {
      schema_error(line_no, "unknown scenario");
    }
    if (scenario_seen && scenario != out.scenario) {
      schema_error(line_no, "mixed scenarios in one file");
    }
    out.scenario = scenario;
    scenario_seen = true;
    out.rows.push_back(row);
  }
  return out;
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace acs::sim
