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

// Software stand-in for the bench rig: an IV bag inflated in 10 mmHg steps
// under a sleeve of five FSRs, each read through a 10 kOhm voltage divider
// into a 12-bit ADC.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "acs/config.hpp"
#include "acs/rng.hpp"
#include "acs/types.hpp"

namespace acs::sim {

using SensorArray = std::array<double, kNumSensors>;

// Ranges for per-sensor parameters that are drawn per dataset when the
// config leaves them unset.
inline constexpr double kGainMin = 0.85;
inline constexpr double kGainMax = 1.0;
inline constexpr double kOffsetMin = -5.0;  // mmHg, sleeve seating preload
inline constexpr double kOffsetMax = 5.0;
inline constexpr double kPhaseMin = 0.0;  // radians
inline constexpr double kPhaseMax = 0.5;

struct MotionConfig {
  double amplitude = 40.0;  // ADC counts
  double frequency_hz = 0.5;
  std::optional<SensorArray> phase;
  double spike_prob = 0.02;
  double spike_mag = 150.0;  // ADC counts

  friend bool operator==(const MotionConfig&, const MotionConfig&) = default;
};

struct SimConfig {
  double vcc = 3.3;
  double r_fixed = 10000.0;
  double r0 = 100000.0;  // FSR resistance at zero contact pressure
  double alpha = 0.04;   // conductance slope per mmHg
  int adc_max = kAdcMax;
  // Unset arrays are drawn per dataset; sensor_response reads them as
  // gain 1, offset 0.
  std::optional<SensorArray> sensor_gain;
  std::optional<SensorArray> sensor_offset;  // mmHg
  double noise_sigma = 8.0;  // ADC counts
  MotionConfig motion;

  std::vector<double> levels{0, 10, 20, 30, 40, 50};  // mmHg
  int rows_per_level = 80;
  double sample_rate_hz = 10.0;

  /// Throws ParameterError for non-physical values.
  void validate() const;

  /// Overrides fields from `cfg`. Recognised keys: vcc, r_fixed, r0, alpha,
  /// adc_max, noise_sigma, sensor_gain, sensor_offset, levels,
  /// rows_per_level, sample_rate_hz, motion.amplitude, motion.frequency,
  /// motion.phase, motion.spike_prob, motion.spike_mag.
  void apply(const KeyValueConfig& cfg);

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Fills every unset per-sensor array from `seed`'s sensor substreams.
SimConfig resolve_sensors(SimConfig config, std::uint64_t seed);

/// Noise-free divider output plus optional Gaussian read noise, clamped to
/// [0, adc_max]. Throws ParameterError for negative pressure or a bad index.
std::uint16_t sensor_response(double bag_pressure_mmhg, int sensor_index,
                              const SimConfig& config, Rng* noise = nullptr);

/// Motion artifact in ADC counts at virtual time `t_seconds`: a sinusoid plus
/// an occasional uniform spike. Always consumes two uniforms from `rng`.
int motion_offset(double t_seconds, int sensor_index, const SimConfig& config,
                  Rng& rng);

/// Sweeps config.levels, rows_per_level rows each, sampled at
/// sample_rate_hz of virtual time. Deterministic in `seed`.
Dataset generate_dataset(Scenario scenario, const SimConfig& config,
                         std::uint64_t seed);

void write_csv(const Dataset& dataset, std::ostream& out);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Throws DataError naming the offending line on any schema violation.
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::filesystem::path& path);

}  // namespace acs::sim
