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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace acs {

inline constexpr std::size_t kNumSensors = 5;
inline constexpr std::uint16_t kAdcMax = 4095;

/// Pressure at or above which a reading is ACS-positive (mmHg).
inline constexpr double kAcsThresholdMmHg = 30.0;

enum class Label : std::uint8_t { kNegative = 0, kPositive = 1 };

constexpr Label label_for_pressure(double bag_pressure_mmhg) {
  return bag_pressure_mmhg >= kAcsThresholdMmHg ? Label::kPositive
                                                : Label::kNegative;
}

/// One timestamped reading of the five FSR channels, in raw 12-bit ADC counts.
struct SensorFrame {
  std::uint32_t timestamp_ms = 0;
  std::array<std::uint16_t, kNumSensors> counts{};

  bool valid() const {
    for (auto c : counts) {
      if (c > kAdcMax) return false;
    }
    return true;
  }

  friend bool operator==(const SensorFrame&, const SensorFrame&) = default;
};

struct LabeledSample {
  SensorFrame frame;
  double bag_pressure_mmhg = 0.0;
  Label label = Label::kNegative;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

enum class Scenario : std::uint8_t { kMotionless, kMotion };

std::string_view to_string(Scenario s);
std::string_view to_string(Label l);

struct Dataset {
  Scenario scenario = Scenario::kMotionless;
  std::vector<LabeledSample> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t count(Label l) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace acs
