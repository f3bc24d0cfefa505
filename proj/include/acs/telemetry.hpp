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

// Byte protocol for sensor frames and diagnostic events over any ordered
// stream, and the streaming classifier that turns one into the other.
//
// Frame layout (multi-octet fields little-endian):
//   0xA5 | 0x01 | kind | payload_len | payload | crc16
// kind 0x01 sensor:     timestamp_ms u32, 5 x counts u16       (14 octets)
// kind 0x02 diagnostic: timestamp_ms u32, class u8, prob u16   (7 octets)
// crc16 is CRC-16/CCITT-FALSE over every preceding octet of the frame.

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "acs/forest.hpp"
#include "acs/types.hpp"

namespace acs::telemetry {

inline constexpr std::uint8_t kMagic = 0xA5;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 4;
inline constexpr std::size_t kCrcSize = 2;
inline constexpr std::size_t kSensorPayloadSize = 14;
inline constexpr std::size_t kDiagnosticPayloadSize = 7;
inline constexpr std::uint16_t kMaxBasisPoints = 10000;

enum class Kind : std::uint8_t { kSensor = 0x01, kDiagnostic = 0x02 };

struct DiagnosticEvent {
  std::uint32_t timestamp_ms = 0;
  Label label = Label::kNegative;
  double probability = 0.0;

  friend bool operator==(const DiagnosticEvent&, const DiagnosticEvent&) = default;
};

/// A diagnostic event as it travels: probability in basis points.
struct WireDiagnostic {
  std::uint32_t timestamp_ms = 0;
  Label label = Label::kNegative;
  std::uint16_t probability_bp = 0;

  friend bool operator==(const WireDiagnostic&, const WireDiagnostic&) = default;
};

using WireFrame = std::variant<SensorFrame, WireDiagnostic>;

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout.
std::uint16_t crc16(std::span<const std::uint8_t> bytes);

/// Rounds to the nearest basis point. Throws EncodingError outside [0, 1].
std::uint16_t to_basis_points(double probability);

WireDiagnostic to_wire(const DiagnosticEvent& event);
DiagnosticEvent from_wire(const WireDiagnostic& wire);

/// Throws EncodingError for counts above 4095, probability above 10000 bp or
/// an invalid class.
std::vector<std::uint8_t> encode_frame(const WireFrame& frame);
void append_frame(std::vector<std::uint8_t>& out, const WireFrame& frame);

/// Incremental, resynchronizing parser.
///
/// On any failure at a candidate frame start (magic, version, kind, length,
/// checksum or payload range) the parser drops one octet and rescans. The
/// output is independent of how the input is chunked.
class StreamDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);

  /// Declares end of input; leftover octets that cannot form a frame are
  /// counted as skipped.
  void finish();

  /// Frames decoded since the last call.
  std::vector<WireFrame> take_frames();

  std::uint64_t skipped() const { return skipped_; }

 private:
  void parse(bool at_end);

  std::vector<std::uint8_t> buffer_;
  std::size_t start_ = 0;
  std::vector<WireFrame> frames_;
  std::uint64_t skipped_ = 0;
};

struct DecodeResult {
  std::vector<WireFrame> frames;
  std::uint64_t skipped = 0;
};

/// Whole-input convenience over StreamDecoder.
DecodeResult decode_stream(std::span<const std::uint8_t> bytes);

struct PipelineOptions {
  double threshold = 0.5;
  int debounce_window = 1;  // odd; 1 classifies each frame on its own
};

/// Per-frame classifier with an optional sliding-majority debounce.
///
/// Each event carries the frame's own vote fraction. With a window of 1 the
/// class is that frame's decision; otherwise it is the majority of the last
/// `debounce_window` decisions, ties (only possible while the window fills)
/// going to positive.
class Pipeline {
 public:
  /// Throws ParameterError for a threshold outside (0, 1], an even or
  /// non-positive window, or a forest whose width is not 5.
  Pipeline(const forest::RandomForest& model, PipelineOptions options = {});

  /// Returns nothing, and counts the frame as malformed, if it fails
  /// validation.
  std::optional<DiagnosticEvent> process(const SensorFrame& frame);

  std::uint64_t malformed() const { return malformed_; }

 private:
  const forest::RandomForest& model_;
  PipelineOptions options_;
  std::deque<Label> window_;
  std::uint64_t malformed_ = 0;
};

struct PipelineResult {
  std::vector<DiagnosticEvent> events;
  std::uint64_t malformed = 0;
};

PipelineResult run_pipeline(std::span<const SensorFrame> frames,
                            const forest::RandomForest& model,
                            PipelineOptions options = {});

/// Replays dataset frames in order, optionally paced to `rate_hz` frames per
/// second of wall time (0 = as fast as possible).
class ReplaySource {
 public:
  ReplaySource(const Dataset& dataset, double rate_hz = 0.0);

  std::optional<SensorFrame> next();

 private:
  const Dataset& dataset_;
  std::size_t index_ = 0;
  std::chrono::steady_clock::duration period_{};
  std::chrono::steady_clock::time_point next_due_{};
};

}  // namespace acs::telemetry
