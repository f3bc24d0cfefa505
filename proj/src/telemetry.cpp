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

#include "acs/telemetry.hpp"

#include <boost/crc.hpp>
#include <cmath>
#include <thread>

#include "acs/error.hpp"

namespace acs::telemetry {

namespace {

using Crc16 = boost::crc_optimal<16, 0x1021, 0xFFFF, 0, false, false>;

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

std::optional<std::size_t> payload_size(std::uint8_t kind) {
  switch (static_cast<Kind>(kind)) {
    case Kind::kSensor: return kSensorPayloadSize;
    case Kind::kDiagnostic: return kDiagnosticPayloadSize;
  }
  return std::nullopt;
}

// Parses a checksummed payload; nothing if a field is out of range.
std::optional<WireFrame> parse_payload(Kind kind, const std::uint8_t* p) {
  if (kind == Kind::kSensor) {
    SensorFrame f;
    f.timestamp_ms = get32(p);
    for (std::size_t i = 0; i < kNumSensors; ++i) {
      f.counts[i] = get16(p + 4 + 2 * i);
    }
    if (!f.valid()) return std::nullopt;
    return f;
  }
  WireDiagnostic d;
  d.timestamp_ms = get32(p);
  if (p[4] > 1) return std::nullopt;
  d.label = static_cast<Label>(p[4]);
  d.probability_bp = get16(p + 5);
  if (d.probability_bp > kMaxBasisPoints) return std::nullopt;
  return d;
}

}  // namespace

std::uint16_t crc16(std::span<const std::uint8_t> bytes) {
  Crc16 crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::uint16_t to_basis_points(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw EncodingError("probability outside [0, 1]");
  }
  return static_cast<std::uint16_t>(std::lround(probability * kMaxBasisPoints));
}

WireDiagnostic to_wire(const DiagnosticEvent& event) {
  return {event.timestamp_ms, event.label, to_basis_points(event.probability)};
}

DiagnosticEvent from_wire(const WireDiagnostic& wire) {
  return {wire.timestamp_ms, wire.label,
          static_cast<double>(wire.probability_bp) / kMaxBasisPoints};
}

void append_frame(std::vector<std::uint8_t>& out, const WireFrame& frame) {
  const auto begin = out.size();
  if (const auto* s = std::get_if<SensorFrame>(&frame)) {
    if (!s->valid()) throw EncodingError("sensor count above 4095");
    out.insert(out.end(), {kMagic, kVersion, static_cast<std::uint8_t>(Kind::kSensor),
                           static_cast<std::uint8_t>(kSensorPayloadSize)});
    put32(out, s->timestamp_ms);
    for (auto c : s->counts) put16(out, c);
  } else {
    const auto& d = std::get<WireDiagnostic>(frame);
    if (d.probability_bp > kMaxBasisPoints) {
      throw EncodingError("probability above 10000 basis points");
    }
    if (d.label != Label::kNegative && d.label != Label::kPositive) {
      throw EncodingError("invalid diagnostic class");
    }
    out.insert(out.end(),
               {kMagic, kVersion, static_cast<std::uint8_t>(Kind::kDiagnostic),
                static_cast<std::uint8_t>(kDiagnosticPayloadSize)});
    put32(out, d.timestamp_ms);
    out.push_back(static_cast<std::uint8_t>(d.label));
    put16(out, d.probability_bp);
  }
  put16(out, crc16(std::span(out).subspan(begin)));
}

std::vector<std::uint8_t> encode_frame(const WireFrame& frame) {
  std::vector<std::uint8_t> out;
  append_frame(out, frame);
  return out;
}

void StreamDecoder::feed(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  parse(false);
}

void StreamDecoder::finish() { parse(true); }

std::vector<WireFrame> StreamDecoder::take_frames() {
  return std::exchange(frames_, {});
}

void StreamDecoder::parse(bool at_end) {
  while (start_ < buffer_.size()) {
    const std::uint8_t* p = buffer_.data() + start_;
    const std::size_t avail = buffer_.size() - start_;
    const auto skip = [&] {
      ++start_;
      ++skipped_;
    };

    if (p[0] != kMagic) {
      skip();
      continue;
    }
    if (avail < kHeaderSize) {
      if (at_end) {
        skip();
        continue;
      }
      break;
    }
    const auto size = payload_size(p[2]);
    if (p[1] != kVersion || !size || p[3] != *size) {
      skip();
      continue;
    }
    const std::size_t total = kHeaderSize + *size + kCrcSize;
    if (avail < total) {
      if (at_end) {
        skip();
        continue;
      }
      break;
    }
    if (crc16({p, kHeaderSize + *size}) != get16(p + kHeaderSize + *size)) {
      skip();
      continue;
    }
    auto frame = parse_payload(static_cast<Kind>(p[2]), p + kHeaderSize);
    if (!frame) {
      skip();
      continue;
    }
    frames_.push_back(*frame);
    start_ += total;
  }

  if (start_ > 4096 || start_ == buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<long>(start_));
    start_ = 0;
  }
}

DecodeResult decode_stream(std::span<const std::uint8_t> bytes) {
  StreamDecoder decoder;
  decoder.feed(bytes);
  decoder.finish();
  return {decoder.take_frames(), decoder.skipped()};
}

Pipeline::Pipeline(const forest::RandomForest& model, PipelineOptions options)
    : model_(model), options_(options) {
  if (!(options_.threshold > 0.0 && options_.threshold <= 1.0)) {
    throw ParameterError("decision threshold must be in (0, 1]");
  }
  if (options_.debounce_window < 1 || options_.debounce_window % 2 == 0) {
    throw ParameterError("debounce window must be a positive odd number");
  }
  if (model_.n_features() != static_cast<int>(kNumSensors)) {
    throw ParameterError("model width does not match the 5-sensor frame");
  }
}

std::optional<DiagnosticEvent> Pipeline::process(const SensorFrame& frame) {
  if (!frame.valid()) {
    ++malformed_;
    return std::nullopt;
  }
  const double proba = forest::predict_proba(model_, frame);
  window_.push_back(forest::decide(proba, options_.threshold));
  if (window_.size() > static_cast<std::size_t>(options_.debounce_window)) {
    window_.pop_front();
  }
  std::size_t positives = 0;
  for (auto l : window_) positives += l == Label::kPositive;
  const Label label = 2 * positives >= window_.size() ? Label::kPositive
                                                      : Label::kNegative;
  return DiagnosticEvent{frame.timestamp_ms, label, proba};
}

PipelineResult run_pipeline(std::span<const SensorFrame> frames,
                            const forest::RandomForest& model,
                            PipelineOptions options) {
  Pipeline pipeline(model, options);
  PipelineResult out;
  out.events.reserve(frames.size());
  for (const auto& f : frames) {
    if (auto e = pipeline.process(f)) out.events.push_back(*e);
  }
  out.malformed = pipeline.malformed();
  return out;
}

ReplaySource::ReplaySource(const Dataset& dataset, double rate_hz)
    : dataset_(dataset) {
  if (rate_hz < 0) throw ParameterError("replay rate must be >= 0");
  if (rate_hz > 0) {
    period_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rate_hz));
  }
}

std::optional<SensorFrame> ReplaySource::next() {
  if (index_ >= dataset_.size()) return std::nullopt;
  if (period_.count() > 0) {
    const auto now = std::chrono::steady_clock::now();
    if (index_ == 0) {
      next_due_ = now;
    } else {
      std::this_thread::sleep_until(next_due_);
    }
    next_due_ += period_;
  }
  return dataset_.rows[index_++].frame;
}

}  // namespace acs::telemetry
