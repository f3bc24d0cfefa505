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

#include <cstdint>
#include <random>

namespace acs {

/// SplitMix64 finalizer. Used to turn (seed, stream) pairs into independent
/// engine seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for substream `stream` of a master `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence the standard pins
/// exactly. The standard distributions are implementation-defined, so the
/// mappings to indices, reals and normals are done here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal deviate (Box-Muller, one output per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace acs
