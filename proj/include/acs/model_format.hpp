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

// `.rfm` model files. All integers are little-endian.
//
//   header   magic "RFM1" | version u8 | n_trees u16 | n_features u8
//            | max_depth u8 | seed u64                          (17 octets)
//   per tree node_count u16, then node_count 16-octet records in preorder:
//            kind u8 | feature u8 | threshold f32 | left u16 | right u16
//            | pos u24 | neg u24
//            Leaves carry feature 0xFF, threshold 0, left = right = 0xFFFF.
//   trailer  CRC-32 (IEEE, reflected) of every preceding octet, u32

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "acs/forest.hpp"

namespace acs::model {

using ModelBlob = std::vector<std::uint8_t>;

inline constexpr std::array<std::uint8_t, 4> kMagic = {'R', 'F', 'M', '1'};
inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderSize = 17;
inline constexpr std::size_t kNodeSize = 16;
inline constexpr std::size_t kChecksumSize = 4;
inline constexpr std::uint32_t kMaxCount = (1u << 24) - 1;

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

/// Deterministic encoding. Leaf counts above 2^24-1 saturate and set
/// `*saturated`. Throws CapacityError if a tree has more than 65535 nodes
/// or the forest more than 65535 trees.
ModelBlob encode_model(const forest::RandomForest& forest,
                       bool* saturated = nullptr);

/// Inverse of encode_model. Only n_trees and max_depth of the training
/// parameters are stored; the rest decode as defaults.
///
/// Throws FormatError (bad magic or truncated header), VersionError,
/// CorruptionError (checksum) or MalformedModelError (structure).
forest::RandomForest decode_model(std::span<const std::uint8_t> blob);

/// Lowercase hex SHA-256 of a blob whose checksum validates.
std::string model_digest(std::span<const std::uint8_t> blob);

void write_model_file(const std::filesystem::path& path, const ModelBlob& blob);
ModelBlob read_model_file(const std::filesystem::path& path);

/// Indented text rendering of every tree.
std::string dump_forest(const forest::RandomForest& forest);

}  // namespace acs::model
