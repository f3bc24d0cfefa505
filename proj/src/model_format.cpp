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

#include "acs/model_format.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <boost/crc.hpp>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "acs/error.hpp"

namespace acs::model {

namespace {

constexpr std::uint8_t kLeafFeature = 0xFF;
constexpr std::uint16_t kNoChild = 0xFFFF;
constexpr std::size_t kMaxNodes = 0xFFFF;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u24(std::uint32_t v) { le(v, 3); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void bytes(std::span<const std::uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  ModelBlob& blob() { return out_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  ModelBlob out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u24() { return static_cast<std::uint32_t>(le(3)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }

 private:
  std::uint64_t le(int n) {
    if (remaining() < static_cast<std::size_t>(n)) {
      throw MalformedModelError("model blob is truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t saturate(std::uint32_t v, bool& saturated) {
  if (v > kMaxCount) {
    saturated = true;
    return kMaxCount;
  }
  return v;
}

void check_crc(std::span<const std::uint8_t> blob) {
  const auto body = blob.first(blob.size() - kChecksumSize);
  Reader trailer(blob.last(kChecksumSize));
  if (crc32(body) != trailer.u32()) {
    throw CorruptionError("model checksum mismatch");
  }
}

void check_envelope(std::span<const std::uint8_t> blob) {
  if (blob.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), blob.begin())) {
    throw FormatError("not an RFM1 model (bad magic)");
  }
  if (blob.size() < kHeaderSize + kChecksumSize) {
    throw FormatError("model blob shorter than its header");
  }
  if (blob[4] != kFormatVersion) {
    throw VersionError("unsupported model format version " +
                       std::to_string(blob[4]));
  }
  check_crc(blob);
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

ModelBlob encode_model(const forest::RandomForest& forest, bool* saturated) {
  const auto trees = forest.trees();
  if (trees.size() > 0xFFFF) throw CapacityError("more than 65535 trees");
  if (forest.params().max_depth > 0xFF) {
    throw CapacityError("max_depth does not fit in one octet");
  }

  bool clipped = false;
  Writer w;
  w.bytes(kMagic);
  w.u8(kFormatVersion);
  w.u16(static_cast<std::uint16_t>(trees.size()));
  w.u8(static_cast<std::uint8_t>(forest.n_features()));
  w.u8(static_cast<std::uint8_t>(forest.params().max_depth));
  w.u64(forest.seed());

  for (const auto& tree : trees) {
    const auto nodes = tree.nodes();
    if (nodes.size() > kMaxNodes) {
      throw CapacityError("tree has " + std::to_string(nodes.size()) +
                          " nodes; the format holds 65535");
    }
    w.u16(static_cast<std::uint16_t>(nodes.size()));
    for (const auto& n : nodes) {
      w.u8(static_cast<std::uint8_t>(n.kind));
      if (n.is_leaf()) {
        w.u8(kLeafFeature);
        w.u32(0);
        w.u16(kNoChild);
        w.u16(kNoChild);
      } else {
        w.u8(n.feature);
        w.u32(std::bit_cast<std::uint32_t>(n.threshold));
        w.u16(static_cast<std::uint16_t>(n.left));
        w.u16(static_cast<std::uint16_t>(n.right));
      }
      w.u24(saturate(n.pos, clipped));
      w.u24(saturate(n.neg, clipped));
    }
  }
  w.u32(crc32(w.blob()));
  if (saturated != nullptr) *saturated = clipped;
  return std::move(w.blob());
}

forest::RandomForest decode_model(std::span<const std::uint8_t> blob) {
  check_envelope(blob);

  Reader r(blob.first(blob.size() - kChecksumSize));
  r.u32();  // magic
  r.u8();   // version
  const int n_trees = r.u16();
  const int n_features = r.u8();
  const int max_depth = r.u8();
  const std::uint64_t seed = r.u64();
  if (n_features != forest::RandomForest::kNumFeatures) {
    throw MalformedModelError("model expects " + std::to_string(n_features) +
                              " features, not 5");
  }
  if (n_trees == 0) throw MalformedModelError("model has no trees");
  if (max_depth == 0) throw MalformedModelError("model max_depth is 0");

  std::vector<forest::DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    const std::size_t count = r.u16();
    if (r.remaining() < count * kNodeSize) {
      throw MalformedModelError("tree " + std::to_string(t) + " is truncated");
    }
    std::vector<forest::Node> nodes;
    nodes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      forest::Node n;
      const auto kind = r.u8();
      n.feature = r.u8();
      const auto threshold_bits = r.u32();
      n.threshold = std::bit_cast<float>(threshold_bits);
      const auto left = r.u16();
      const auto right = r.u16();
      n.pos = r.u24();
      n.neg = r.u24();
      const auto where = "tree " + std::to_string(t) + " node " + std::to_string(i);
      if (kind == static_cast<std::uint8_t>(forest::Node::Kind::kLeaf)) {
        if (n.feature != kLeafFeature || threshold_bits != 0 ||
            left != kNoChild || right != kNoChild) {
          throw MalformedModelError(where + ": leaf with internal fields");
        }
        n.kind = forest::Node::Kind::kLeaf;
        n.feature = 0;
        n.threshold = 0.0f;
      } else if (kind == static_cast<std::uint8_t>(forest::Node::Kind::kInternal)) {
        if (left >= count || right >= count) {
          throw MalformedModelError(where + ": child index out of range");
        }
        n.kind = forest::Node::Kind::kInternal;
        n.left = left;
        n.right = right;
      } else {
        throw MalformedModelError(where + ": unknown node kind");
      }
      nodes.push_back(n);
    }
    if (auto err = forest::DecisionTree::check_structure(nodes, max_depth)) {
      throw MalformedModelError("tree " + std::to_string(t) + ": " + *err);
    }
    trees.emplace_back(std::move(nodes), max_depth);
  }
  if (r.remaining() != 0) {
    throw MalformedModelError("trailing octets after the last tree");
  }

  forest::TrainParams params;
  params.n_trees = n_trees;
  params.max_depth = max_depth;
  return forest::RandomForest(std::move(trees), params, seed);
}

std::string model_digest(std::span<const std::uint8_t> blob) {
  if (blob.size() < kChecksumSize) throw CorruptionError("model blob too short");
  check_crc(blob);

  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

void write_model_file(const std::filesystem::path& path, const ModelBlob& blob) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
  if (!out) throw ModelError("failed writing " + path.string());
}

ModelBlob read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path.string());
  return ModelBlob(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>());
}

std::string dump_forest(const forest::RandomForest& forest) {
  std::ostringstream out;
  const auto trees = forest.trees();
  out << "forest: " << trees.size() << " trees, max_depth "
      << forest.params().max_depth << ", seed " << forest.seed() << '\n';
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto nodes = trees[t].nodes();
    out << "tree " << t << " (" << nodes.size() << " nodes, depth "
        << trees[t].depth() << ")\n";
    std::vector<std::pair<std::uint32_t, int>> stack{{0, 1}};
    while (!stack.empty()) {
      const auto [i, indent] = stack.back();
      stack.pop_back();
      const auto& n = nodes[i];
      out << std::string(static_cast<std::size_t>(2 * indent), ' ');
      if (n.is_leaf()) {
        out << "leaf pos=" << n.pos << " neg=" << n.neg << " -> "
            << (n.pos >= n.neg ? "positive" : "negative") << '\n';
      } else {
        out << "s" << int{n.feature} << " < " << n.threshold << '\n';
        stack.emplace_back(n.right, indent + 1);
        stack.emplace_back(n.left, indent + 1);
      }
    }
  }
  return out.str();
}

}  // namespace acs::model
