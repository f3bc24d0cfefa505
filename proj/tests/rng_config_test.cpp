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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "acs/config.hpp"
#include "acs/error.hpp"
#include "acs/rng.hpp"

namespace acs {
namespace {

TEST(RngTest, EngineIsStandardMt19937_64) {
  // The standard pins the 10000th output of a default-seeded engine.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(RngTest, DeriveSeedSeparatesStreams) {
  // First SplitMix64 output from state 0.
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFull);
  EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 0), derive_seed(43, 0));
  EXPECT_EQ(derive_seed(42, 3), derive_seed(42, 3));
}

TEST(RngTest, UniformIndexInRangeAndCovering) {
  Rng rng(1);
  std::array<int, 7> hist{};
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++hist[k];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
  EXPECT_THROW(rng.uniform_index(0), ParameterError);
}

TEST(RngTest, UniformAndNormalMoments) {
  Rng rng(2);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(ConfigTest, ParsesAndTracksUse) {
  std::istringstream in(
      "# comment\n trees = 50 \nthreshold=0.4\nbootstrap = false\n"
      "levels = 0, 10 ,20\nname = hello world\n");
  auto cfg = KeyValueConfig::parse(in);
  EXPECT_EQ(cfg.get_int("trees"), 50);
  EXPECT_EQ(cfg.get_double("threshold"), 0.4);
  EXPECT_EQ(cfg.get_bool("bootstrap"), false);
  EXPECT_EQ(cfg.get_doubles("levels"), (std::vector<double>{0, 10, 20}));
  EXPECT_FALSE(cfg.get_int("missing"));
  EXPECT_EQ(cfg.unused_keys(), std::vector<std::string>{"name"});
  EXPECT_EQ(cfg.get_string("name"), "hello world");
  EXPECT_TRUE(cfg.unused_keys().empty());
}

TEST(ConfigTest, Errors) {
  std::istringstream bad_line("just words\n");
  EXPECT_THROW(KeyValueConfig::parse(bad_line), DataError);
  KeyValueConfig cfg;
  cfg.set("trees", "many");
  cfg.set("flag", "perhaps");
  EXPECT_THROW(cfg.get_int("trees"), DataError);
  EXPECT_THROW(cfg.get_bool("flag"), DataError);
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/acs.cfg"), DataError);
}

}  // namespace
}  // namespace acs
