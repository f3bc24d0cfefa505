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

#include "acs/types.hpp"

namespace acs {

std::string_view to_string(Scenario s) {
  return s == Scenario::kMotion ? "motion" : "motionless";
}

std::string_view to_string(Label l) {
  return l == Label::kPositive ? "positive" : "negative";
}

std::size_t Dataset::count(Label l) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += (r.label == l);
  return n;
}

}  // namespace acs
