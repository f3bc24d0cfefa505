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

#include <ostream>
#include <string>
#include <vector>

namespace acs::cli {

inline constexpr char kToolVersion[] = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kModelError = 3,
};

/// Runs one `acs` invocation. `args` excludes the program name. Results go to
/// `out`; diagnostics, and the run manifest unless --manifest names a file,
/// go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace acs::cli
