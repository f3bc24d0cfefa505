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

#include "acs/config.hpp"

#include <charconv>
#include <fstream>

#include "acs/error.hpp"

namespace acs {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) +
                      ": expected key = value");
    }
    auto key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) {
      throw DataError("config line " + std::to_string(line_no) +
                      ": empty key");
    }
    cfg.values_[key] = trim(std::string_view(text).substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path.string());
  return parse(in);
}

bool KeyValueConfig::contains(const std::string& key) const {
  return values_.count(key) != 0;
}

std::optional<std::string> KeyValueConfig::get_string(
    const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto raw = get_string(key);
  if (!raw) return std::nullopt;
  const auto v = parse_number<double>(*raw);
  if (!v) throw DataError("config key " + key + ": not a number: " + *raw);
  return v;
}

std::optional<long long> KeyValueConfig::get_int(const std::string& key) const {
  const auto raw = get_string(key);
  if (!raw) return std::nullopt;
  const auto v = parse_number<long long>(*raw);
  if (!v) throw DataError("config key " + key + ": not an integer: " + *raw);
  return v;
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
  const auto raw = get_string(key);
  if (!raw) return std::nullopt;
  if (*raw == "true" || *raw == "1" || *raw == "on") return true;
  if (*raw == "false" || *raw == "0" || *raw == "off") return false;
  throw DataError("config key " + key + ": not a boolean: " + *raw);
}

std::optional<std::vector<double>> KeyValueConfig::get_doubles(
    const std::string& key) const {
  const auto raw = get_string(key);
  if (!raw) return std::nullopt;
  std::vector<double> out;
  std::string_view rest = *raw;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    const auto v = parse_number<double>(item);
    if (!v) throw DataError("config key " + key + ": bad list item: " + item);
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) out.push_back(key);
  }
  return out;
}

}  // namespace acs
