// Copyright 2026 The eepc Authors
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

#include "eepc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream is(s);
  while (std::getline(is, token, sep)) out.push_back(trim(token));
  return out;
}

double parse_double(const std::string& value, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": expected a number, got '" + value + "'");
  }
}

}  // namespace

void KeyValues::set(std::string key, std::string value, int line) {
  entries_[std::move(key)] = Entry{std::move(value), line, false};
}

bool KeyValues::has(const std::string& key) const { return entries_.count(key) != 0; }

const KeyValues::Entry& KeyValues::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError(source_ + ": missing required key '" + key + "'");
  }
  it->second.used = true;
  return it->second;
}

std::string KeyValues::get_string(const std::string& key) const { return require(key).value; }

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValues::get_double(const std::string& key) const {
  const Entry& e = require(key);
  return parse_double(e.value, source_ + ":" + std::to_string(e.line) + ": key '" + key + "'");
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValues::get_int(const std::string& key) const {
  const double v = get_double(key);
  const auto rounded = static_cast<std::int64_t>(std::llround(v));
  if (static_cast<double>(rounded) != v) fail(key, "expected an integer");
  return rounded;
}

std::int64_t KeyValues::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValues::get_seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = require(key);
  try {
    return std::stoull(e.value);
  } catch (const std::exception&) {
    fail(key, "expected an unsigned integer seed");
  }
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(key, "expected a boolean (true/false)");
}

std::vector<double> KeyValues::get_grid(const std::string& key) const {
  const Entry& e = require(key);
  const std::string context = source_ + ":" + std::to_string(e.line) + ": key '" + key + "'";
  std::vector<double> out;
  if (e.value.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(e.value, ':');
    if (parts.size() != 3) throw ConfigError(context + ": range must be lo:step:hi");
    const double lo = parse_double(parts[0], context);
    const double step = parse_double(parts[1], context);
    const double hi = parse_double(parts[2], context);
    if (!(step > 0.0) || hi < lo) throw ConfigError(context + ": empty or descending range");
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
  }
  for (const std::string& token : split(e.value, ',')) {
    if (!token.empty()) out.push_back(parse_double(token, context));
  }
  if (out.empty()) throw ConfigError(context + ": empty grid");
  return out;
}

std::vector<double> KeyValues::get_grid(const std::string& key,
                                        std::vector<double> fallback) const {
  return has(key) ? get_grid(key) : fallback;
}

std::vector<std::string> KeyValues::get_list(const std::string& key) const {
  const Entry& e = require(key);
  std::vector<std::string> out;
  for (const std::string& token : split(e.value, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

std::vector<std::string> KeyValues::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) {
    if (!entry.used) out.push_back(key);
  }
  return out;
}

void KeyValues::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  const int line = it == entries_.end() ? 0 : it->second.line;
  throw ConfigError(source_ + ":" + std::to_string(line) + ": key '" + key + "': " + message);
}

KeyValues parse_key_values(std::istream& in, const std::string& source_name) {
  KeyValues kv;
  kv.set_source(source_name);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source_name + ":" + std::to_string(number) +
                        ": expected 'key = value', got '" + text + "'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source_name + ":" + std::to_string(number) + ": empty key");
    }
    kv.set(key, value, number);
  }
  return kv;
}

KeyValues parse_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  return parse_key_values(in, path);
}

}  // namespace eepc
