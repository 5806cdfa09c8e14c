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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

// Plain-text configuration: one `key = value` pair per line, `#` comments,
// blank lines ignored. Values are scalars, comma lists, or `lo:step:hi`
// ranges. Errors carry file and line context.

namespace eepc {

class KeyValues {
 public:
  KeyValues() = default;

  void set(std::string key, std::string value, int line = 0);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;

  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;

  bool get_bool(const std::string& key, bool fallback) const;

  /// Comma list ("a,b,c") or inclusive range ("lo:step:hi").
  std::vector<double> get_grid(const std::string& key) const;
  std::vector<double> get_grid(const std::string& key, std::vector<double> fallback) const;

  std::vector<std::string> get_list(const std::string& key) const;

  /// Keys present in the file but never read; used to reject typos.
  std::vector<std::string> unused_keys() const;

  const std::string& source() const { return source_; }
  void set_source(std::string source) { source_ = std::move(source); }

  /// A ConfigError pointing at the key's line.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  std::map<std::string, Entry> entries_;
  std::string source_ = "<memory>";

  const Entry& require(const std::string& key) const;
};

/// Parses `key = value` text. Throws ConfigError with file:line context.
KeyValues parse_key_values(std::istream& in, const std::string& source_name);

KeyValues parse_key_values_file(const std::string& path);

}  // namespace eepc
