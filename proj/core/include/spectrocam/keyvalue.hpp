// Copyright 2026 The spectrocam Authors
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

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace spectrocam {

// One `key = value` assignment and the 1-based line it came from.
struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// Parses `key = value` lines. Blank lines and lines starting with '#' are
// skipped; a line without '=' or with an empty key is a ParseError.
// Duplicate keys are a ParseError.
std::vector<KeyValue> parse_key_values(std::string_view text);

// Lookup helper over parsed assignments. get_* throw ConfigError when the
// key is missing or its value does not parse.
class KeyValueMap {
 public:
  KeyValueMap() = default;
  explicit KeyValueMap(const std::vector<KeyValue>& entries);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::uint64_t get_uint64(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string_view trim(std::string_view s);

// Splits on commas and/or whitespace; empty fields are dropped.
std::vector<std::string> split_list(std::string_view s);

// Strict numeric parsing; the whole (trimmed) string must be consumed.
// Throws InvalidInput.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);
std::uint64_t parse_uint64(std::string_view s);
bool parse_bool(std::string_view s);

// Shortest decimal text that parses back to exactly the same value.
std::string format_double(double v);

std::string join(const std::vector<std::string>& items, std::string_view sep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace spectrocam
