//
// Copyright 2026 The Cascal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CASCAL_SRC_PARSE_UTIL_HPP_
#define CASCAL_SRC_PARSE_UTIL_HPP_

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "cascal/errors.hpp"

namespace cascal::internal {

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double ParseDouble(std::string_view text, std::string_view what) {
  const std::string_view t = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError(std::string(what) + ": cannot parse \"" + std::string(t) +
                          "\" as a number");
  }
  return value;
}

template <typename Int>
Int ParseInteger(std::string_view text, std::string_view what) {
  const std::string_view t = Trim(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError(std::string(what) + ": cannot parse \"" + std::string(t) +
                          "\" as an integer");
  }
  return value;
}

}  // namespace cascal::internal

#endif  // CASCAL_SRC_PARSE_UTIL_HPP_
