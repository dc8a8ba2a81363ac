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

#include "cascal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "cascal/errors.hpp"

namespace cascal {
namespace {

std::vector<double> Sorted(std::span<const double> values, const char* what) {
  if (values.empty()) throw ValidationError(std::string(what) + " of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

void CheckProbability(double p, bool allow_zero) {
  if (!((allow_zero ? p >= 0.0 : p > 0.0) && p <= 1.0)) {
    std::ostringstream msg;
    msg << "quantile level " << p << " is out of range";
    throw ValidationError(msg.str());
  }
}

}  // namespace

double Mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleStd(std::span<const double> values) {
  const double mean = Mean(values);
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double Quantile(std::span<const double> values, double p) {
  CheckProbability(p, false);
  const std::vector<double> sorted = Sorted(values, "quantile");
  const double n = static_cast<double>(sorted.size());
  // p * n that lands a rounding error above an integer must not bump the rank.
  double rank = std::ceil(p * n);
  if (rank - p * n > 1.0 - 1e-9) rank -= 1.0;
  const auto k = static_cast<std::size_t>(std::clamp(rank, 1.0, n));
  return sorted[k - 1];
}

double InterpolatedQuantile(std::span<const double> values, double p) {
  CheckProbability(p, true);
  const std::vector<double> sorted = Sorted(values, "quantile");
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double IqrMax(std::span<const double> values) {
  const std::vector<double> sorted = Sorted(values, "iqr_max");
  const double q1 = InterpolatedQuantile(sorted, 0.25);
  const double q3 = InterpolatedQuantile(sorted, 0.75);
  const double fence = q3 + 1.5 * (q3 - q1);
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), fence);
  if (it == sorted.begin()) return sorted.front();
  return *(it - 1);
}

}  // namespace cascal
