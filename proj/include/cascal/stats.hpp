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

#ifndef CASCAL_STATS_HPP_
#define CASCAL_STATS_HPP_

#include <span>

namespace cascal {

double Mean(std::span<const double> values);

// Sample standard deviation with the n - 1 divisor; 0 for a single value.
double SampleStd(std::span<const double> values);

// Nearest-rank quantile: the ceil(p * n)-th order statistic. Conservative,
// used for guarantee lines such as the 1 - delta quantile of misalignment.
double Quantile(std::span<const double> values, double p);

// Linear interpolation between order statistics at position (n - 1) * p.
double InterpolatedQuantile(std::span<const double> values, double p);

// Largest value not above the upper box-plot whisker Q3 + 1.5 (Q3 - Q1),
// with quartiles from InterpolatedQuantile.
double IqrMax(std::span<const double> values);

}  // namespace cascal

#endif  // CASCAL_STATS_HPP_
