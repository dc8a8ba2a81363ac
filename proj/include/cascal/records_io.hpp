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

#ifndef CASCAL_RECORDS_IO_HPP_
#define CASCAL_RECORDS_IO_HPP_

// Line-oriented score files.
//
// JSONL, one object per line (blank lines are skipped):
//   aggregated     {"u_edge", "c_edge", "u_cloud", "c_cloud",
//                   "edge_correct", "cloud_correct"}
//   raw-white-box  {"edge_members": [[p...], ...], "cloud_members": [...],
//                   "edge_correct", "cloud_correct"}
//   raw-black-box  {"edge_confidences": [c...], "cloud_confidences": [...],
//                   "edge_correct", "cloud_correct"}
//
// CSV with a header row naming the same fields. Array cells hold
// space-separated numbers; ensemble members are separated by '|'.
// Booleans are true/false or 1/0. Field names are case-sensitive.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascal/cascade.hpp"

namespace cascal {

enum class RecordFormat { kJsonl, kCsv };
enum class RecordSchema { kAggregated, kRawWhiteBox, kRawBlackBox };

std::optional<RecordFormat> ParseRecordFormat(std::string_view name);
std::optional<RecordSchema> ParseRecordSchema(std::string_view name);
std::string_view RecordSchemaName(RecordSchema schema);

// Guesses the format from the extension: ".csv" is CSV, anything else JSONL.
RecordFormat FormatFromPath(const std::filesystem::path& path);

// Errors are ValidationError with "<source>:<line>: <field>: <reason>".
std::vector<CascadeRecord> ParseRecordsText(std::string_view text, RecordFormat format,
                                            RecordSchema schema,
                                            std::string_view source = "<input>");
std::vector<CascadeRecord> ParseRecords(const std::filesystem::path& path, RecordFormat format,
                                        RecordSchema schema);

// Aggregated schema, shortest round-trip number formatting.
std::string FormatRecords(std::span<const CascadeRecord> records, RecordFormat format);
void WriteRecords(const std::filesystem::path& path, std::span<const CascadeRecord> records,
                  RecordFormat format);

}  // namespace cascal

#endif  // CASCAL_RECORDS_IO_HPP_
