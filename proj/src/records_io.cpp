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

#include "cascal/records_io.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cascal/aggregate.hpp"
#include "file_util.hpp"
#include "parse_util.hpp"

namespace cascal {
namespace {

using Json = nlohmann::json;

class LineError {
 public:
  LineError(std::string_view source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void Fail(std::string_view field, std::string_view reason) const {
    std::ostringstream msg;
    msg << source_ << ":" << line_ << ": ";
    if (!field.empty()) msg << field << ": ";
    msg << reason;
    throw ValidationError(msg.str());
  }

 private:
  std::string_view source_;
  std::size_t line_;
};

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Wraps any validation failure in the aggregation or range checks with the
// line context.
template <typename Fn>
auto WithContext(const LineError& where, std::string_view field, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    where.Fail(field, e.what());
  }
}

CascadeRecord Checked(const CascadeRecord& record, const LineError& where) {
  WithContext(where, "", [&] {
    ValidateRecord(record);
    return 0;
  });
  return record;
}

// ---- JSONL -------------------------------------------------------------

const Json& JsonField(const Json& obj, const char* name, const LineError& where) {
  const auto it = obj.find(name);
  if (it == obj.end()) where.Fail(name, "missing field");
  return *it;
}

double JsonNumber(const Json& obj, const char* name, const LineError& where) {
  const Json& v = JsonField(obj, name, where);
  if (!v.is_number()) where.Fail(name, "expected a number");
  return v.get<double>();
}

bool JsonBool(const Json& obj, const char* name, const LineError& where) {
  const Json& v = JsonField(obj, name, where);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer() && (v.get<long long>() == 0 || v.get<long long>() == 1)) {
    return v.get<long long>() == 1;
  }
  where.Fail(name, "expected a boolean");
}

std::vector<double> JsonVector(const Json& v, const char* name, const LineError& where) {
  if (!v.is_array()) where.Fail(name, "expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) where.Fail(name, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> JsonMatrix(const Json& obj, const char* name,
                                            const LineError& where) {
  const Json& v = JsonField(obj, name, where);
  if (!v.is_array()) where.Fail(name, "expected an array of probability vectors");
  std::vector<std::vector<double>> out;
  for (const Json& row : v) out.push_back(JsonVector(row, name, where));
  return out;
}

CascadeRecord RecordFromJson(const Json& obj, RecordSchema schema, const LineError& where) {
  if (!obj.is_object()) where.Fail("", "expected a JSON object");
  switch (schema) {
    case RecordSchema::kAggregated:
      return Checked({JsonNumber(obj, "u_edge", where), JsonNumber(obj, "c_edge", where),
                      JsonNumber(obj, "u_cloud", where), JsonNumber(obj, "c_cloud", where),
                      JsonBool(obj, "edge_correct", where),
                      JsonBool(obj, "cloud_correct", where)},
                     where);
    case RecordSchema::kRawWhiteBox: {
      WhiteBoxRawRecord raw;
      raw.edge_members = JsonMatrix(obj, "edge_members", where);
      raw.cloud_members = JsonMatrix(obj, "cloud_members", where);
      raw.edge_correct = JsonBool(obj, "edge_correct", where);
      raw.cloud_correct = JsonBool(obj, "cloud_correct", where);
      return Checked(WithContext(where, "", [&] { return AggregateRecord(raw); }), where);
    }
    case RecordSchema::kRawBlackBox: {
      BlackBoxRawRecord raw;
      raw.edge_confidences =
          JsonVector(JsonField(obj, "edge_confidences", where), "edge_confidences", where);
      raw.cloud_confidences =
          JsonVector(JsonField(obj, "cloud_confidences", where), "cloud_confidences", where);
      raw.edge_correct = JsonBool(obj, "edge_correct", where);
      raw.cloud_correct = JsonBool(obj, "cloud_correct", where);
      return Checked(WithContext(where, "", [&] { return AggregateRecord(raw); }), where);
    }
  }
  where.Fail("", "unknown schema");
}

// ---- CSV ---------------------------------------------------------------

class CsvRow {
 public:
  CsvRow(const std::map<std::string, std::size_t, std::less<>>& columns,
         std::vector<std::string_view> cells, const LineError& where)
      : columns_(columns), cells_(std::move(cells)), where_(where) {}

  std::string_view Cell(const char* name) const {
    const auto it = columns_.find(name);
    if (it == columns_.end()) where_.Fail(name, "missing column");
    return internal::Trim(cells_[it->second]);
  }

  double Number(const char* name) const {
    return WithContext(where_, name, [&] { return internal::ParseDouble(Cell(name), "value"); });
  }

  bool Bool(const char* name) const {
    const std::string_view v = Cell(name);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    where_.Fail(name, "expected true/false or 1/0, got \"" + std::string(v) + "\"");
  }

  std::vector<double> Vector(std::string_view cell, const char* name) const {
    std::vector<double> out;
    for (std::string_view tok : internal::Split(internal::Trim(cell), ' ')) {
      if (tok.empty()) continue;
      out.push_back(
          WithContext(where_, name, [&] { return internal::ParseDouble(tok, "value"); }));
    }
    return out;
  }

  std::vector<std::vector<double>> Members(const char* name) const {
    std::vector<std::vector<double>> out;
    for (std::string_view member : internal::Split(Cell(name), '|')) {
      out.push_back(Vector(member, name));
    }
    return out;
  }

 private:
  const std::map<std::string, std::size_t, std::less<>>& columns_;
  std::vector<std::string_view> cells_;
  const LineError& where_;
};

CascadeRecord RecordFromCsv(const CsvRow& row, RecordSchema schema, const LineError& where) {
  switch (schema) {
    case RecordSchema::kAggregated:
      return Checked({row.Number("u_edge"), row.Number("c_edge"), row.Number("u_cloud"),
                      row.Number("c_cloud"), row.Bool("edge_correct"),
                      row.Bool("cloud_correct")},
                     where);
    case RecordSchema::kRawWhiteBox: {
      WhiteBoxRawRecord raw;
      raw.edge_members = row.Members("edge_members");
      raw.cloud_members = row.Members("cloud_members");
      raw.edge_correct = row.Bool("edge_correct");
      raw.cloud_correct = row.Bool("cloud_correct");
      return Checked(WithContext(where, "", [&] { return AggregateRecord(raw); }), where);
    }
    case RecordSchema::kRawBlackBox: {
      BlackBoxRawRecord raw;
      raw.edge_confidences = row.Vector(row.Cell("edge_confidences"), "edge_confidences");
      raw.cloud_confidences = row.Vector(row.Cell("cloud_confidences"), "cloud_confidences");
      raw.edge_correct = row.Bool("edge_correct");
      raw.cloud_correct = row.Bool("cloud_correct");
      return Checked(WithContext(where, "", [&] { return AggregateRecord(raw); }), where);
    }
  }
  where.Fail("", "unknown schema");
}

}  // namespace

std::optional<RecordFormat> ParseRecordFormat(std::string_view name) {
  if (name == "jsonl") return RecordFormat::kJsonl;
  if (name == "csv") return RecordFormat::kCsv;
  return std::nullopt;
}

std::optional<RecordSchema> ParseRecordSchema(std::string_view name) {
  if (name == "aggregated") return RecordSchema::kAggregated;
  if (name == "raw-white-box") return RecordSchema::kRawWhiteBox;
  if (name == "raw-black-box") return RecordSchema::kRawBlackBox;
  return std::nullopt;
}

std::string_view RecordSchemaName(RecordSchema schema) {
  switch (schema) {
    case RecordSchema::kAggregated:
      return "aggregated";
    case RecordSchema::kRawWhiteBox:
      return "raw-white-box";
    case RecordSchema::kRawBlackBox:
      return "raw-black-box";
  }
  return "unknown";
}

RecordFormat FormatFromPath(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? RecordFormat::kCsv : RecordFormat::kJsonl;
}

std::vector<CascadeRecord> ParseRecordsText(std::string_view text, RecordFormat format,
                                            RecordSchema schema, std::string_view source) {
  std::vector<CascadeRecord> records;
  const auto lines = internal::Split(text, '\n');
  std::map<std::string, std::size_t, std::less<>> columns;
  bool have_header = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = internal::Trim(lines[i]);
    const LineError where(source, i + 1);
    if (line.empty()) continue;

    if (format == RecordFormat::kJsonl) {
      Json obj;
      try {
        obj = Json::parse(line);
      } catch (const Json::parse_error&) {
        where.Fail("", "malformed JSON");
      }
      records.push_back(RecordFromJson(obj, schema, where));
      continue;
    }

    std::vector<std::string_view> cells = internal::Split(line, ',');
    if (!have_header) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        columns.emplace(std::string(internal::Trim(cells[c])), c);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != columns.size()) {
      where.Fail("", "expected " + std::to_string(columns.size()) + " columns, got " +
                         std::to_string(cells.size()));
    }
    records.push_back(RecordFromCsv(CsvRow(columns, std::move(cells), where), schema, where));
  }
  return records;
}

std::vector<CascadeRecord> ParseRecords(const std::filesystem::path& path, RecordFormat format,
                                        RecordSchema schema) {
  return ParseRecordsText(internal::ReadFile(path), format, schema, path.string());
}

std::string FormatRecords(std::span<const CascadeRecord> records, RecordFormat format) {
  std::string out;
  auto boolean = [](bool b) { return b ? "true" : "false"; };
  if (format == RecordFormat::kCsv) {
    out += "u_edge,c_edge,u_cloud,c_cloud,edge_correct,cloud_correct\n";
    for (const auto& r : records) {
      out += FormatDouble(r.u_edge) + "," + FormatDouble(r.c_edge) + "," +
             FormatDouble(r.u_cloud) + "," + FormatDouble(r.c_cloud) + "," +
             boolean(r.edge_correct) + "," + boolean(r.cloud_correct) + "\n";
    }
    return out;
  }
  for (const auto& r : records) {
    out += "{\"u_edge\":" + FormatDouble(r.u_edge) + ",\"c_edge\":" + FormatDouble(r.c_edge) +
           ",\"u_cloud\":" + FormatDouble(r.u_cloud) + ",\"c_cloud\":" + FormatDouble(r.c_cloud) +
           ",\"edge_correct\":" + boolean(r.edge_correct) +
           ",\"cloud_correct\":" + boolean(r.cloud_correct) + "}\n";
  }
  return out;
}

void WriteRecords(const std::filesystem::path& path, std::span<const CascadeRecord> records,
                  RecordFormat format) {
  internal::WriteFile(path, FormatRecords(records, format));
}

}  // namespace cascal
