#include "records.hpp"

#include <fmt/format.h>

#include <json.hpp>

#include "budding/csv.hpp"
#include "budding/error.hpp"

namespace budding::detail {
namespace {

std::string json_value_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_null()) return {};
  if (value.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i) out += ';';
      out += json_value_text(value[i]);
    }
    return out;
  }
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number_unsigned()) return std::to_string(value.get<unsigned long long>());
  if (value.is_number_float()) return fmt::format("{}", value.get<double>());
  return value.dump();
}

RecordSet parse_json_lines(std::string_view text, std::string_view source,
                           std::span<const std::string_view> fields) {
  RecordSet set{std::string(source), {}};
  std::vector<std::string> issues;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      issues.push_back(fmt::format("{}: line {}: invalid JSON: {}", source, line_no, e.what()));
      continue;
    }
    if (!object.is_object()) {
      issues.push_back(fmt::format("{}: line {}: expected a JSON object", source, line_no));
      continue;
    }
    Record record{line_no, {}};
    record.values.reserve(fields.size());
    bool complete = true;
    for (std::string_view field : fields) {
      auto it = object.find(std::string(field));
      if (it == object.end()) {
        issues.push_back(fmt::format("{}: line {}: missing field '{}'", source, line_no, field));
        complete = false;
        break;
      }
      record.values.push_back(json_value_text(*it));
    }
    if (complete) set.records.push_back(std::move(record));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return set;
}

RecordSet parse_csv_records(std::string_view text, std::string_view source,
                            std::span<const std::string_view> fields) {
  CsvTable table = parse_csv(text, source);
  std::vector<std::size_t> columns;
  std::vector<std::string> issues;
  for (std::string_view field : fields) {
    if (auto col = table.column(field)) {
      columns.push_back(*col);
    } else {
      issues.push_back(fmt::format("{}: header is missing column '{}'", source, field));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  RecordSet set{std::string(source), {}};
  set.records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Record record{table.line_numbers[r], {}};
    record.values.reserve(columns.size());
    for (std::size_t col : columns) record.values.push_back(std::string(trim(table.rows[r][col])));
    set.records.push_back(std::move(record));
  }
  return set;
}

}  // namespace

bool is_json_lines(const std::filesystem::path& path) {
  const auto ext = path.extension();
  return ext == ".jsonl" || ext == ".ndjson";
}

RecordSet parse_records(std::string_view text, std::string_view source, bool json_lines,
                        std::span<const std::string_view> fields) {
  return json_lines ? parse_json_lines(text, source, fields)
                    : parse_csv_records(text, source, fields);
}

RecordSet read_records(const std::filesystem::path& path,
                       std::span<const std::string_view> fields) {
  const std::string text = read_text_file(path);
  return parse_records(text, path.string(), is_json_lines(path), fields);
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    out.emplace_back(trim(text.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string location(const RecordSet& set, const Record& record) {
  return fmt::format("{}: line {}", set.source, record.line);
}

}  // namespace budding::detail
