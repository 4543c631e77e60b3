#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace budding::detail {

// One input row, values aligned with the requested field list.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> values;
};

struct RecordSet {
  std::string source;
  std::vector<Record> records;
};

bool is_json_lines(const std::filesystem::path& path);

// Reads a CSV or JSON-lines file and projects each row onto `fields`. JSON
// arrays are joined with ';' and JSON booleans/numbers become their text, so
// both formats go through the same field parsers. Missing fields are
// validation errors.
RecordSet read_records(const std::filesystem::path& path, std::span<const std::string_view> fields);
RecordSet parse_records(std::string_view text, std::string_view source, bool json_lines,
                        std::span<const std::string_view> fields);

std::vector<std::string> split_list(std::string_view text, char sep = ';');
std::string_view trim(std::string_view text);

std::string location(const RecordSet& set, const Record& record);

}  // namespace budding::detail
