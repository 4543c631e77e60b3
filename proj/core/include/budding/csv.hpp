#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace budding {

// A parsed CSV document. The first row is the header; `line_numbers[i]` is the
// 1-based source line on which `rows[i]` starts.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180 style: comma separator, double-quote quoting with "" escapes,
// LF or CRLF line endings, optional UTF-8 BOM. Blank lines are skipped.
// Throws ValidationError naming `source` and the line on malformed input.
CsvTable parse_csv(std::string_view text, std::string_view source);

// Throws IoError if the file cannot be read.
CsvTable read_csv_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

  static std::string escape(std::string_view field);

 private:
  std::ostream& out_;
};

}  // namespace budding
