#include "budding/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <ostream>
#include <sstream>

#include "budding/error.hpp"

namespace budding {

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable parse_csv(std::string_view text, std::string_view source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool record_has_content = false;

  auto finish_record = [&] {
    if (!record_has_content && record.empty() && field.empty()) return;
    record.push_back(std::move(field));
    field.clear();
    if (table.header.empty() && table.rows.empty()) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        throw ValidationError(fmt::format("{}: line {}: expected {} fields, found {}", source,
                                          record_line, table.header.size(), record.size()));
      }
      table.rows.push_back(std::move(record));
      table.line_numbers.push_back(record_line);
    }
    record.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ValidationError(
              fmt::format("{}: line {}: unexpected quote inside field", source, line));
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        record_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        finish_record();
        field_was_quoted = false;
        ++line;
        record_line = line;
        break;
      default:
        if (field_was_quoted) {
          throw ValidationError(
              fmt::format("{}: line {}: text after closing quote", source, line));
        }
        field += c;
        record_has_content = true;
    }
  }
  if (in_quotes) {
    throw ValidationError(fmt::format("{}: line {}: unterminated quoted field", source, record_line));
  }
  finish_record();

  if (table.header.empty()) {
    throw ValidationError(fmt::format("{}: missing header row", source));
  }
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
  return std::move(buffer).str();
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path), path.string());
}

std::string CsvWriter::escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape(fields[i]);
  }
  out_ << '\n';
}

}  // namespace budding
