#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qvor::io {

using Json = nlohmann::json;  // keys are kept sorted, so dumps are stable

// Parses JSON text. Syntax errors become kParseError with the 1-based line and
// column of the offending byte in the message; `source` names the input.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

// FNV-1a 64 over the compact dump, as 16 hex digits.
std::string config_hash(const Json& config);

// RFC 4180 table: CRLF line ends, fields quoted only when they need it.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> fields);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

  static std::string escape(std::string_view field);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Inverse of CsvTable::str, used to check round trips.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace qvor::io
