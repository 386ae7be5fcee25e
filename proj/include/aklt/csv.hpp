#pragma once

// RFC-4180 tables and whole-file I/O. Numbers are written in the shortest
// form that round-trips, so identical inputs give identical bytes.

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace aklt::io {

std::string format_number(double x);
std::string format_number(long long x);
inline std::string format_number(int x) { return format_number(static_cast<long long>(x)); }
inline std::string format_bool(bool b) { return b ? "1" : "0"; }

/// Quotes a field iff it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name; throws IoError if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Throws IoError on unterminated quotes or ragged rows. The first record is the header.
CsvTable parse_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Throws IoError when the file cannot be written in full.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace aklt::io
