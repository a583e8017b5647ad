#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mgvp {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// Comma-delimited, header row, LF line endings. Written in one shot so a
/// failed run never leaves a half-written file behind.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string render() const;
  void write(const std::filesystem::path& path) const;

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

}  // namespace mgvp
