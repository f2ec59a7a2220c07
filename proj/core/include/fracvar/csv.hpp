#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fracvar {

/// Numeric table read from a CSV file. Columns are stored column-major;
/// a single non-numeric first line is treated as a header and kept.
struct CsvTable {
  std::vector<std::string> header;  // empty when the file had none
  std::vector<std::vector<double>> columns;

  std::size_t rows() const {
    return columns.empty() ? 0 : columns.front().size();
  }
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& origin);

/// Writes columns with a header row; values are formatted with 17
/// significant digits so doubles round-trip exactly.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

}  // namespace fracvar
