#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace aoilab {

using CsvCell = std::variant<long long, double, std::string>;
using CsvRow = std::vector<CsvCell>;

// 12 significant digits, the fixed width of every numeric CSV field.
std::string format_csv_number(double value);

// Writes `# manifest: <digest>`, the header row, then the data rows. Comma
// separated, '.' decimal point, LF endings. Refuses to overwrite an existing
// file unless `force`; I/O failures carry the path in the exception message.
void emit_csv(const std::filesystem::path& path, std::uint64_t manifest_digest,
              const std::vector<std::string>& header, const std::vector<CsvRow>& rows, bool force = false);

}  // namespace aoilab
