#include "aoilab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "aoilab/errors.hpp"

namespace aoilab {

std::string format_csv_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void emit_csv(const std::filesystem::path& path, std::uint64_t manifest_digest,
              const std::vector<std::string>& header, const std::vector<CsvRow>& rows, bool force) {
    if (!force && std::filesystem::exists(path))
        throw ConfigError("emit_csv: refusing to overwrite '" + path.string() + "' without --force");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + path.string() + "' for writing");
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(manifest_digest));
    out << "# manifest: " << digest << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& cell) {
                    using T = std::decay_t<decltype(cell)>;
                    if constexpr (std::is_same_v<T, double>)
                        out << format_csv_number(cell);
                    else
                        out << cell;
                },
                row[i]);
        }
        out << "\n";
    }
    out.flush();
    if (!out) throw std::runtime_error("emit_csv: write failed for '" + path.string() + "'");
}

}  // namespace aoilab
