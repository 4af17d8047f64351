#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace wqmc {

// Value of a single CSV cell; doubles are printed with 12 significant digits.
using CsvValue = std::variant<std::string, double, std::int64_t, bool>;

// Deterministic CSV document: a comment line carrying the artifact version
// and a hash of the generating configuration, a header row, then data rows.
// Identical configuration and rows produce identical bytes.
class CsvTable {
public:
    CsvTable(std::vector<std::string> columns, const std::string& config);

    void add_row(const std::vector<CsvValue>& values);
    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::string config_;
    std::vector<std::vector<std::string>> rows_;
};

// Round-trip-stable formatting with 12 significant digits.
std::string format_value(double v);

// FNV-1a hash of the configuration text, printed in the CSV comment line.
std::uint64_t config_hash(const std::string& text);

// Minimal log-log scatter plot with a fitted-slope annotation, written as a
// standalone SVG file.  Points must be positive in both coordinates.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<std::pair<double, double>>& points,
                      double slope);

}  // namespace wqmc
