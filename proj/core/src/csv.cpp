#include "wqmc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wqmc {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CsvTable::CsvTable(std::vector<std::string> columns, const std::string& config)
    : columns_(std::move(columns)), config_(config) {}

void CsvTable::add_row(const std::vector<CsvValue>& values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("csv: row width does not match the header");
    std::vector<std::string> row;
    row.reserve(values.size());
    for (const auto& v : values) {
        if (std::holds_alternative<std::string>(v))
            row.push_back(std::get<std::string>(v));
        else if (std::holds_alternative<double>(v))
            row.push_back(format_value(std::get<double>(v)));
        else if (std::holds_alternative<std::int64_t>(v))
            row.push_back(std::to_string(std::get<std::int64_t>(v)));
        else
            row.push_back(std::get<bool>(v) ? "true" : "false");
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::ostringstream os;
    os << "# wqmc-csv v1 config=" << std::hex << config_hash(config_) << std::dec
       << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    out << str();
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<std::pair<double, double>>& points,
                      double slope) {
    if (points.empty()) throw std::invalid_argument("svg: no points");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("svg: log-log points must be positive");
        xmin = std::min(xmin, std::log10(x));
        xmax = std::max(xmax, std::log10(x));
        ymin = std::min(ymin, std::log10(y));
        ymax = std::max(ymax, std::log10(y));
    }
    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-9) ymax = ymin + 1.0;
    const double W = 480.0, H = 360.0, pad = 48.0;
    auto px = [&](double lx) { return pad + (lx - xmin) / (xmax - xmin) * (W - 2 * pad); };
    auto py = [&](double ly) { return H - pad - (ly - ymin) / (ymax - ymin) * (H - 2 * pad); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad
       << "\" y2=\"" << H - pad << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad
       << "\" y2=\"" << H - pad << "\" stroke=\"black\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : points) os << px(std::log10(x)) << "," << py(std::log10(y)) << " ";
    os << "\"/>\n";
    for (auto [x, y] : points)
        os << "<circle cx=\"" << px(std::log10(x)) << "\" cy=\"" << py(std::log10(y))
           << "\" r=\"3\" fill=\"steelblue\"/>\n";
    os << "<text x=\"" << W - pad << "\" y=\"" << pad + 14
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << "fitted slope " << format_value(slope) << "</text>\n";
    os << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("svg: cannot open " + path);
    out << os.str();
}

}  // namespace wqmc
