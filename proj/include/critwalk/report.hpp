#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace critwalk {

// Stable shortest round-trip formatting; all report files go through this so
// reruns are byte-identical.
std::string format_double(double x);

std::uint64_t fnv1a(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string to_string() const;
};

// Minimal log-log scatter/line plot.
struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};
std::string svg_loglog_plot(const std::vector<SvgSeries>& series, const std::string& title);

} // namespace critwalk
