#pragma once

#include <string>
#include <vector>

namespace sharpwave {

// shortest round-trippable decimal, %.15g
std::string fmt_g(double v);

void write_text_file(const std::string& path, const std::string& content);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct svg_series {
    std::string label;
    std::vector<double> x, y;
};

// static SVG 1.1 line plot with axes, ticks, and a legend
void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<svg_series>& series);

}  // namespace sharpwave
