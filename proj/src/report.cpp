#include "sharpwave/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "sharpwave/errors.hpp"

namespace sharpwave {

std::string fmt_g(double v) {
    // shortest representation that parses back to the same double
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write " + path);
    out << content;
    if (!out) throw config_error("write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << fmt_g(row[j]);
        os << "\n";
    }
    write_text_file(path, os.str());
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double nice_step(double range, int target) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0, 10.0})
        if (raw <= mult * mag * (1.0 + 1e-12)) return mult * mag;
    return 10.0 * mag;
}

std::string fmt_tick(double v) {
    if (std::abs(v) < 1e-12) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<svg_series>& series) {
    const double W = 880, H = 540;
    const double x0 = 78, x1 = 844, y0 = 486, y1 = 54;  // plot rect, y down

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) {
        xmax += 1;
        xmin -= 1;
    }
    if (ymax == ymin) {
        ymax += 1;
        ymin -= 1;
    }
    const double xpad = 0.03 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
    auto py = [&](double y) { return y0 + (y - ymin) / (ymax - ymin) * (y1 - y0); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // grid and ticks
    const double xs = nice_step(xmax - xmin, 6), ys = nice_step(ymax - ymin, 6);
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (double v = std::ceil(xmin / xs) * xs; v <= xmax + 1e-12 * xs; v += xs) {
        const double X = px(v);
        os << "<line x1=\"" << num(X) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(X)
           << "\" y2=\"" << num(y1) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << num(X) << "\" y=\"" << num(y0 + 18)
           << "\" text-anchor=\"middle\">" << fmt_tick(v) << "</text>\n";
    }
    for (double v = std::ceil(ymin / ys) * ys; v <= ymax + 1e-12 * ys; v += ys) {
        const double Y = py(v);
        os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(Y) << "\" x2=\"" << num(x1)
           << "\" y2=\"" << num(Y) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(Y + 4)
           << "\" text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
    }
    os << "</g>\n";

    // frame
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
       << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // series
    int ci = 0;
    for (const auto& s : series) {
        const char* color = kPalette[ci % 8];
        ++ci;
        std::ostringstream pts;
        bool open = false;
        auto flush = [&]() {
            if (open) {
                os << "<polyline fill=\"none\" stroke=\"" << color
                   << "\" stroke-width=\"1.6\" points=\"" << pts.str() << "\"/>\n";
                pts.str("");
                open = false;
            }
        };
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            pts << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
            open = true;
        }
        flush();
    }

    // legend
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";
    double ly = y1 + 16;
    ci = 0;
    for (const auto& s : series) {
        const char* color = kPalette[ci % 8];
        ++ci;
        if (s.label.empty()) continue;
        os << "<line x1=\"" << num(x1 - 170) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
           << num(x1 - 146) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << num(x1 - 140) << "\" y=\"" << num(ly) << "\">"
           << xml_escape(s.label) << "</text>\n";
        ly += 16;
    }
    os << "</g>\n";

    // labels
    os << "<g font-family=\"sans-serif\" fill=\"#111\">\n"
       << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"28\" font-size=\"16\" "
          "text-anchor=\"middle\">"
       << xml_escape(title) << "</text>\n"
       << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(H - 10)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(xlabel) << "</text>\n"
       << "<text x=\"20\" y=\"" << num((y0 + y1) / 2)
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << num((y0 + y1) / 2) << ")\">" << xml_escape(ylabel) << "</text>\n"
       << "</g>\n</svg>\n";

    write_text_file(path, os.str());
}

}  // namespace sharpwave
