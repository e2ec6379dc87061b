#include "cfadv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cfadv/metrics.hpp"

namespace cfadv {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginBottom = 50.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginRight = 20.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void open_svg(std::ostringstream& s, const std::string& title, const std::string& meta) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    if (!meta.empty()) s << "<!-- " << meta << " -->\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

void close_svg(std::ostringstream& s, const std::string& path) {
    s << "</svg>\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << s.str();
}

void axes(std::ostringstream& s, double y_lo, double y_hi,
          const std::vector<std::pair<double, std::string>>& xticks,
          const std::string& ylabel) {
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double frac = i / 4.0;
        const double v = y_lo + frac * (y_hi - y_lo);
        const double y = y0 - frac * (y0 - y1);
        s << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0 << "\" y2=\"" << y
          << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << x0 - 8 << "\" y=\"" << y + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
          << "</text>\n";
    }
    for (const auto& [x, label] : xticks) {
        s << "<text x=\"" << x << "\" y=\"" << y0 + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label
          << "</text>\n";
    }
    s << "<text x=\"14\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
      << (y0 + y1) / 2 << ")\">" << ylabel << "</text>\n";
}

void draw_box(std::ostringstream& s, double cx, double half_w, const std::vector<double>& data,
              double y_lo, double y_hi, const std::string& color) {
    if (data.empty()) return;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    auto to_y = [&](double v) {
        const double frac = (y_hi > y_lo) ? (v - y_lo) / (y_hi - y_lo) : 0.5;
        return y0 - frac * (y0 - y1);
    };
    const FiveNumber f = five_number_summary(data);
    const double iqr = f.q3 - f.q1;
    // whiskers at furthest data within 1.5 IQR of the box
    double lo = f.q1, hi = f.q3;
    for (double v : data) {
        if (v >= f.q1 - 1.5 * iqr) lo = std::min(lo, v);
        if (v <= f.q3 + 1.5 * iqr) hi = std::max(hi, v);
    }
    s << "<line x1=\"" << cx << "\" y1=\"" << to_y(lo) << "\" x2=\"" << cx << "\" y2=\""
      << to_y(f.q1) << "\" stroke=\"" << color << "\"/>\n";
    s << "<line x1=\"" << cx << "\" y1=\"" << to_y(f.q3) << "\" x2=\"" << cx << "\" y2=\""
      << to_y(hi) << "\" stroke=\"" << color << "\"/>\n";
    for (double v : {lo, hi}) {
        s << "<line x1=\"" << cx - half_w / 2 << "\" y1=\"" << to_y(v) << "\" x2=\""
          << cx + half_w / 2 << "\" y2=\"" << to_y(v) << "\" stroke=\"" << color << "\"/>\n";
    }
    s << "<rect x=\"" << cx - half_w << "\" y=\"" << to_y(f.q3) << "\" width=\"" << 2 * half_w
      << "\" height=\"" << std::max(1.0, to_y(f.q1) - to_y(f.q3)) << "\" fill=\"" << color
      << "\" fill-opacity=\"0.35\" stroke=\"" << color << "\"/>\n";
    s << "<line x1=\"" << cx - half_w << "\" y1=\"" << to_y(f.median) << "\" x2=\""
      << cx + half_w << "\" y2=\"" << to_y(f.median) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
}

}  // namespace

void write_boxplot_svg(const std::string& path, const std::string& title,
                       const std::vector<BoxGroup>& groups, const std::string& meta) {
    std::ostringstream s;
    open_svg(s, title, meta);
    double lo = 0.0, hi = 1e-12;
    for (const auto& g : groups) {
        for (double v : g.empirical) hi = std::max(hi, v);
        for (double v : g.bound) hi = std::max(hi, v);
    }
    hi *= 1.05;

    const double span = kWidth - kMarginLeft - kMarginRight;
    const double slot = span / std::max<std::size_t>(1, groups.size());
    std::vector<std::pair<double, std::string>> ticks;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double cx = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
        ticks.emplace_back(cx, groups[i].label);
    }
    axes(s, lo, hi, ticks, "l_p difference");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double cx = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
        draw_box(s, cx - slot * 0.18, slot * 0.12, groups[i].empirical, lo, hi, "green");
        draw_box(s, cx + slot * 0.18, slot * 0.12, groups[i].bound, lo, hi, "blue");
    }
    // legend
    s << "<rect x=\"" << kWidth - 170 << "\" y=\"34\" width=\"12\" height=\"12\" fill=\"green\" "
      << "fill-opacity=\"0.35\" stroke=\"green\"/>\n"
      << "<text x=\"" << kWidth - 152 << "\" y=\"44\" font-family=\"sans-serif\" "
      << "font-size=\"11\">empirical</text>\n"
      << "<rect x=\"" << kWidth - 90 << "\" y=\"34\" width=\"12\" height=\"12\" fill=\"blue\" "
      << "fill-opacity=\"0.35\" stroke=\"blue\"/>\n"
      << "<text x=\"" << kWidth - 72 << "\" y=\"44\" font-family=\"sans-serif\" "
      << "font-size=\"11\">bound</text>\n";
    close_svg(s, path);
}

void write_barchart_svg(const std::string& path, const std::string& title,
                        const std::vector<BarGroup>& groups, const std::string& meta) {
    std::ostringstream s;
    open_svg(s, title, meta);
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    const double span = kWidth - kMarginLeft - kMarginRight;
    const double slot = span / std::max<std::size_t>(1, groups.size());

    std::vector<std::pair<double, std::string>> ticks;
    for (std::size_t i = 0; i < groups.size(); ++i)
        ticks.emplace_back(kMarginLeft + slot * (static_cast<double>(i) + 0.5),
                           groups[i].label);
    axes(s, 0.0, 1.0, ticks, "d_match");

    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double base = kMarginLeft + slot * static_cast<double>(i);
        const double bw = slot / (2.0 * static_cast<double>(g.bars.size()) + 1.0);
        for (std::size_t b = 0; b < g.bars.size(); ++b) {
            const auto& [theta, value] = g.bars[b];
            const double bx = base + bw * (1.0 + 2.0 * static_cast<double>(b));
            if (value > 0.0) {  // missing bar = no match
                const double h = value * (y0 - y1);
                s << "<rect x=\"" << bx << "\" y=\"" << y0 - h << "\" width=\"" << bw
                  << "\" height=\"" << h << "\" fill=\"steelblue\"/>\n";
            }
            s << "<text x=\"" << bx + bw / 2 << "\" y=\"" << y0 + 32
              << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">"
              << num(theta) << "</text>\n";
        }
    }
    close_svg(s, path);
}

}  // namespace cfadv
