#pragma once

#include <string>
#include <vector>

namespace cfadv {

// Minimal dependency-free SVG drawings. The quartile data in the JSON
// summaries is the machine contract; these are for eyeballing.

struct BoxGroup {
    std::string label;
    std::vector<double> empirical;
    std::vector<double> bound;
};

// Side-by-side empirical/bound boxplots per group: boxes at quartiles,
// whiskers at the furthest points within 1.5 IQR. `meta` is embedded as a
// comment node.
void write_boxplot_svg(const std::string& path, const std::string& title,
                       const std::vector<BoxGroup>& groups, const std::string& meta = "");

struct BarGroup {
    std::string label;                                 // e.g. "scfe vs deepfool"
    std::vector<std::pair<double, double>> bars;       // (theta, value in [0,1])
};

// d_match bars per (group, theta); zero-valued bars are omitted, only the
// tick label remains.
void write_barchart_svg(const std::string& path, const std::string& title,
                        const std::vector<BarGroup>& groups, const std::string& meta = "");

}  // namespace cfadv
