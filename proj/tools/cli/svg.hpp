#pragma once

#include <string>
#include <vector>

namespace wgqed::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotLabels {
    std::string title;
    std::string x;
    std::string y;
    std::string metadata;  // embedded verbatim (escaped) in <metadata>
};

std::string line_plot_svg(const PlotLabels& labels, const std::vector<Series>& series,
                          bool log_y = false);

// values is row-major with xs varying slowest: values[i * ys.size() + j] at (xs[i], ys[j]).
std::string heatmap_svg(const PlotLabels& labels, const std::vector<double>& xs,
                        const std::vector<double>& ys, const std::vector<double>& values);

}  // namespace wgqed::cli
