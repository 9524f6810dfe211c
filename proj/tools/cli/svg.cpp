#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <iterator>
#include <sstream>

namespace wgqed::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string header(const PlotLabels& labels) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!labels.metadata.empty()) os << "<metadata>" << escape(labels.metadata) << "</metadata>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(labels.title) << "</text>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\">" << escape(labels.x) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << kHeight / 2 << ")\">" << escape(labels.y) << "</text>\n";
    return os.str();
}

void axes(std::ostringstream& os, double x0, double x1, double y0, double y1, bool log_y) {
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = i / 4.0;
        const double px = kLeft + fx * pw;
        const double py = kTop + ph - fx * ph;
        const double vx = x0 + fx * (x1 - x0);
        double vy = y0 + fx * (y1 - y0);
        if (log_y) vy = std::pow(10.0, vy);
        os << "<text x=\"" << px << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
           << std::setprecision(4) << vx << "</text>\n";
        os << "<text x=\"" << kLeft - 4 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
           << std::setprecision(3) << vy << "</text>\n";
    }
}

}  // namespace

std::string line_plot_svg(const PlotLabels& labels, const std::vector<Series>& series, bool log_y) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    std::ostringstream os;
    os << header(labels);
    axes(os, x0, x1, y0, y1, log_y);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            os << kLeft + (s.x[i] - x0) / (x1 - x0) * pw << ","
               << kTop + ph - (ty(s.y[i]) - y0) / (y1 - y0) * ph << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << kTop + 16 + 16 * k
           << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string heatmap_svg(const PlotLabels& labels, const std::vector<double>& xs,
                        const std::vector<double>& ys, const std::vector<double>& values) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const double cw = pw / static_cast<double>(xs.size());
    const double ch = ph / static_cast<double>(ys.size());
    std::ostringstream os;
    os << header(labels);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double f = (values[i * ys.size() + j] - lo) / (hi - lo);
            // Dark blue to yellow.
            const int r = static_cast<int>(255 * std::clamp(1.6 * f - 0.3, 0.0, 1.0));
            const int g = static_cast<int>(230 * std::clamp(f, 0.0, 1.0));
            const int b = static_cast<int>(120 * (1.0 - f) + 20);
            os << "<rect x=\"" << kLeft + i * cw << "\" y=\"" << kTop + ph - (j + 1) * ch
               << "\" width=\"" << cw + 0.05 << "\" height=\"" << ch + 0.05 << "\" fill=\"rgb(" << r
               << "," << g << "," << b << ")\"/>\n";
        }
    }
    axes(os, xs.front(), xs.back(), ys.front(), ys.back(), false);
    os << "</svg>\n";
    return os.str();
}

}  // namespace wgqed::cli
