#include "pcad/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

const char* kPalette[] = {"#4363d8", "#e6194b", "#3cb44b", "#ffe119", "#911eb4",
                          "#f58231", "#46f0f0", "#f032e6", "#bcf60c", "#808000"};
constexpr int kPaletteSize = 10;
constexpr int kMarginLeft = 48;
constexpr int kMarginRight = 12;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 20;
constexpr int kBandHeight = 12;

}  // namespace

std::string class_color(int i) {
    return kPalette[((i % kPaletteSize) + kPaletteSize) % kPaletteSize];
}

SvgPlot::SvgPlot(int width, int height, std::string title)
    : width_(width), height_(height), title_(std::move(title)) {}

void SvgPlot::add_series(const std::vector<double>& y, const std::string& color,
                         const std::string& label) {
    series_.push_back(Series{y, color, label});
}

void SvgPlot::add_vlines(const std::vector<long>& xs, const std::string& color) {
    vlines_.emplace_back(xs, color);
}

void SvgPlot::add_band_bar(int band, double x_begin, double x_end, int class_index) {
    bars_.push_back(Bar{band, x_begin, x_end, class_index});
}

void SvgPlot::set_x_range(double x_min, double x_max) {
    x_min_ = x_min;
    x_max_ = x_max;
}

std::string SvgPlot::render() const {
    double x_max = x_max_;
    if (x_max <= x_min_) {
        size_t longest = 1;
        for (const auto& s : series_) longest = std::max(longest, s.y.size());
        x_max = static_cast<double>(longest);
    }

    double y_min = 0.0, y_max = 1.0;
    bool have = false;
    for (const auto& s : series_)
        for (double v : s.y) {
            if (!have) {
                y_min = y_max = v;
                have = true;
            }
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const double plot_w = width_ - kMarginLeft - kMarginRight;
    const double plot_top = kMarginTop + kBandHeight;
    const double plot_h = height_ - plot_top - kMarginBottom - kBandHeight;
    auto sx = [&](double x) {
        return kMarginLeft + plot_w * (x - x_min_) / (x_max - x_min_);
    };
    auto sy = [&](double y) { return plot_top + plot_h * (1.0 - (y - y_min) / (y_max - y_min)); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title_.empty())
        out << "<text x=\"" << width_ / 2 << "\" y=\"18\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"13\">" << title_ << "</text>\n";
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << plot_top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#888\"/>\n";

    for (const auto& [xs, color] : vlines_)
        for (long x : xs) {
            if (x < x_min_ || x > x_max) continue;
            out << "<line x1=\"" << sx(static_cast<double>(x)) << "\" y1=\"" << plot_top
                << "\" x2=\"" << sx(static_cast<double>(x)) << "\" y2=\"" << plot_top + plot_h
                << "\" stroke=\"" << color << "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
        }

    for (const auto& bar : bars_) {
        const double y = bar.band == 0 ? kMarginTop : plot_top + plot_h + 2;
        out << "<rect x=\"" << sx(bar.x0) << "\" y=\"" << y << "\" width=\""
            << std::max(1.0, sx(bar.x1) - sx(bar.x0)) << "\" height=\"" << kBandHeight - 2
            << "\" fill=\"" << class_color(bar.cls) << "\"/>\n";
    }

    for (const auto& s : series_) {
        if (s.y.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1\" points=\"";
        const size_t stride = std::max<size_t>(1, s.y.size() / 4000);
        for (size_t i = 0; i < s.y.size(); i += stride)
            out << sx(static_cast<double>(i)) << ',' << sy(s.y[i]) << ' ';
        out << "\"/>\n";
    }

    // Axis extremes.
    out << "<text x=\"4\" y=\"" << sy(y_max - pad) + 4 << "\" font-family=\"sans-serif\" "
        << "font-size=\"10\">" << y_max - pad << "</text>\n";
    out << "<text x=\"4\" y=\"" << sy(y_min + pad) << "\" font-family=\"sans-serif\" "
        << "font-size=\"10\">" << y_min + pad << "</text>\n";

    int legend_x = kMarginLeft + 6;
    for (const auto& s : series_) {
        if (s.label.empty()) continue;
        out << "<text x=\"" << legend_x << "\" y=\"" << plot_top + 12
            << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"" << s.color << "\">"
            << s.label << "</text>\n";
        legend_x += static_cast<int>(s.label.size()) * 7 + 16;
    }

    out << "</svg>\n";
    return out.str();
}

void SvgPlot::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write plot: " + path);
    out << render();
}

void save_stacked(const std::string& path, const SvgPlot& top, const SvgPlot& bottom) {
    const std::string a = top.render();
    const std::string b = bottom.render();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write plot: " + path);
    // Wrap the two renders in nested <svg> elements stacked vertically.
    auto size_of = [](const std::string& svg, const char* attr) {
        const size_t p = svg.find(attr);
        return std::stoi(svg.substr(svg.find('"', p) + 1));
    };
    const int w = std::max(size_of(a, "width="), size_of(b, "width="));
    const int ha = size_of(a, "height=");
    const int hb = size_of(b, "height=");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << ha + hb << "\">\n";
    out << "<svg y=\"0\">" << a << "</svg>\n";
    out << "<svg y=\"" << ha << "\">" << b << "</svg>\n";
    out << "</svg>\n";
}

}  // namespace pcad
