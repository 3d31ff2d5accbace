#pragma once

#include <string>
#include <vector>

namespace pcad {

// Minimal SVG emitter for the plots the CLI produces: signal traces with
// period-mark overlays, loss curves, and classified-signal figures with
// prediction/label bars in the upper and lower halves.
class SvgPlot {
  public:
    SvgPlot(int width, int height, std::string title = "");

    void add_series(const std::vector<double>& y, const std::string& color,
                    const std::string& label = "");
    void add_vlines(const std::vector<long>& xs, const std::string& color);
    // Horizontal bar in the top (band 0) or bottom (band 1) margin strip,
    // colored by class.
    void add_band_bar(int band, double x_begin, double x_end, int class_index);

    // x-axis domain; defaults to [0, longest series length).
    void set_x_range(double x_min, double x_max);

    std::string render() const;
    void save(const std::string& path) const;

  private:
    struct Series {
        std::vector<double> y;
        std::string color;
        std::string label;
    };
    struct Bar {
        int band;
        double x0, x1;
        int cls;
    };

    int width_, height_;
    std::string title_;
    std::vector<Series> series_;
    std::vector<std::pair<std::vector<long>, std::string>> vlines_;
    std::vector<Bar> bars_;
    double x_min_ = 0.0, x_max_ = -1.0;
};

// Color for class index i (fixed palette, cycled).
std::string class_color(int i);

// Two stacked panels in one file (simple vs cross-correlating detector
// comparisons).
void save_stacked(const std::string& path, const SvgPlot& top, const SvgPlot& bottom);

}  // namespace pcad
