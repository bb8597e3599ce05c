#pragma once

#include <string>
#include <vector>

namespace permfield {

enum class PlotKind { line, histogram };

struct PlotSeries {
    std::string label;
    std::vector<double> x; // ignored for histograms
    std::vector<double> y; // histogram: raw sample values
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    PlotKind kind = PlotKind::line;
    std::vector<PlotSeries> series;
    /// Vertical dashed reference lines at these x positions.
    std::vector<double> markers;
    std::size_t bins = 40;
};

/// Self-contained SVG document. Byte output depends only on the spec.
/// Throws std::invalid_argument when there is no series or every series is
/// empty.
std::string emit_plot(const PlotSpec& spec);

} // namespace permfield
