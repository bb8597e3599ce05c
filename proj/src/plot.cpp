#include <permfield/plot.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace permfield {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }

    void pad() {
        if (!(hi > lo)) {
            double centre = std::isfinite(lo) ? lo : 0.0;
            lo = centre - 0.5;
            hi = centre + 0.5;
        }
    }
};

struct Frame {
    Range x;
    Range y;

    double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const { return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom); }
};

void draw_axes(std::ostringstream& out, const Frame& f, const PlotSpec& spec) {
    double x0 = kLeft;
    double y0 = kHeight - kBottom;
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
        << num(y0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y0)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = f.x.lo + (f.x.hi - f.x.lo) * i / 5.0;
        double yv = f.y.lo + (f.y.hi - f.y.lo) * i / 5.0;
        out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(y0 + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
            << tick_label(xv) << "</text>\n";
        out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
            << tick_label(yv) << "</text>\n";
    }
    out << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 15)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    out << "<text x=\"15\" y=\"" << num((kTop + kHeight - kBottom) / 2) << "\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 15 " << num((kTop + kHeight - kBottom) / 2) << ")\">" << escape(spec.y_label)
        << "</text>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">" << escape(spec.title)
        << "</text>\n";
}

void draw_markers(std::ostringstream& out, const Frame& f, const PlotSpec& spec) {
    for (double m : spec.markers) {
        if (m < f.x.lo || m > f.x.hi) {
            continue;
        }
        out << "<line x1=\"" << num(f.px(m)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(f.px(m)) << "\" y2=\""
            << num(kHeight - kBottom) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
}

void draw_legend(std::ostringstream& out, const PlotSpec& spec) {
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        double y = kTop + 14.0 * static_cast<double>(i) + 6.0;
        out << "<rect x=\"" << num(kWidth - kRight - 150) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" fill=\""
            << kPalette[i % 6] << "\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight - 135) << "\" y=\"" << num(y + 1) << "\" font-size=\"11\">"
            << escape(spec.series[i].label) << "</text>\n";
    }
}

void draw_lines(std::ostringstream& out, const PlotSpec& spec) {
    Frame f;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("emit_plot: series x/y size mismatch");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.y[i])) {
                f.x.add(s.x[i]);
                f.y.add(s.y[i]);
            }
        }
    }
    for (double m : spec.markers) {
        f.x.add(m);
    }
    f.x.pad();
    f.y.pad();
    draw_axes(out, f, spec);
    draw_markers(out, f, spec);
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& s = spec.series[k];
        const char* colour = kPalette[k % 6];
        // -inf values break the polyline into separate runs.
        std::vector<std::string> runs;
        std::string current;
        std::size_t points_in_run = 0;
        auto flush = [&] {
            if (points_in_run > 1) {
                runs.push_back(current);
            } else if (points_in_run == 1) {
                runs.push_back(current + "!");
            }
            current.clear();
            points_in_run = 0;
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            current += num(f.px(s.x[i])) + "," + num(f.py(s.y[i])) + " ";
            ++points_in_run;
        }
        flush();
        for (const auto& run : runs) {
            if (run.back() == '!') {
                std::string point = run.substr(0, run.size() - 2);
                auto comma = point.find(',');
                out << "<circle cx=\"" << point.substr(0, comma) << "\" cy=\"" << point.substr(comma + 1)
                    << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
            } else {
                out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\""
                    << run.substr(0, run.size() - 1) << "\"/>\n";
            }
        }
    }
}

void draw_histogram(std::ostringstream& out, const PlotSpec& spec) {
    Frame f;
    for (const auto& s : spec.series) {
        for (double v : s.y) {
            f.x.add(v);
        }
    }
    f.x.pad();
    const std::size_t bins = std::max<std::size_t>(spec.bins, 1);
    std::vector<std::vector<double>> heights;
    double top = 0.0;
    for (const auto& s : spec.series) {
        std::vector<double> h(bins, 0.0);
        for (double v : s.y) {
            if (!std::isfinite(v)) {
                continue;
            }
            auto b = static_cast<std::size_t>((v - f.x.lo) / (f.x.hi - f.x.lo) * static_cast<double>(bins));
            h[std::min(b, bins - 1)] += 1.0;
        }
        top = std::max(top, *std::max_element(h.begin(), h.end()));
        heights.push_back(std::move(h));
    }
    f.y.lo = 0.0;
    f.y.hi = std::max(top, 1.0);
    draw_axes(out, f, spec);
    draw_markers(out, f, spec);
    double bin_width = (f.x.hi - f.x.lo) / static_cast<double>(bins);
    for (std::size_t k = 0; k < heights.size(); ++k) {
        for (std::size_t b = 0; b < bins; ++b) {
            if (heights[k][b] == 0.0) {
                continue;
            }
            double x0 = f.px(f.x.lo + bin_width * static_cast<double>(b));
            double x1 = f.px(f.x.lo + bin_width * static_cast<double>(b + 1));
            double y1 = f.py(heights[k][b]);
            out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
                << num(f.py(0.0) - y1) << "\" fill=\"" << kPalette[k % 6] << "\" fill-opacity=\"0.5\"/>\n";
        }
    }
}

} // namespace

std::string emit_plot(const PlotSpec& spec) {
    if (spec.series.empty()) {
        throw std::invalid_argument("emit_plot: no series");
    }
    bool any = std::any_of(spec.series.begin(), spec.series.end(), [](const PlotSeries& s) { return !s.y.empty(); });
    if (!any) {
        throw std::invalid_argument("emit_plot: all series are empty");
    }
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (spec.kind == PlotKind::line) {
        draw_lines(out, spec);
    } else {
        draw_histogram(out, spec);
    }
    draw_legend(out, spec);
    out << "</svg>\n";
    return out.str();
}

} // namespace permfield
