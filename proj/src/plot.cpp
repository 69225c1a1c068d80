#include "velplane/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "velplane/errors.hpp"

namespace velplane {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
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

struct Frame {
    double c_max;
    double x(double h) const { return kLeft + h * (kWidth - kLeft - kRight); }
    double y(double c) const { return kHeight - kBottom - (c / c_max) * (kHeight - kTop - kBottom); }
};

// Vehicle markers cycle through circle, cross, and x ("times").
void vehicle_glyph(std::ostringstream& svg, int layer, double x, double y, const char* colour, const std::string& title) {
    const std::string t = "<title>" + escape(title) + "</title>";
    switch (layer % 3) {
        case 0:
            svg << "<circle class=\"point vehicle\" cx=\"" << num(x) << "\" cy=\"" << num(y)
                << "\" r=\"3\" fill=\"none\" stroke=\"" << colour << "\">" << t << "</circle>\n";
            break;
        case 1:
            svg << "<path class=\"point vehicle\" d=\"M" << num(x - 4) << ' ' << num(y) << " H" << num(x + 4) << " M"
                << num(x) << ' ' << num(y - 4) << " V" << num(y + 4) << "\" stroke=\"" << colour << "\">" << t
                << "</path>\n";
            break;
        default:
            svg << "<path class=\"point vehicle\" d=\"M" << num(x - 3) << ' ' << num(y - 3) << " L" << num(x + 3) << ' '
                << num(y + 3) << " M" << num(x - 3) << ' ' << num(y + 3) << " L" << num(x + 3) << ' ' << num(y - 3)
                << "\" stroke=\"" << colour << "\">" << t << "</path>\n";
    }
}

}  // namespace

std::string render_plane_svg(const std::vector<BoundaryCurve>& curves, const std::vector<PlotLayer>& layers) {
    const bool any_rows = std::any_of(layers.begin(), layers.end(), [](const PlotLayer& l) { return !l.rows.empty(); });
    const bool any_curve =
        std::any_of(curves.begin(), curves.end(), [](const BoundaryCurve& c) { return !c.samples.empty(); });
    if (!any_rows && !any_curve) throw ValidationError("nothing to plot: export is empty");

    double c_max = 0.0;
    for (const auto& curve : curves) {
        for (const auto& s : curve.samples) c_max = std::max(c_max, s.complexity);
    }
    for (const auto& layer : layers) {
        for (const auto& row : layer.rows) c_max = std::max(c_max, row.complexity);
    }
    const Frame frame{c_max > 0.0 ? 1.05 * c_max : 1.0};

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes and ticks.
    svg << "<g class=\"axes\" stroke=\"black\">\n"
        << "<line x1=\"" << num(frame.x(0)) << "\" y1=\"" << num(frame.y(0)) << "\" x2=\"" << num(frame.x(1))
        << "\" y2=\"" << num(frame.y(0)) << "\"/>\n"
        << "<line x1=\"" << num(frame.x(0)) << "\" y1=\"" << num(frame.y(0)) << "\" x2=\"" << num(frame.x(0))
        << "\" y2=\"" << num(frame.y(frame.c_max)) << "\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double h = i / 5.0;
        svg << "<line x1=\"" << num(frame.x(h)) << "\" y1=\"" << num(frame.y(0)) << "\" x2=\"" << num(frame.x(h))
            << "\" y2=\"" << num(frame.y(0) + 4) << "\"/>\n";
        const double c = frame.c_max * i / 5.0;
        svg << "<line x1=\"" << num(frame.x(0) - 4) << "\" y1=\"" << num(frame.y(c)) << "\" x2=\"" << num(frame.x(0))
            << "\" y2=\"" << num(frame.y(c)) << "\"/>\n";
    }
    svg << "</g>\n<g class=\"tick-labels\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double h = i / 5.0;
        const double c = frame.c_max * i / 5.0;
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.1f", h);
        svg << "<text x=\"" << num(frame.x(h)) << "\" y=\"" << num(frame.y(0) + 18)
            << "\" text-anchor=\"middle\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.2f", c);
        svg << "<text x=\"" << num(frame.x(0) - 8) << "\" y=\"" << num(frame.y(c) + 4) << "\" text-anchor=\"end\">"
            << buf << "</text>\n";
    }
    svg << "<text x=\"" << num(frame.x(0.5)) << "\" y=\"" << num(kHeight - 10)
        << "\" text-anchor=\"middle\">Permutation entropy H</text>\n"
        << "<text transform=\"translate(16 " << num(frame.y(frame.c_max / 2)) << ") rotate(-90)\" "
        << "text-anchor=\"middle\">Statistical complexity C</text>\n</g>\n";

    for (const auto& curve : curves) {
        if (curve.samples.empty()) continue;
        svg << "<path class=\"boundary " << (curve.kind == BoundaryKind::Minimum ? "boundary-min" : "boundary-max")
            << "\" fill=\"none\" stroke=\"gray\" d=\"";
        for (std::size_t i = 0; i < curve.samples.size(); ++i) {
            svg << (i == 0 ? 'M' : 'L') << num(frame.x(curve.samples[i].entropy)) << ' '
                << num(frame.y(curve.samples[i].complexity)) << ' ';
        }
        svg << "\"/>\n";
    }

    for (std::size_t li = 0; li < layers.size(); ++li) {
        const auto& layer = layers[li];
        const char* colour = kColours[li % std::size(kColours)];
        svg << "<g class=\"layer\" data-name=\"" << escape(layer.name) << "\">\n";

        std::vector<const PlaneRow*> ladder;
        for (const auto& row : layer.rows) {
            if (row.kind == PointKind::Noise) ladder.push_back(&row);
        }
        if (ladder.size() >= 2) {
            svg << "<polyline class=\"ladder\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\" points=\"";
            for (std::size_t i = 0; i < ladder.size(); ++i) {
                svg << (i ? " " : "") << num(frame.x(ladder[i]->entropy)) << ',' << num(frame.y(ladder[i]->complexity));
            }
            svg << "\"/>\n";
        }

        for (const auto& row : layer.rows) {
            const double x = frame.x(row.entropy);
            const double y = frame.y(row.complexity);
            if (row.kind == PointKind::Noise) {
                svg << "<polygon class=\"point noise\" points=\"" << num(x) << ',' << num(y - 4) << ' ' << num(x - 4)
                    << ',' << num(y + 3) << ' ' << num(x + 4) << ',' << num(y + 3) << "\" fill=\"black\"><title>"
                    << escape(row.label) << "</title></polygon>\n";
            } else {
                vehicle_glyph(svg, static_cast<int>(li), x, y, colour, row.label);
            }
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace velplane
