#include "synth/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "synth/core/error.hpp"
#include "synth/util/strings.hpp"

namespace synth::cli {

namespace {

constexpr double kMargin = 40.0;
constexpr double kGlyphRadius = 7.0;
constexpr const char* kObesityOnlyColor = "#7f7f7f";

std::string fmt(double v) { return util::format_double(v, 2); }

std::string escape_xml(const std::string& text) {
    std::string out;
    for (const char c : text) {
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

// Point on the glyph circle at `deg` degrees clockwise from 12 o'clock
// (SVG's y axis points down, so clockwise is the positive sweep direction).
void arc_point(double cx, double cy, double deg, double* x, double* y) {
    const double rad = (deg - 90.0) * std::numbers::pi / 180.0;
    *x = cx + kGlyphRadius * std::cos(rad);
    *y = cy + kGlyphRadius * std::sin(rad);
}

}  // namespace

const char* flag_color(const std::string& flag) {
    if (flag == "depression") return "#d62728";
    if (flag == "anxiety") return "#1f77b4";
    if (flag == "social_phobia") return "#2ca02c";
    if (flag == "binge_eating") return "#9467bd";
    throw DomainError("no glyph color for flag '" + flag + "'");
}

std::vector<ArcSpec> glyph_arcs(const std::vector<std::string>& flags) {
    if (flags.empty()) {
        return {{kObesityOnlyColor, 0.0, 360.0}};
    }
    const double sweep = 360.0 / static_cast<double>(flags.size());
    std::vector<ArcSpec> arcs;
    arcs.reserve(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) {
        arcs.push_back({flag_color(flags[i]), sweep * static_cast<double>(i), sweep});
    }
    return arcs;
}

std::string render_scatter_svg(const std::vector<GlyphPoint>& points, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw DomainError("SVG viewport must be positive");
    }

    double min_x = 0.0;
    double max_x = 1.0;
    double min_y = 0.0;
    double max_y = 1.0;
    if (!points.empty()) {
        min_x = max_x = points.front().x;
        min_y = max_y = points.front().y;
        for (const GlyphPoint& p : points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    const double span_x = max_x - min_x;
    const double span_y = max_y - min_y;
    const double usable_w = static_cast<double>(width) - 2.0 * kMargin;
    const double usable_h = static_cast<double>(height) - 2.0 * kMargin;
    auto map_x = [&](double x) {
        if (span_x == 0.0) return kMargin + usable_w / 2.0;
        return kMargin + (x - min_x) / span_x * usable_w;
    };
    auto map_y = [&](double y) {
        // Data y grows upward, pixel y grows downward.
        if (span_y == 0.0) return kMargin + usable_h / 2.0;
        return kMargin + (max_y - y) / span_y * usable_h;
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (const GlyphPoint& point : points) {
        const double cx = map_x(point.x);
        const double cy = map_y(point.y);
        svg += "  <g>\n";
        if (!point.label.empty()) {
            svg += "    <title>" + escape_xml(point.label) + "</title>\n";
        }
        const std::vector<ArcSpec> arcs = glyph_arcs(point.flags);
        if (arcs.size() == 1) {
            svg += "    <circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" +
                   fmt(kGlyphRadius) + "\" fill=\"" + arcs.front().color +
                   "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
        } else {
            for (const ArcSpec& arc : arcs) {
                double x1 = 0.0;
                double y1 = 0.0;
                double x2 = 0.0;
                double y2 = 0.0;
                arc_point(cx, cy, arc.start_deg, &x1, &y1);
                arc_point(cx, cy, arc.start_deg + arc.sweep_deg, &x2, &y2);
                const char* large = arc.sweep_deg > 180.0 ? "1" : "0";
                svg += "    <path d=\"M " + fmt(cx) + " " + fmt(cy) + " L " + fmt(x1) + " " +
                       fmt(y1) + " A " + fmt(kGlyphRadius) + " " + fmt(kGlyphRadius) + " 0 " +
                       large + " 1 " + fmt(x2) + " " + fmt(y2) + " Z\" fill=\"" + arc.color +
                       "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
            }
        }
        svg += "  </g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace synth::cli
