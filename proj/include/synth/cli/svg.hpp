#pragma once

#include <string>
#include <vector>

namespace synth::cli {

// One scatter glyph: an embedding-space position plus the comorbidity flags
// that decide its segmented-circle coloring.
struct GlyphPoint {
    double x = 0.0;
    double y = 0.0;
    std::vector<std::string> flags;  // comorbidity_flags() names; empty = obesity-only
    std::string label;               // tooltip text (patient id)
};

struct ArcSpec {
    std::string color;
    double start_deg = 0.0;  // 0 = 12 o'clock, increasing clockwise
    double sweep_deg = 0.0;
};

// Fixed flag palette (gray is the obesity-only fallback).
const char* flag_color(const std::string& flag);

// Equal arcs for a glyph: k flags split the circle into k equal segments
// starting at 12 o'clock; one flag (or none) is a full circle.
std::vector<ArcSpec> glyph_arcs(const std::vector<std::string>& flags);

// Deterministic SVG scatter plot: same points, same bytes. Coordinates are
// fit to the viewport with a fixed margin and written at fixed precision.
std::string render_scatter_svg(const std::vector<GlyphPoint>& points, int width = 640,
                               int height = 640);

}  // namespace synth::cli
