#pragma once

#include <string>
#include <vector>

#include "velplane/export.hpp"
#include "velplane/quantifiers.hpp"

namespace velplane {

// One plane export; each layer gets its own marker.
struct PlotLayer {
    std::string name;
    std::vector<PlaneRow> rows;
};

// Self-contained SVG of the complexity-entropy plane. Every point glyph
// carries class "point"; boundaries are <path class="boundary ...">; noise
// rows of a layer are joined, in row order, by a dashed <polyline
// class="ladder">. Throws ValidationError when there is nothing to draw.
std::string render_plane_svg(const std::vector<BoundaryCurve>& curves, const std::vector<PlotLayer>& layers);

}  // namespace velplane
