#include "velplane/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "velplane/errors.hpp"

namespace velplane {

bool valid_coordinate(GeoPoint p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && std::abs(p.lat) <= 90.0 && std::abs(p.lon) <= 180.0;
}

double geodesic_distance(GeoPoint a, GeoPoint b) {
    if (!valid_coordinate(a) || !valid_coordinate(b)) {
        throw ValidationError("invalid coordinates");
    }
    constexpr double kRad = std::numbers::pi / 180.0;
    const double phi1 = a.lat * kRad;
    const double phi2 = b.lat * kRad;
    const double dphi = (b.lat - a.lat) * kRad;
    const double dlambda = (b.lon - a.lon) * kRad;
    const double s1 = std::sin(0.5 * dphi);
    const double s2 = std::sin(0.5 * dlambda);
    const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
    return 2.0 * kEarthMeanRadius * std::asin(std::sqrt(h));
}

}  // namespace velplane
