#pragma once

namespace velplane {

// Mean Earth radius (IUGG), metres.
inline constexpr double kEarthMeanRadius = 6371008.8;

struct GeoPoint {
    double lat = 0.0;  // degrees
    double lon = 0.0;  // degrees
};

// Great-circle (haversine) distance in metres. Throws ValidationError for
// non-finite coordinates, |lat| > 90 or |lon| > 180.
double geodesic_distance(GeoPoint a, GeoPoint b);

bool valid_coordinate(GeoPoint p);

}  // namespace velplane
