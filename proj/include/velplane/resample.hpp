#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "velplane/ingest.hpp"

namespace velplane {

struct Knot {
    double time;
    double value;
};

// Shape-preserving piecewise cubic Hermite interpolation (Fritsch-Carlson
// slopes: weighted harmonic mean inside, limited three-point formula at the
// ends). Knot times must be strictly increasing; queries outside
// [first, last] throw ValidationError "extrapolation refused".
class Pchip {
public:
    explicit Pchip(std::vector<Knot> knots);

    double operator()(double t) const;
    std::vector<double> operator()(std::span<const double> times) const;

    const std::vector<double>& slopes() const { return slopes_; }

private:
    std::vector<Knot> knots_;
    std::vector<double> slopes_;
};

std::vector<double> pchip_interpolate(std::vector<Knot> knots, std::span<const double> query_times);

// Samples at t0, t0 + Ts, ... <= t_last: floor((t_last - t0) / Ts) + 1 values.
// Negative interpolated values are clamped to 0 and counted in `clamped`.
std::vector<double> resample_trip(const Trip& trip, double sample_interval, std::size_t* clamped = nullptr);

struct VelocitySeries {
    std::string vehicle_id;
    double sample_interval = 0.0;
    std::vector<double> values;
    std::size_t trip_count = 0;
    std::vector<std::size_t> junctions;  // index where each trip after the first begins
    std::size_t clamped = 0;
};

struct AssemblyOutcome {
    bool accepted = false;
    std::string reason;  // why the vehicle was discarded
    VelocitySeries series;
};

// Resamples every trip on its own grid and concatenates the results. The
// vehicle is rejected when it has no usable trip, never moves, or the series
// is shorter than `min_length`.
AssemblyOutcome assemble_series(std::span<const Trip> trips, double sample_interval, std::size_t min_length);

}  // namespace velplane
