#include "velplane/resample.hpp"

#include <algorithm>
#include <cmath>

#include "velplane/errors.hpp"

namespace velplane {

namespace {

int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Limited three-point slope at an end knot.
double end_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(m) != sign(d0)) {
        m = 0.0;
    } else if (sign(d0) != sign(d1) && std::abs(m) > 3.0 * std::abs(d0)) {
        m = 3.0 * d0;
    }
    return m;
}

}  // namespace

Pchip::Pchip(std::vector<Knot> knots) : knots_(std::move(knots)) {
    const std::size_t n = knots_.size();
    if (n < 2) throw ValidationError("interpolation needs at least 2 knots");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(knots_[i].time) || !std::isfinite(knots_[i].value)) {
            throw ValidationError("non-finite knot");
        }
        if (i > 0 && knots_[i].time <= knots_[i - 1].time) {
            throw ValidationError(knots_[i].time == knots_[i - 1].time ? "duplicate knot times"
                                                                        : "knot times must be increasing");
        }
    }

    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = knots_[i + 1].time - knots_[i].time;
        delta[i] = (knots_[i + 1].value - knots_[i].value) / h[i];
    }

    slopes_.assign(n, 0.0);
    if (n == 2) {
        slopes_[0] = slopes_[1] = delta[0];
        return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) continue;
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    slopes_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double Pchip::operator()(double t) const {
    if (!(t >= knots_.front().time && t <= knots_.back().time)) {
        throw ValidationError("extrapolation refused");
    }
    auto upper = std::upper_bound(knots_.begin(), knots_.end(), t,
                                  [](double value, const Knot& k) { return value < k.time; });
    if (upper == knots_.end()) return knots_.back().value;
    const auto i = static_cast<std::size_t>(upper - knots_.begin()) - 1;
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    if (t == a.time) return a.value;
    const double h = b.time - a.time;
    const double s = (t - a.time) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * a.value + h10 * h * slopes_[i] + h01 * b.value + h11 * h * slopes_[i + 1];
}

std::vector<double> Pchip::operator()(std::span<const double> times) const {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back((*this)(t));
    return out;
}

std::vector<double> pchip_interpolate(std::vector<Knot> knots, std::span<const double> query_times) {
    return Pchip(std::move(knots))(query_times);
}

std::vector<double> resample_trip(const Trip& trip, double sample_interval, std::size_t* clamped) {
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
        throw ValidationError("sample interval must be positive");
    }
    if (trip.observations.size() < 2) throw ValidationError("trip needs at least 2 observations");

    std::vector<Knot> knots;
    knots.reserve(trip.observations.size());
    for (const auto& obs : trip.observations) knots.push_back({obs.time, obs.velocity});
    const Pchip interpolant(std::move(knots));

    const double t0 = trip.observations.front().time;
    const double t1 = trip.observations.back().time;
    const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / sample_interval)) + 1;
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = std::min(t0 + static_cast<double>(i) * sample_interval, t1);
        double v = interpolant(t);
        if (v < 0.0) {
            v = 0.0;
            if (clamped != nullptr) ++*clamped;
        }
        values.push_back(v);
    }
    return values;
}

AssemblyOutcome assemble_series(std::span<const Trip> trips, double sample_interval, std::size_t min_length) {
    AssemblyOutcome outcome;
    auto& series = outcome.series;
    series.sample_interval = sample_interval;
    if (!trips.empty()) series.vehicle_id = trips.front().vehicle_id;

    for (const auto& trip : trips) {
        if (trip.observations.size() < 2) continue;
        if (series.trip_count > 0) series.junctions.push_back(series.values.size());
        const auto part = resample_trip(trip, sample_interval, &series.clamped);
        series.values.insert(series.values.end(), part.begin(), part.end());
        ++series.trip_count;
    }

    if (series.trip_count == 0) {
        outcome.reason = "no usable trips";
    } else if (std::all_of(series.values.begin(), series.values.end(), [](double v) { return v == 0.0; })) {
        outcome.reason = "stopped vehicle";
    } else if (series.values.size() < min_length) {
        outcome.reason = "series shorter than " + std::to_string(min_length) + " samples";
    } else {
        outcome.accepted = true;
    }
    return outcome;
}

}  // namespace velplane
