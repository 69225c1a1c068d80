#pragma once

/**
 * Dataset parsers and the velocity cleaning pipeline.
 *
 * Supported inputs (comma or whitespace separated text):
 *
 *   Mobile Century   unix_ms, lat, lon, speed_mph           one file per vehicle
 *   Borlange         mobility: vehicle, day, trip, start, end
 *                              (timestamps "YYYY-MM-DD HH:MM:SS", UTC)
 *                    nodes:    from_node to_node            row-aligned with mobility
 *                    nodepos:  node lon, lat
 *   Beijing          vehicle, utc_s, lat*1e5, lon*1e5, speed (speed ignored)
 *
 * Every observation is a (time, velocity) pair in seconds and m/s. Velocities
 * derived from an interval are stamped at the interval midpoint.
 */

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace velplane {

inline constexpr double kMetresPerSecondPerMph = 0.44704;

struct Observation {
    double time = 0.0;      // seconds since the Unix epoch
    double velocity = 0.0;  // m/s

    bool operator==(const Observation&) const = default;
};

struct Trip {
    std::string vehicle_id;
    std::string trip_id;
    int day = -1;          // Borlange only
    int trip_number = -1;  // Borlange only
    std::vector<Observation> observations;

    bool operator==(const Trip&) const = default;
};

enum class Strictness { Lenient, Strict };

// Row-level outcomes of parsing. Rows rejected here never become observations.
struct ParseStats {
    std::size_t rows = 0;
    std::size_t malformed_rows = 0;
    std::size_t missing_nodes = 0;
    std::size_t non_monotone_rows = 0;
    std::size_t observations = 0;

    ParseStats& operator+=(const ParseStats& other);
};

struct ParsedTrips {
    std::vector<Trip> trips;
    ParseStats stats;
};

// Lenient mode skips and counts malformed rows; strict mode throws InputError.
ParsedTrips parse_mobile_century(std::istream& in, const std::string& vehicle_id,
                                 Strictness strictness = Strictness::Lenient);
ParsedTrips parse_mobile_century(const std::filesystem::path& path, Strictness strictness = Strictness::Lenient);

ParsedTrips parse_borlange(std::istream& mobility, std::istream& nodes, std::istream& nodepos,
                           Strictness strictness = Strictness::Lenient);
ParsedTrips parse_borlange(const std::filesystem::path& mobility, const std::filesystem::path& nodes,
                           const std::filesystem::path& nodepos, Strictness strictness = Strictness::Lenient);

// Files are read in the given order; fixes of one vehicle must not go back
// in time across files either.
ParsedTrips parse_beijing(std::istream& in, Strictness strictness = Strictness::Lenient);
ParsedTrips parse_beijing(const std::vector<std::filesystem::path>& paths,
                          Strictness strictness = Strictness::Lenient);

// v = distance / dt; NaN when dt <= 0 (an instantaneous displacement).
double displacement_velocity(double distance, double dt);

// Seconds since the Unix epoch for "YYYY-MM-DD HH:MM:SS" read as UTC.
double parse_utc_timestamp(const std::string& text);

enum class CleaningPolicy {
    MobileCentury,  // nothing beyond NaN/Inf removal
    Borlange,       // drop trips whose mean is outside [Q1, Q3], then v > Q3
    Beijing,        // drop v > Q3 of pooled velocities
};

struct CleaningReport {
    ParseStats parse;

    std::size_t parsed = 0;  // observations entering the pipeline
    std::size_t nan = 0;
    std::size_t inf = 0;
    std::size_t negative = 0;
    std::size_t non_monotone = 0;
    std::size_t outlier_trips = 0;
    std::size_t outlier_trip_observations = 0;
    std::size_t outlier_observations = 0;
    std::size_t short_trips = 0;
    std::size_t short_trip_observations = 0;
    std::size_t retained = 0;
    std::size_t retained_trips = 0;

    // Thresholds actually used; NaN when the policy did not need them.
    double trip_mean_q1;
    double trip_mean_q3;
    double velocity_q3;

    CleaningReport();
    std::size_t discarded() const;
};

struct CleanedTrips {
    std::vector<Trip> trips;
    CleaningReport report;
};

// Throws InputError "all data discarded" when nothing survives.
CleanedTrips clean_pipeline(std::vector<Trip> trips, CleaningPolicy policy, const ParseStats& stats = {});

// Linear-interpolation sample quantile (the R / NumPy default, "type 7").
double quantile(std::vector<double> values, double q);

}  // namespace velplane
