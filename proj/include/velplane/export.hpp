#pragma once

/**
 * Text formats.
 *
 * trips.csv     vehicle_id,trip_id,t,v                 (shortest round-trip decimals)
 * plane.csv     label,kind,H,C,D,tau,M                 (12 significant digits)
 * boundary.csv  kind,H,C                               (kind is min or max)
 * patterns.csv  label,pattern,index,count,probability  (D! rows per label)
 * report.json   cleaning report
 *
 * All files carry a header row. Fields containing a comma or a quote are
 * double-quoted with embedded quotes doubled.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "velplane/ingest.hpp"
#include "velplane/ordinal.hpp"
#include "velplane/quantifiers.hpp"

namespace velplane {

// "%.12g"
std::string format_number(double value);

// Shortest decimal that reads back to the same double.
std::string format_exact(double value);

void write_trips(std::ostream& out, std::span<const Trip> trips);
std::vector<Trip> read_trips(std::istream& in);
std::vector<Trip> read_trips(const std::filesystem::path& path);

enum class PointKind { Vehicle, Noise };

std::string to_string(PointKind kind);
PointKind point_kind_from_string(const std::string& text);

struct PlaneRow {
    std::string label;
    PointKind kind = PointKind::Vehicle;
    double entropy = 0.0;
    double complexity = 0.0;
    int dimension = 0;
    int delay = 0;
    std::uint64_t length = 0;  // series length M

    bool operator==(const PlaneRow&) const = default;
};

PlaneRow make_row(const PlanePoint& point, PointKind kind);

// Throws ValidationError if a row falls outside the complexity boundaries
// for D! cells.
void write_plane(std::ostream& out, std::span<const PlaneRow> rows);
std::vector<PlaneRow> read_plane(std::istream& in);

void write_boundaries(std::ostream& out, const BoundaryCurve& lower, const BoundaryCurve& upper);
std::pair<BoundaryCurve, BoundaryCurve> read_boundaries(std::istream& in);

void write_patterns(std::ostream& out, std::span<const std::pair<std::string, OrdinalDistribution>> pdfs);

std::string report_json(const CleaningReport& report);

// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace velplane
