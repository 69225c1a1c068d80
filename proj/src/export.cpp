#include "velplane/export.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "velplane/errors.hpp"

namespace velplane {

std::string format_exact(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw InputError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

template <typename Int>
Int parse_integer(const std::string& s, std::size_t line) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw InputError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

// Reads the header and returns data rows with the expected arity.
std::vector<std::vector<std::string>> read_table(std::istream& in, const std::string& header, std::size_t arity) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty file, expected header '" + header + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw InputError("unexpected header '" + line + "', expected '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv(line);
        if (fields.size() != arity) {
            throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(arity) + " fields");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

constexpr const char* kTripsHeader = "vehicle_id,trip_id,t,v";
constexpr const char* kPlaneHeader = "label,kind,H,C,D,tau,M";
constexpr const char* kBoundaryHeader = "kind,H,C";
constexpr const char* kPatternsHeader = "label,pattern,index,count,probability";

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_trips(std::ostream& out, std::span<const Trip> trips) {
    out << kTripsHeader << '\n';
    for (const auto& trip : trips) {
        const auto vehicle = quote(trip.vehicle_id);
        const auto id = quote(trip.trip_id);
        for (const auto& obs : trip.observations) {
            out << vehicle << ',' << id << ',' << format_exact(obs.time) << ',' << format_exact(obs.velocity) << '\n';
        }
    }
}

std::vector<Trip> read_trips(std::istream& in) {
    std::vector<Trip> trips;
    std::size_t line_no = 1;
    for (auto& row : read_table(in, kTripsHeader, 4)) {
        ++line_no;
        const Observation obs{parse_number(row[2], line_no), parse_number(row[3], line_no)};
        // Rows of one trip are contiguous.
        if (trips.empty() || trips.back().vehicle_id != row[0] || trips.back().trip_id != row[1]) {
            Trip trip;
            trip.vehicle_id = std::move(row[0]);
            trip.trip_id = std::move(row[1]);
            trips.push_back(std::move(trip));
        }
        trips.back().observations.push_back(obs);
    }
    return trips;
}

std::vector<Trip> read_trips(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return read_trips(in);
}

std::string to_string(PointKind kind) { return kind == PointKind::Vehicle ? "vehicle" : "noise"; }

PointKind point_kind_from_string(const std::string& text) {
    if (text == "vehicle") return PointKind::Vehicle;
    if (text == "noise") return PointKind::Noise;
    throw InputError("unknown point kind '" + text + "'");
}

PlaneRow make_row(const PlanePoint& point, PointKind kind) {
    const auto span = static_cast<std::uint64_t>(point.dimension - 1) * static_cast<std::uint64_t>(point.delay);
    return {point.label, kind, point.entropy, point.complexity, point.dimension, point.delay, point.windows + span};
}

void write_plane(std::ostream& out, std::span<const PlaneRow> rows) {
    for (const auto& row : rows) {
        if (!within_boundaries(row.entropy, row.complexity, factorial(row.dimension))) {
            throw ValidationError("plane point '" + row.label + "' lies outside the complexity boundaries");
        }
    }
    out << kPlaneHeader << '\n';
    for (const auto& row : rows) {
        out << quote(row.label) << ',' << to_string(row.kind) << ',' << format_number(row.entropy) << ','
            << format_number(row.complexity) << ',' << row.dimension << ',' << row.delay << ',' << row.length
            << '\n';
    }
}

std::vector<PlaneRow> read_plane(std::istream& in) {
    std::vector<PlaneRow> rows;
    std::size_t line_no = 1;
    for (auto& f : read_table(in, kPlaneHeader, 7)) {
        ++line_no;
        PlaneRow row;
        row.label = std::move(f[0]);
        row.kind = point_kind_from_string(f[1]);
        row.entropy = parse_number(f[2], line_no);
        row.complexity = parse_number(f[3], line_no);
        row.dimension = parse_integer<int>(f[4], line_no);
        row.delay = parse_integer<int>(f[5], line_no);
        row.length = parse_integer<std::uint64_t>(f[6], line_no);
        if (row.dimension < kMinDimension || row.dimension > kMaxDimension || row.delay < 1) {
            throw InputError("line " + std::to_string(line_no) + ": invalid D or tau");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_boundaries(std::ostream& out, const BoundaryCurve& lower, const BoundaryCurve& upper) {
    out << kBoundaryHeader << '\n';
    for (const auto& s : lower.samples) {
        out << "min," << format_number(s.entropy) << ',' << format_number(s.complexity) << '\n';
    }
    for (const auto& s : upper.samples) {
        out << "max," << format_number(s.entropy) << ',' << format_number(s.complexity) << '\n';
    }
}

std::pair<BoundaryCurve, BoundaryCurve> read_boundaries(std::istream& in) {
    BoundaryCurve lower{BoundaryKind::Minimum, 0, {}};
    BoundaryCurve upper{BoundaryKind::Maximum, 0, {}};
    std::size_t line_no = 1;
    for (const auto& f : read_table(in, kBoundaryHeader, 3)) {
        ++line_no;
        const BoundarySample sample{parse_number(f[1], line_no), parse_number(f[2], line_no)};
        if (f[0] == "min") {
            lower.samples.push_back(sample);
        } else if (f[0] == "max") {
            upper.samples.push_back(sample);
        } else {
            throw InputError("line " + std::to_string(line_no) + ": unknown curve kind '" + f[0] + "'");
        }
    }
    return {std::move(lower), std::move(upper)};
}

void write_patterns(std::ostream& out, std::span<const std::pair<std::string, OrdinalDistribution>> pdfs) {
    out << kPatternsHeader << '\n';
    for (const auto& [label, dist] : pdfs) {
        const auto quoted = quote(label);
        for (std::uint64_t i = 0; i < dist.cells(); ++i) {
            out << quoted << ',' << OrdinalPattern::from_index(dist.dimension(), i).label() << ',' << i << ','
                << dist.counts()[i] << ',' << format_number(dist.probability(i)) << '\n';
        }
    }
}

std::string report_json(const CleaningReport& r) {
    auto threshold = [](double v) -> nlohmann::json {
        if (std::isnan(v)) return nullptr;
        return v;
    };
    nlohmann::ordered_json j;
    j["rows"] = r.parse.rows;
    j["malformed_rows"] = r.parse.malformed_rows;
    j["missing_nodes"] = r.parse.missing_nodes;
    j["non_monotone_rows"] = r.parse.non_monotone_rows;
    j["parsed"] = r.parsed;
    j["discarded"] = {
        {"nan", r.nan},
        {"inf", r.inf},
        {"negative", r.negative},
        {"non_monotone", r.non_monotone},
        {"outlier_trip_observations", r.outlier_trip_observations},
        {"outlier_observations", r.outlier_observations},
        {"short_trip_observations", r.short_trip_observations},
        {"total", r.discarded()},
    };
    j["outlier_trips"] = r.outlier_trips;
    j["short_trips"] = r.short_trips;
    j["retained"] = r.retained;
    j["retained_trips"] = r.retained_trips;
    j["thresholds"] = {
        {"trip_mean_q1", threshold(r.trip_mean_q1)},
        {"trip_mean_q3", threshold(r.trip_mean_q3)},
        {"velocity_q3", threshold(r.velocity_q3)},
    };
    return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace velplane
