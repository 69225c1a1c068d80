#include "velplane/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "velplane/errors.hpp"
#include "velplane/geodesy.hpp"

namespace velplane {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBeijingCoordinateScale = 1e-5;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

std::vector<std::string_view> split_any(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    auto sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (i < line.size()) {
        while (i < line.size() && sep(line[i])) ++i;
        const auto start = i;
        while (i < line.size() && !sep(line[i])) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(std::string_view s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::optional<double> to_timestamp(std::string_view s) {
    try {
        return parse_utc_timestamp(std::string(s));
    } catch (const InputError&) {
        return std::nullopt;
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

// Records a bad row: throws in strict mode, counts it otherwise.
void reject_row(ParseStats& stats, Strictness strictness, const std::string& source, std::size_t line,
                const std::string& why) {
    if (strictness == Strictness::Strict) {
        throw InputError(source + ":" + std::to_string(line) + ": " + why);
    }
    ++stats.malformed_rows;
}

}  // namespace

ParseStats& ParseStats::operator+=(const ParseStats& other) {
    rows += other.rows;
    malformed_rows += other.malformed_rows;
    missing_nodes += other.missing_nodes;
    non_monotone_rows += other.non_monotone_rows;
    observations += other.observations;
    return *this;
}

double displacement_velocity(double distance, double dt) {
    return dt > 0.0 ? distance / dt : kNaN;
}

double parse_utc_timestamp(const std::string& text) {
    const auto s = trim(text);
    // YYYY-MM-DD HH:MM:SS
    if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':' ||
        s[16] != ':') {
        throw InputError("bad timestamp '" + text + "'");
    }
    auto field = [&](std::size_t pos, std::size_t len) {
        auto v = to_integer(s.substr(pos, len));
        if (!v) throw InputError("bad timestamp '" + text + "'");
        return *v;
    };
    using namespace std::chrono;
    const year_month_day date{year{static_cast<int>(field(0, 4))}, month{static_cast<unsigned>(field(5, 2))},
                              day{static_cast<unsigned>(field(8, 2))}};
    const auto hh = field(11, 2);
    const auto mm = field(14, 2);
    const auto ss = field(17, 2);
    if (!date.ok() || hh > 23 || mm > 59 || ss > 60) throw InputError("bad timestamp '" + text + "'");
    const auto since_epoch = sys_days{date}.time_since_epoch() + hours{hh} + minutes{mm} + seconds{ss};
    return static_cast<double>(duration_cast<seconds>(since_epoch).count());
}

ParsedTrips parse_mobile_century(std::istream& in, const std::string& vehicle_id, Strictness strictness) {
    ParsedTrips out;
    Trip trip;
    trip.vehicle_id = vehicle_id;
    trip.trip_id = "0";
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        ++out.stats.rows;
        const auto fields = split_commas(line);
        if (fields.size() != 4) {
            reject_row(out.stats, strictness, vehicle_id, line_no, "expected 4 fields");
            continue;
        }
        const auto ms = to_double(fields[0]);
        const auto lat = to_double(fields[1]);
        const auto lon = to_double(fields[2]);
        const auto mph = to_double(fields[3]);
        if (!ms || !lat || !lon || !mph || !std::isfinite(*ms) || !valid_coordinate({*lat, *lon})) {
            reject_row(out.stats, strictness, vehicle_id, line_no, "unparseable row");
            continue;
        }
        const double t = *ms / 1000.0;
        if (!trip.observations.empty() && t <= trip.observations.back().time) {
            ++out.stats.non_monotone_rows;
            continue;
        }
        trip.observations.push_back({t, *mph * kMetresPerSecondPerMph});
    }
    if (out.stats.rows == 0) throw InputError("empty Mobile Century file: " + vehicle_id);
    out.stats.observations = trip.observations.size();
    if (!trip.observations.empty()) out.trips.push_back(std::move(trip));
    return out;
}

ParsedTrips parse_mobile_century(const std::filesystem::path& path, Strictness strictness) {
    auto in = open_input(path);
    return parse_mobile_century(in, path.stem().string(), strictness);
}

ParsedTrips parse_borlange(std::istream& mobility, std::istream& nodes, std::istream& nodepos,
                           Strictness strictness) {
    ParsedTrips out;

    std::unordered_map<long long, GeoPoint> positions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(nodepos, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto f = split_any(line);
        const auto id = f.size() == 3 ? to_integer(f[0]) : std::nullopt;
        const auto lon = f.size() == 3 ? to_double(f[1]) : std::nullopt;
        const auto lat = f.size() == 3 ? to_double(f[2]) : std::nullopt;
        if (!id || !lon || !lat || !valid_coordinate({*lat, *lon})) {
            if (strictness == Strictness::Strict) {
                throw InputError("nodepos:" + std::to_string(line_no) + ": malformed row");
            }
            continue;
        }
        positions[*id] = GeoPoint{*lat, *lon};
    }

    auto next_row = [&line](std::istream& in, std::size_t& counter) {
        while (std::getline(in, line)) {
            ++counter;
            if (!is_blank(line)) return true;
        }
        return false;
    };

    struct Key {
        std::string vehicle;
        long long day;
        long long trip;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::size_t> trip_slot;

    std::size_t mobility_line = 0;
    std::size_t nodes_line = 0;
    while (true) {
        const bool have_mobility = next_row(mobility, mobility_line);
        const std::string mobility_row = have_mobility ? line : std::string{};
        const bool have_nodes = next_row(nodes, nodes_line);
        if (have_mobility != have_nodes) {
            throw InputError("mobility and nodes files have different row counts");
        }
        if (!have_mobility) break;
        ++out.stats.rows;

        const auto m = split_commas(mobility_row);
        const auto n = split_any(line);
        const auto vehicle = m.size() == 5 ? trim(m[0]) : std::string_view{};
        const auto day = m.size() == 5 ? to_integer(m[1]) : std::nullopt;
        const auto trip_no = m.size() == 5 ? to_integer(m[2]) : std::nullopt;
        const auto start = m.size() == 5 ? to_timestamp(m[3]) : std::nullopt;
        const auto end = m.size() == 5 ? to_timestamp(m[4]) : std::nullopt;
        const auto from = n.size() == 2 ? to_integer(n[0]) : std::nullopt;
        const auto to = n.size() == 2 ? to_integer(n[1]) : std::nullopt;
        if (vehicle.empty() || !day || !trip_no || !start || !end || !from || !to) {
            reject_row(out.stats, strictness, "mobility/nodes", mobility_line, "malformed row");
            continue;
        }
        const auto a = positions.find(*from);
        const auto b = positions.find(*to);
        if (a == positions.end() || b == positions.end()) {
            if (strictness == Strictness::Strict) {
                throw InputError("nodes:" + std::to_string(nodes_line) + ": node missing from nodepos");
            }
            ++out.stats.missing_nodes;
            continue;
        }

        Key key{std::string(vehicle), *day, *trip_no};
        auto [it, inserted] = trip_slot.try_emplace(key, out.trips.size());
        if (inserted) {
            Trip trip;
            trip.vehicle_id = key.vehicle;
            trip.day = static_cast<int>(*day);
            trip.trip_number = static_cast<int>(*trip_no);
            trip.trip_id = std::to_string(*day) + "-" + std::to_string(*trip_no);
            out.trips.push_back(std::move(trip));
        }
        const double distance = geodesic_distance(a->second, b->second);
        out.trips[it->second].observations.push_back(
            {0.5 * (*start + *end), displacement_velocity(distance, *end - *start)});
        ++out.stats.observations;
    }
    return out;
}

ParsedTrips parse_borlange(const std::filesystem::path& mobility, const std::filesystem::path& nodes,
                           const std::filesystem::path& nodepos, Strictness strictness) {
    auto m = open_input(mobility);
    auto n = open_input(nodes);
    auto p = open_input(nodepos);
    return parse_borlange(m, n, p, strictness);
}

namespace {

struct BeijingFix {
    double time;
    GeoPoint position;
};

struct BeijingVehicles {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<BeijingFix>> fixes;
};

void read_beijing_rows(std::istream& in, const std::string& source, Strictness strictness, BeijingVehicles& vehicles,
                       ParseStats& stats) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        ++stats.rows;
        const auto f = split_commas(line);
        if (f.size() != 5) {
            reject_row(stats, strictness, source, line_no, "expected 5 fields");
            continue;
        }
        const auto t = to_double(f[1]);
        const auto lat = to_double(f[2]);
        const auto lon = to_double(f[3]);
        if (f[0].empty() || !t || !lat || !lon || !std::isfinite(*t)) {
            reject_row(stats, strictness, source, line_no, "unparseable row");
            continue;
        }
        const GeoPoint position{*lat * kBeijingCoordinateScale, *lon * kBeijingCoordinateScale};
        if (!valid_coordinate(position)) {
            reject_row(stats, strictness, source, line_no, "coordinates out of range");
            continue;
        }
        const std::string id(f[0]);
        auto [it, inserted] = vehicles.fixes.try_emplace(id);
        if (inserted) vehicles.order.push_back(id);
        auto& fixes = it->second;
        if (!fixes.empty() && *t <= fixes.back().time) {
            ++stats.non_monotone_rows;
            continue;
        }
        fixes.push_back({*t, position});
    }
}

ParsedTrips beijing_trips(const BeijingVehicles& vehicles, ParseStats stats) {
    ParsedTrips out;
    out.stats = stats;
    for (const auto& id : vehicles.order) {
        const auto& fixes = vehicles.fixes.at(id);
        int trip_count = 0;
        Trip current;
        auto close = [&] {
            if (!current.observations.empty()) {
                out.stats.observations += current.observations.size();
                out.trips.push_back(std::move(current));
            }
            current = Trip{};
        };
        for (std::size_t i = 1; i < fixes.size(); ++i) {
            const double dt = fixes[i].time - fixes[i - 1].time;
            const double v = displacement_velocity(geodesic_distance(fixes[i - 1].position, fixes[i].position), dt);
            if (v == 0.0) {
                close();
                continue;
            }
            if (current.observations.empty()) {
                current.vehicle_id = id;
                current.trip_id = std::to_string(trip_count++);
            }
            current.observations.push_back({0.5 * (fixes[i].time + fixes[i - 1].time), v});
        }
        close();
    }
    return out;
}

}  // namespace

ParsedTrips parse_beijing(std::istream& in, Strictness strictness) {
    BeijingVehicles vehicles;
    ParseStats stats;
    read_beijing_rows(in, "beijing", strictness, vehicles, stats);
    return beijing_trips(vehicles, stats);
}

ParsedTrips parse_beijing(const std::vector<std::filesystem::path>& paths, Strictness strictness) {
    BeijingVehicles vehicles;
    ParseStats stats;
    for (const auto& path : paths) {
        auto in = open_input(path);
        read_beijing_rows(in, path.string(), strictness, vehicles, stats);
    }
    return beijing_trips(vehicles, stats);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw ValidationError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

CleaningReport::CleaningReport() : trip_mean_q1(kNaN), trip_mean_q3(kNaN), velocity_q3(kNaN) {}

std::size_t CleaningReport::discarded() const {
    return nan + inf + negative + non_monotone + outlier_trip_observations + outlier_observations +
           short_trip_observations;
}

CleanedTrips clean_pipeline(std::vector<Trip> trips, CleaningPolicy policy, const ParseStats& stats) {
    CleanedTrips out;
    auto& report = out.report;
    report.parse = stats;
    for (const auto& trip : trips) report.parsed += trip.observations.size();

    // Phase two: invalid values, then enforce strictly increasing time.
    for (auto& trip : trips) {
        std::vector<Observation> kept;
        kept.reserve(trip.observations.size());
        for (const auto& obs : trip.observations) {
            if (std::isnan(obs.velocity)) {
                ++report.nan;
            } else if (std::isinf(obs.velocity)) {
                ++report.inf;
            } else if (obs.velocity < 0.0) {
                ++report.negative;
            } else if (!kept.empty() && obs.time <= kept.back().time) {
                ++report.non_monotone;
            } else {
                kept.push_back(obs);
            }
        }
        trip.observations = std::move(kept);
    }

    // Phase three: outliers.
    auto drop_above_pooled_q3 = [&] {
        std::vector<double> pooled;
        for (const auto& trip : trips) {
            for (const auto& obs : trip.observations) pooled.push_back(obs.velocity);
        }
        if (pooled.empty()) return;
        report.velocity_q3 = quantile(std::move(pooled), 0.75);
        for (auto& trip : trips) {
            auto& obs = trip.observations;
            const auto before = obs.size();
            std::erase_if(obs, [&](const Observation& o) { return o.velocity > report.velocity_q3; });
            report.outlier_observations += before - obs.size();
        }
    };

    switch (policy) {
        case CleaningPolicy::MobileCentury:
            break;
        case CleaningPolicy::Borlange: {
            std::vector<double> means;
            for (const auto& trip : trips) {
                if (trip.observations.empty()) continue;
                double sum = 0.0;
                for (const auto& obs : trip.observations) sum += obs.velocity;
                means.push_back(sum / static_cast<double>(trip.observations.size()));
            }
            if (!means.empty()) {
                report.trip_mean_q1 = quantile(means, 0.25);
                report.trip_mean_q3 = quantile(means, 0.75);
                std::size_t next_mean = 0;
                for (auto& trip : trips) {
                    if (trip.observations.empty()) continue;
                    const double mean = means[next_mean++];
                    if (mean < report.trip_mean_q1 || mean > report.trip_mean_q3) {
                        ++report.outlier_trips;
                        report.outlier_trip_observations += trip.observations.size();
                        trip.observations.clear();
                    }
                }
            }
            drop_above_pooled_q3();
            break;
        }
        case CleaningPolicy::Beijing:
            drop_above_pooled_q3();
            break;
    }

    // A velocity series needs at least one interval per trip.
    for (auto& trip : trips) {
        if (trip.observations.size() >= 2) {
            report.retained += trip.observations.size();
            out.trips.push_back(std::move(trip));
        } else if (!trip.observations.empty()) {
            ++report.short_trips;
            report.short_trip_observations += trip.observations.size();
        }
    }
    report.retained_trips = out.trips.size();
    if (out.trips.empty()) throw InputError("all data discarded");
    return out;
}

}  // namespace velplane
