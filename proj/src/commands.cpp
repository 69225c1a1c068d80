#include "velplane/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "velplane/errors.hpp"
#include "velplane/noisegen.hpp"
#include "velplane/ordinal.hpp"
#include "velplane/plot.hpp"
#include "velplane/quantifiers.hpp"

namespace velplane {

namespace fs = std::filesystem;

namespace {

// Regular files of a directory in name order, or the path itself.
std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<fs::path> entries;
            for (const auto& entry : fs::directory_iterator(input)) {
                if (entry.is_regular_file()) entries.push_back(entry.path());
            }
            std::sort(entries.begin(), entries.end());
            files.insert(files.end(), entries.begin(), entries.end());
        } else if (fs::exists(input)) {
            files.push_back(input);
        } else {
            throw InputError("input not found: " + input.string());
        }
    }
    if (files.empty()) throw InputError("no input files");
    return files;
}

struct BorlangeFiles {
    fs::path mobility;
    fs::path nodes;
    fs::path nodepos;
};

BorlangeFiles borlange_files(const std::vector<fs::path>& inputs) {
    if (inputs.size() == 3) return {inputs[0], inputs[1], inputs[2]};
    if (inputs.size() == 1 && fs::is_directory(inputs[0])) {
        BorlangeFiles files;
        for (const auto& entry : fs::directory_iterator(inputs[0])) {
            const auto stem = entry.path().stem().string();
            if (stem == "mobility") files.mobility = entry.path();
            if (stem == "nodes") files.nodes = entry.path();
            if (stem == "nodepos") files.nodepos = entry.path();
        }
        if (files.mobility.empty() || files.nodes.empty() || files.nodepos.empty()) {
            throw InputError("Borlange directory must contain mobility, nodes and nodepos files");
        }
        return files;
    }
    throw InputError("Borlange input needs a directory or the mobility, nodes and nodepos files");
}

bool selected(const RunConfig& config, const std::string& vehicle) {
    return config.vehicles.empty() ||
           std::find(config.vehicles.begin(), config.vehicles.end(), vehicle) != config.vehicles.end();
}

void keep_selected(const RunConfig& config, std::vector<Trip>& trips) {
    std::erase_if(trips, [&](const Trip& t) { return !selected(config, t.vehicle_id); });
}

std::string series_table(const std::vector<VelocitySeries>& series) {
    std::ostringstream out;
    out << "vehicle_id,sample_interval,length,trips,clamped,junctions\n";
    for (const auto& s : series) {
        std::string junctions;
        for (std::size_t i = 0; i < s.junctions.size(); ++i) {
            junctions += (i ? ";" : "") + std::to_string(s.junctions[i]);
        }
        std::string vehicle = s.vehicle_id;
        if (vehicle.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char c : vehicle) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
            vehicle = q + "\"";
        }
        out << vehicle << ',' << format_number(s.sample_interval) << ',' << s.values.size() << ',' << s.trip_count
            << ',' << s.clamped << ',' << junctions << '\n';
    }
    return out.str();
}

std::string boundary_table(int dimension, int resolution) {
    const auto [lower, upper] = boundary_curves(factorial(dimension), resolution);
    std::ostringstream out;
    write_boundaries(out, lower, upper);
    return out.str();
}

AnalyzeSummary analyze_trips(const RunConfig& config, std::vector<Trip> trips, double sample_interval,
                             const fs::path& output, std::ostream& log) {
    keep_selected(config, trips);
    AnalyzeSummary summary;
    std::vector<std::pair<std::string, OrdinalDistribution>> pdfs;
    const auto min_length = static_cast<std::size_t>(config.dimension - 1) * static_cast<std::size_t>(config.delay) + 1;

    for (auto& vehicle_trips : group_by_vehicle(std::move(trips))) {
        auto outcome = assemble_series(vehicle_trips, sample_interval, min_length);
        const auto& id = outcome.series.vehicle_id;
        if (!outcome.accepted) {
            log << "warning: skipping vehicle " << id << ": " << outcome.reason << '\n';
            summary.skipped.push_back(id);
            continue;
        }
        if (outcome.series.clamped > 0) {
            log << "note: vehicle " << id << ": " << outcome.series.clamped
                << " negative interpolated velocities clamped to 0\n";
        }
        auto dist = ordinal_distribution(outcome.series.values, config.dimension, config.delay);
        if (!dist.sampling_adequate()) {
            log << "warning: vehicle " << id << ": " << dist.total_windows() << " windows for "
                << dist.cells() << " patterns; estimates are unreliable below 100*D!\n";
        }
        summary.rows.push_back(make_row(plane_point(dist, id), PointKind::Vehicle));
        pdfs.emplace_back(id, std::move(dist));
        summary.series.push_back(std::move(outcome.series));
    }
    if (summary.rows.empty()) throw InputError("no vehicle produced a usable velocity series");

    std::ostringstream plane;
    write_plane(plane, summary.rows);
    std::ostringstream patterns;
    write_patterns(patterns, pdfs);
    write_file(output / "plane.csv", plane.str());
    write_file(output / "boundary.csv", boundary_table(config.dimension, config.boundary_resolution));
    write_file(output / "patterns.csv", patterns.str());
    write_file(output / "series.csv", series_table(summary.series));
    log << "analyzed " << summary.rows.size() << " vehicles at T_S=" << format_number(sample_interval) << " s ("
        << summary.skipped.size() << " skipped)\n";
    return summary;
}

std::vector<Trip> read_analyze_input(const RunConfig& config) {
    if (config.inputs.size() != 1) throw InputError("expected exactly one trips file as input");
    return read_trips(config.inputs[0]);
}

}  // namespace

Dataset dataset_from_string(const std::string& text) {
    if (text == "mobile-century") return Dataset::MobileCentury;
    if (text == "borlange") return Dataset::Borlange;
    if (text == "beijing") return Dataset::Beijing;
    if (text == "canonical") return Dataset::Canonical;
    throw ValidationError("unknown dataset '" + text + "'");
}

std::string to_string(Dataset dataset) {
    switch (dataset) {
        case Dataset::MobileCentury: return "mobile-century";
        case Dataset::Borlange: return "borlange";
        case Dataset::Beijing: return "beijing";
        case Dataset::Canonical: return "canonical";
    }
    return "canonical";
}

double default_sample_interval(Dataset dataset) {
    switch (dataset) {
        case Dataset::MobileCentury: return 3.0;
        case Dataset::Borlange: return 14.0;
        case Dataset::Beijing: return 60.0;
        case Dataset::Canonical: return 1.0;
    }
    return 1.0;
}

CleaningPolicy default_policy(Dataset dataset) {
    switch (dataset) {
        case Dataset::Borlange: return CleaningPolicy::Borlange;
        case Dataset::Beijing: return CleaningPolicy::Beijing;
        default: return CleaningPolicy::MobileCentury;
    }
}

void RunConfig::validate() const {
    if (dimension < kMinDimension || dimension > kMaxDimension) {
        throw ValidationError("--dimension must be in [2, 9]");
    }
    if (delay < 1) throw ValidationError("--delay must be >= 1");
    auto check_interval = [](double ts) {
        if (!(ts > 0.0) || !std::isfinite(ts)) throw ValidationError("sample interval must be positive");
    };
    if (sample_interval) check_interval(*sample_interval);
    for (double ts : sample_intervals) check_interval(ts);
    if (noise_length < kMinNoiseLength) throw ValidationError("noise length must be >= 1024");
    for (double k : noise_exponents) {
        if (!(k >= 0.0 && k <= kMaxNoiseExponent)) throw ValidationError("noise exponents must lie in [0, 4]");
    }
    if (boundary_resolution < 64) throw ValidationError("boundary resolution must be >= 64");
}

double RunConfig::effective_sample_interval() const {
    return sample_interval.value_or(default_sample_interval(dataset));
}

std::vector<std::vector<Trip>> group_by_vehicle(std::vector<Trip> trips) {
    std::vector<std::vector<Trip>> groups;
    std::unordered_map<std::string, std::size_t> slot;
    for (auto& trip : trips) {
        auto [it, inserted] = slot.try_emplace(trip.vehicle_id, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(std::move(trip));
    }
    for (auto& group : groups) {
        std::stable_sort(group.begin(), group.end(), [](const Trip& a, const Trip& b) {
            if (a.observations.empty() || b.observations.empty()) return !a.observations.empty() && b.observations.empty();
            return a.observations.front().time < b.observations.front().time;
        });
    }
    return groups;
}

IngestSummary cmd_ingest(const RunConfig& config, std::ostream& log) {
    config.validate();
    ParsedTrips parsed;
    switch (config.dataset) {
        case Dataset::MobileCentury:
            for (const auto& file : expand_inputs(config.inputs)) {
                auto one = parse_mobile_century(file, config.strictness);
                parsed.stats += one.stats;
                for (auto& trip : one.trips) parsed.trips.push_back(std::move(trip));
            }
            break;
        case Dataset::Borlange: {
            const auto files = borlange_files(config.inputs);
            parsed = parse_borlange(files.mobility, files.nodes, files.nodepos, config.strictness);
            break;
        }
        case Dataset::Beijing:
            parsed = parse_beijing(expand_inputs(config.inputs), config.strictness);
            break;
        case Dataset::Canonical:
            for (const auto& file : expand_inputs(config.inputs)) {
                for (auto& trip : read_trips(file)) {
                    ++parsed.stats.rows;
                    parsed.stats.observations += trip.observations.size();
                    parsed.trips.push_back(std::move(trip));
                }
            }
            break;
    }
    keep_selected(config, parsed.trips);
    if (parsed.trips.empty()) throw InputError("no trips parsed from input");

    auto cleaned = clean_pipeline(std::move(parsed.trips), config.policy.value_or(default_policy(config.dataset)),
                                  parsed.stats);

    std::ostringstream trips;
    write_trips(trips, cleaned.trips);
    write_file(config.output / "trips.csv", trips.str());
    write_file(config.output / "report.json", report_json(cleaned.report));

    IngestSummary summary;
    summary.trips = cleaned.trips.size();
    summary.vehicles = group_by_vehicle(cleaned.trips).size();
    summary.report = cleaned.report;
    const auto& r = cleaned.report;
    if (r.parse.malformed_rows > 0) log << "warning: skipped " << r.parse.malformed_rows << " malformed rows\n";
    if (r.parse.missing_nodes > 0) log << "warning: " << r.parse.missing_nodes << " rows reference unknown nodes\n";
    log << "ingested " << summary.vehicles << " vehicles, " << summary.trips << " trips; " << r.retained << " of "
        << r.parsed << " observations retained\n";
    return summary;
}

AnalyzeSummary cmd_analyze(const RunConfig& config, std::ostream& log) {
    config.validate();
    return analyze_trips(config, read_analyze_input(config), config.effective_sample_interval(), config.output, log);
}

std::vector<PlaneRow> cmd_noise(const RunConfig& config, std::ostream& log) {
    config.validate();
    const auto points = reference_ladder(config.noise_exponents, config.noise_length, config.seed, config.dimension,
                                         config.delay);
    std::vector<PlaneRow> rows;
    rows.reserve(points.size());
    for (const auto& p : points) rows.push_back(make_row(p, PointKind::Noise));

    std::ostringstream plane;
    write_plane(plane, rows);
    write_file(config.output / "plane.csv", plane.str());
    write_file(config.output / "boundary.csv", boundary_table(config.dimension, config.boundary_resolution));
    for (double k : config.noise_exponents) {
        const auto series = generate_fk_noise({k, config.noise_length, config.seed});
        std::string text = "x\n";
        for (double v : series) text += format_exact(v) + '\n';
        write_file(config.output / ("noise_k" + format_number(k) + ".csv"), text);
    }
    log << "generated " << rows.size() << " noise references (seed " << config.seed << ", length "
        << config.noise_length << ")\n";
    return rows;
}

std::vector<AnalyzeSummary> cmd_sweep(const RunConfig& config, std::ostream& log) {
    config.validate();
    auto intervals = config.sample_intervals;
    if (intervals.empty()) intervals.push_back(config.effective_sample_interval());
    const auto trips = read_analyze_input(config);
    std::vector<AnalyzeSummary> out;
    for (double ts : intervals) {
        out.push_back(analyze_trips(config, trips, ts, config.output / ("ts_" + format_number(ts)), log));
    }
    return out;
}

fs::path cmd_plot(const RunConfig& config, std::ostream& log) {
    if (config.inputs.empty()) throw InputError("plot needs at least one export");
    std::vector<BoundaryCurve> curves;
    std::vector<PlotLayer> layers;

    auto read_plane_file = [&](const fs::path& file, const std::string& name) {
        std::ifstream in(file);
        if (!in) throw InputError("cannot open " + file.string());
        layers.push_back({name, read_plane(in)});
    };
    auto read_boundary_file = [&](const fs::path& file) {
        if (!curves.empty()) return;
        std::ifstream in(file);
        if (!in) throw InputError("cannot open " + file.string());
        auto [lower, upper] = read_boundaries(in);
        curves.push_back(std::move(lower));
        curves.push_back(std::move(upper));
    };

    for (const auto& input : config.inputs) {
        if (fs::is_directory(input)) {
            const bool has_plane = fs::exists(input / "plane.csv");
            const bool has_boundary = fs::exists(input / "boundary.csv");
            if (!has_plane && !has_boundary) throw InputError("no plane.csv or boundary.csv in " + input.string());
            if (has_plane) read_plane_file(input / "plane.csv", input.filename().string());
            if (has_boundary) read_boundary_file(input / "boundary.csv");
        } else if (input.filename() == "boundary.csv") {
            read_boundary_file(input);
        } else {
            read_plane_file(input, input.stem().string());
        }
    }

    const auto svg = render_plane_svg(curves, layers);
    const auto target = config.output.extension() == ".svg" ? config.output : config.output / "plane.svg";
    write_file(target, svg);
    log << "wrote " << target.string() << '\n';
    return target;
}

}  // namespace velplane
