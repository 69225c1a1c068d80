#pragma once

/**
 * Pipeline commands behind the `velplane` CLI. Each command reads its inputs,
 * writes its outputs under RunConfig::output and returns a summary. Failures
 * surface as InputError (exit 1) or ValidationError (exit 2); warnings go to
 * the `log` stream.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "velplane/export.hpp"
#include "velplane/ingest.hpp"
#include "velplane/resample.hpp"

namespace velplane {

enum class Dataset { MobileCentury, Borlange, Beijing, Canonical };

Dataset dataset_from_string(const std::string& text);
std::string to_string(Dataset dataset);

// 3 s, 14 s, 60 s for the three datasets; 1 s for canonical trips files.
double default_sample_interval(Dataset dataset);
CleaningPolicy default_policy(Dataset dataset);

struct RunConfig {
    Dataset dataset = Dataset::Canonical;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output = ".";

    int dimension = 4;
    int delay = 1;
    std::optional<double> sample_interval;
    std::vector<double> sample_intervals;  // sweep
    std::vector<std::string> vehicles;     // empty: all

    std::vector<double> noise_exponents{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::size_t noise_length = 65536;
    std::uint64_t seed = 1;

    Strictness strictness = Strictness::Lenient;
    std::optional<CleaningPolicy> policy;
    int boundary_resolution = 1024;

    // Throws ValidationError on out-of-range parameters.
    void validate() const;
    double effective_sample_interval() const;
};

struct IngestSummary {
    std::size_t vehicles = 0;
    std::size_t trips = 0;
    CleaningReport report;
};

struct AnalyzeSummary {
    std::vector<PlaneRow> rows;
    std::vector<VelocitySeries> series;
    std::vector<std::string> skipped;
};

IngestSummary cmd_ingest(const RunConfig& config, std::ostream& log);

// Input: one trips file (RunConfig::inputs[0]). Writes plane.csv,
// boundary.csv, patterns.csv and series.csv.
AnalyzeSummary cmd_analyze(const RunConfig& config, std::ostream& log);

// Writes plane.csv, boundary.csv and one noise_k<k>.csv per exponent.
std::vector<PlaneRow> cmd_noise(const RunConfig& config, std::ostream& log);

// One analyze output per sample interval, under <output>/ts_<interval>/.
std::vector<AnalyzeSummary> cmd_sweep(const RunConfig& config, std::ostream& log);

// Inputs: export directories (plane.csv and/or boundary.csv inside) or
// plane.csv files. Writes <output>/plane.svg unless output ends in .svg.
std::filesystem::path cmd_plot(const RunConfig& config, std::ostream& log);

// Trips of the analyze input grouped by vehicle, in first-appearance order.
std::vector<std::vector<Trip>> group_by_vehicle(std::vector<Trip> trips);

}  // namespace velplane
