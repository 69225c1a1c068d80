// velplane: GPS velocity logs -> complexity-entropy plane.
//
//   velplane ingest  --dataset mobile-century --input logs/ --out work/
//   velplane analyze --dataset mobile-century --input work/trips.csv --out work/plane
//   velplane noise   --ks 0,0.5,1,1.5,2,2.5,3 --seed 7 --out work/noise
//   velplane sweep   --input work/trips.csv --sample-intervals 3,9 --out work/sweep
//   velplane plot    --input work/plane --input work/noise --out work/plane.svg
//
// Exit codes: 0 success, 1 input error, 2 validation error.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "velplane/commands.hpp"
#include "velplane/errors.hpp"

namespace {

struct Options {
    std::string dataset = "canonical";
    std::vector<std::string> inputs;
    std::string output = ".";
    int dimension = 4;
    int delay = 1;
    double sample_interval = 0.0;
    std::vector<double> sample_intervals;
    std::vector<double> ks{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::size_t length = 65536;
    std::uint64_t seed = 1;
    bool strict = false;
    std::string policy;
    std::vector<std::string> vehicles;
    int resolution = 1024;
};

velplane::RunConfig to_config(const Options& o, const CLI::App& sub) {
    using namespace velplane;
    RunConfig c;
    c.dataset = dataset_from_string(o.dataset);
    for (const auto& in : o.inputs) c.inputs.emplace_back(in);
    c.output = o.output;
    c.dimension = o.dimension;
    c.delay = o.delay;
    if (sub.count("--sample-interval") > 0) c.sample_interval = o.sample_interval;
    c.sample_intervals = o.sample_intervals;
    c.noise_exponents = o.ks;
    c.noise_length = o.length;
    c.seed = o.seed;
    c.strictness = o.strict ? Strictness::Strict : Strictness::Lenient;
    if (!o.policy.empty()) {
        static const std::map<std::string, CleaningPolicy> policies{
            {"none", CleaningPolicy::MobileCentury},
            {"mobile-century", CleaningPolicy::MobileCentury},
            {"borlange", CleaningPolicy::Borlange},
            {"beijing", CleaningPolicy::Beijing},
        };
        const auto it = policies.find(o.policy);
        if (it == policies.end()) throw ValidationError("unknown policy '" + o.policy + "'");
        c.policy = it->second;
    }
    c.vehicles = o.vehicles;
    c.boundary_resolution = o.resolution;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Velocity time series on the complexity-entropy plane"};
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
    app.require_subcommand(1);

    Options o;
    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--dataset", o.dataset, "mobile-century | borlange | beijing | canonical")
            ->check(CLI::IsMember({"mobile-century", "borlange", "beijing", "canonical"}));
        sub->add_option("--input,-i", o.inputs, "Input files or directories");
        sub->add_option("--out,-o", o.output, "Output directory");
        sub->add_option("--dimension,-D", o.dimension, "Embedding dimension D")->capture_default_str();
        sub->add_option("--delay", o.delay, "Embedding delay tau")->capture_default_str();
        sub->add_option("--sample-interval", o.sample_interval, "Resampling interval T_S in seconds");
        sub->add_option("--vehicles", o.vehicles, "Restrict to these vehicle ids")->delimiter(',');
        sub->add_option("--boundary-resolution", o.resolution, "Samples per boundary curve")->capture_default_str();
    };

    auto* ingest = app.add_subcommand("ingest", "Parse and clean a dataset into a trips file");
    add_common(ingest);
    ingest->add_flag("--strict,!--lenient", o.strict, "Fail on malformed rows instead of skipping them");
    ingest->add_option("--policy", o.policy, "Outlier policy: none | borlange | beijing");

    auto* analyze = app.add_subcommand("analyze", "Per-vehicle plane points and pattern distributions");
    add_common(analyze);

    auto* noise = app.add_subcommand("noise", "f^-k noise reference ladder");
    add_common(noise);
    noise->add_option("--ks", o.ks, "Spectral exponents")->delimiter(',');
    noise->add_option("--length", o.length, "Noise length")->capture_default_str();
    noise->add_option("--seed", o.seed, "Generator seed")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Analyze one trips file at several sample intervals");
    add_common(sweep);
    sweep->add_option("--sample-intervals", o.sample_intervals, "Sample intervals in seconds")->delimiter(',');

    auto* plot = app.add_subcommand("plot", "Render plane exports to SVG");
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const auto config = to_config(o, *sub);
        if (sub == ingest) {
            velplane::cmd_ingest(config, std::cerr);
        } else if (sub == analyze) {
            velplane::cmd_analyze(config, std::cerr);
        } else if (sub == noise) {
            velplane::cmd_noise(config, std::cerr);
        } else if (sub == sweep) {
            velplane::cmd_sweep(config, std::cerr);
        } else if (sub == plot) {
            velplane::cmd_plot(config, std::cerr);
        }
    } catch (const velplane::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
