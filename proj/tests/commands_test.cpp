#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "velplane/commands.hpp"
#include "velplane/errors.hpp"
#include "velplane/noisegen.hpp"

using namespace velplane;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("velplane_") + info->name() + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    static int run(const std::string& args) {
        const std::string cmd = std::string(VELPLANE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string p(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

void write_series_as_trips(const fs::path& path, const std::vector<std::vector<double>>& vehicles) {
    std::vector<Trip> trips;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        Trip trip;
        trip.vehicle_id = "veh" + std::to_string(i);
        trip.trip_id = "0";
        for (std::size_t k = 0; k < vehicles[i].size(); ++k) {
            trip.observations.push_back({static_cast<double>(k), vehicles[i][k]});
        }
        trips.push_back(std::move(trip));
    }
    std::ostringstream out;
    write_trips(out, trips);
    write_text(path, out.str());
}

std::vector<PlaneRow> plane_of(const fs::path& path) {
    std::ifstream in(path);
    return read_plane(in);
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("analyze --bogus"), 2);
    EXPECT_EQ(run("noise -D 10 --out " + p("n")), 2);
    EXPECT_EQ(run("noise --ks 5 --out " + p("n")), 2);
    EXPECT_EQ(run("noise --length 100 --out " + p("n")), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, IngestEmptyDirectoryFails) {
    fs::create_directories(dir_ / "empty");
    EXPECT_EQ(run("ingest --dataset mobile-century -i " + p("empty") + " -o " + p("out")), 1);
    EXPECT_FALSE(fs::exists(dir_ / "out" / "trips.csv"));
}

TEST_F(Cli, IngestLenientSkipsMalformedRow) {
    std::string log;
    for (int i = 0; i < 20; ++i) {
        log += std::to_string(1202497200000LL + 3000LL * i) + ", 37.6, -122.06, " + std::to_string(10 + i % 7) + "\n";
        if (i == 5) log += "1202497215500, 37.6, -122.06\n";
    }
    write_text(dir_ / "logs" / "veh7.csv", log);
    ASSERT_EQ(run("ingest --dataset mobile-century -i " + p("logs") + " -o " + p("out")), 0);
    const auto report = nlohmann::json::parse(slurp(dir_ / "out" / "report.json"));
    EXPECT_EQ(report["malformed_rows"].get<int>(), 1);
    EXPECT_EQ(report["parsed"].get<int>(), 20);
    EXPECT_EQ(report["retained"].get<int>(), 20);
    const auto trips = read_trips(dir_ / "out" / "trips.csv");
    ASSERT_EQ(trips.size(), 1u);
    EXPECT_EQ(trips[0].vehicle_id, "veh7");

    EXPECT_EQ(run("ingest --strict --dataset mobile-century -i " + p("logs") + " -o " + p("strict")), 1);
}

TEST_F(Cli, IngestBorlangeDirectory) {
    write_text(dir_ / "bor" / "mobility.txt",
               "4, 1, 2, 2000-11-10 14:24:11, 2000-11-10 14:24:19\n"
               "4, 1, 2, 2000-11-10 14:24:19, 2000-11-10 14:24:33\n"
               "4, 1, 2, 2000-11-10 14:24:33, 2000-11-10 14:24:59\n");
    write_text(dir_ / "bor" / "nodes.txt", "316\t1076\n1076\t316\n316\t792\n");
    write_text(dir_ / "bor" / "nodepos.txt",
               "316\t15.443687, 60.476045\n1076\t15.445492, 60.474991\n792\t15.442580, 60.475656\n");
    ASSERT_EQ(run("ingest --dataset borlange -i " + p("bor") + " -o " + p("out")), 0);
    const auto trips = read_trips(dir_ / "out" / "trips.csv");
    ASSERT_EQ(trips.size(), 1u);
    EXPECT_EQ(trips[0].trip_id, "1-2");
}

TEST_F(Cli, AnalyzeMonotoneTripIsOrigin) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.01 * static_cast<double>(i);
    write_series_as_trips(dir_ / "trips.csv", {v});
    ASSERT_EQ(run("analyze -i " + p("trips.csv") + " -o " + p("plane")), 0);
    const auto rows = plane_of(dir_ / "plane" / "plane.csv");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].entropy, 0.0);
    EXPECT_EQ(rows[0].complexity, 0.0);
    EXPECT_EQ(rows[0].length, 1000u);
    EXPECT_TRUE(fs::exists(dir_ / "plane" / "patterns.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "plane" / "series.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "plane" / "boundary.csv"));
}

TEST_F(Cli, AnalyzeWhiteNoiseTripNearMaximumEntropy) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    std::vector<double> v(20000);
    for (auto& x : v) x = u(rng);
    write_series_as_trips(dir_ / "trips.csv", {v});
    ASSERT_EQ(run("analyze -i " + p("trips.csv") + " -o " + p("plane")), 0);
    const auto rows = plane_of(dir_ / "plane" / "plane.csv");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_GT(rows[0].entropy, 0.99);
    EXPECT_LT(rows[0].complexity, 0.02);
}

TEST_F(Cli, AnalyzeSkipsStoppedVehicleAndFailsWhenNoneLeft) {
    write_series_as_trips(dir_ / "trips.csv", {std::vector<double>(50, 0.0), {1, 2, 3, 2, 1, 4, 5, 3}});
    RunConfig config;
    config.inputs = {dir_ / "trips.csv"};
    config.output = dir_ / "plane";
    std::ostringstream log;
    const auto summary = cmd_analyze(config, log);
    EXPECT_EQ(summary.rows.size(), 1u);
    EXPECT_EQ(summary.skipped, std::vector<std::string>{"veh0"});
    EXPECT_NE(log.str().find("stopped vehicle"), std::string::npos);
    EXPECT_NE(log.str().find("unreliable"), std::string::npos);

    write_series_as_trips(dir_ / "stopped.csv", {std::vector<double>(50, 0.0)});
    EXPECT_EQ(run("analyze -i " + p("stopped.csv") + " -o " + p("none")), 1);
}

TEST_F(Cli, NoiseIsDeterministic) {
    const std::string args = "noise --ks 0,1.5,3 --length 4096 --seed 9 -o ";
    ASSERT_EQ(run(args + p("a")), 0);
    ASSERT_EQ(run(args + p("b")), 0);
    for (const char* name : {"plane.csv", "boundary.csv", "noise_k0.csv", "noise_k1.5.csv", "noise_k3.csv"}) {
        const auto a = slurp(dir_ / "a" / name);
        EXPECT_FALSE(a.empty()) << name;
        EXPECT_EQ(a, slurp(dir_ / "b" / name)) << name;
    }
    ASSERT_EQ(run("noise --ks 0,1.5,3 --length 4096 --seed 10 -o " + p("c")), 0);
    EXPECT_NE(slurp(dir_ / "a" / "noise_k1.5.csv"), slurp(dir_ / "c" / "noise_k1.5.csv"));

    const auto rows = plane_of(dir_ / "a" / "plane.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].label, "k=1.5");
    EXPECT_EQ(rows[1].kind, PointKind::Noise);
}

TEST_F(Cli, SweepCoarserSamplingRaisesEntropy) {
    const auto noise = generate_fk_noise({2.5, 65536, 4});
    std::vector<double> v(noise.begin(), noise.end());
    double lowest = 0.0;
    for (double x : v) lowest = std::min(lowest, x);
    for (auto& x : v) x -= lowest;  // velocities are non-negative; ordinal patterns are unchanged
    write_series_as_trips(dir_ / "trips.csv", {v});
    ASSERT_EQ(run("sweep -i " + p("trips.csv") + " --sample-intervals 1,3 -o " + p("sweep")), 0);
    const auto fine = plane_of(dir_ / "sweep" / "ts_1" / "plane.csv");
    const auto coarse = plane_of(dir_ / "sweep" / "ts_3" / "plane.csv");
    ASSERT_EQ(fine.size(), 1u);
    ASSERT_EQ(coarse.size(), 1u);
    EXPECT_GT(coarse[0].entropy, fine[0].entropy);
    EXPECT_LT(coarse[0].complexity, fine[0].complexity);
    EXPECT_EQ(fine[0].length, 65536u);
    EXPECT_EQ(coarse[0].length, 21846u);
}

TEST_F(Cli, SweepWithOneIntervalMatchesAnalyze) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<double> v(3000);
    for (auto& x : v) x = u(rng);
    write_series_as_trips(dir_ / "trips.csv", {v, std::vector<double>(v.rbegin(), v.rend())});
    ASSERT_EQ(run("sweep -i " + p("trips.csv") + " --sample-intervals 2 -o " + p("sweep")), 0);
    ASSERT_EQ(run("analyze -i " + p("trips.csv") + " --sample-interval 2 -o " + p("single")), 0);
    for (const char* name : {"plane.csv", "patterns.csv", "series.csv", "boundary.csv"}) {
        EXPECT_EQ(slurp(dir_ / "sweep" / "ts_2" / name), slurp(dir_ / "single" / name)) << name;
    }
}

TEST_F(Cli, PlotDrawsPointsCurvesAndLadder) {
    write_series_as_trips(dir_ / "trips.csv", {{1, 2, 3, 4, 5, 6, 7, 8}, {3, 1, 4, 1, 5, 9, 2, 6, 5, 3}});
    ASSERT_EQ(run("analyze -i " + p("trips.csv") + " -o " + p("veh")), 0);
    ASSERT_EQ(run("noise --length 4096 -o " + p("noise")), 0);

    ASSERT_EQ(run("plot -i " + p("veh") + " -o " + p("veh.svg")), 0);
    const auto svg = slurp(dir_ / "veh.svg");
    EXPECT_EQ(count(svg, "class=\"point vehicle\""), 2u);
    EXPECT_EQ(count(svg, "class=\"boundary boundary-min\""), 1u);
    EXPECT_EQ(count(svg, "class=\"boundary boundary-max\""), 1u);

    ASSERT_EQ(run("plot -i " + p("veh/boundary.csv") + " -o " + p("curves.svg")), 0);
    const auto curves = slurp(dir_ / "curves.svg");
    EXPECT_EQ(count(curves, "class=\"point"), 0u);
    EXPECT_EQ(count(curves, "class=\"boundary "), 2u);

    ASSERT_EQ(run("plot -i " + p("veh") + " -i " + p("noise") + " -o " + p("both")), 0);
    const auto both = slurp(dir_ / "both" / "plane.svg");
    EXPECT_EQ(count(both, "class=\"point noise\""), 7u);
    const std::regex ladder("class=\"ladder\"[^>]*points=\"([^\"]*)\"");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(both, m, ladder));
    std::istringstream pts(m[1].str());
    std::string pair;
    double prev_x = 1e9;
    int n = 0;
    while (pts >> pair) {
        const double x = std::stod(pair.substr(0, pair.find(',')));
        EXPECT_LT(x, prev_x);
        prev_x = x;
        ++n;
    }
    EXPECT_EQ(n, 7);
}

TEST_F(Cli, PlotRejectsEmptyExport) {
    write_text(dir_ / "empty" / "plane.csv", "label,kind,H,C,D,tau,M\n");
    EXPECT_NE(run("plot -i " + p("empty") + " -o " + p("x.svg")), 0);
    EXPECT_FALSE(fs::exists(dir_ / "x.svg"));
    EXPECT_EQ(run("plot -i " + p("missing") + " -o " + p("y.svg")), 1);
}

TEST_F(Cli, ConfigFileSuppliesOptions) {
    write_text(dir_ / "run.toml", "[noise]\nks = [0.0, 2.0]\nlength = 2048\nseed = 5\ndimension = 3\n");
    ASSERT_EQ(run("--config " + p("run.toml") + " noise -o " + p("cfg")), 0);
    const auto rows = plane_of(dir_ / "cfg" / "plane.csv");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].dimension, 3);
    EXPECT_EQ(rows[1].label, "k=2");
    EXPECT_EQ(rows[1].length, 2048u);
}

TEST(Commands, DatasetNamesAndDefaults) {
    EXPECT_EQ(dataset_from_string("borlange"), Dataset::Borlange);
    EXPECT_EQ(to_string(Dataset::MobileCentury), "mobile-century");
    EXPECT_THROW(dataset_from_string("paris"), ValidationError);
    EXPECT_EQ(default_sample_interval(Dataset::MobileCentury), 3.0);
    EXPECT_EQ(default_sample_interval(Dataset::Borlange), 14.0);
    EXPECT_EQ(default_sample_interval(Dataset::Beijing), 60.0);
    EXPECT_EQ(default_policy(Dataset::Beijing), CleaningPolicy::Beijing);
    RunConfig c;
    c.dataset = Dataset::Borlange;
    EXPECT_EQ(c.effective_sample_interval(), 14.0);
    c.sample_interval = 7.0;
    EXPECT_EQ(c.effective_sample_interval(), 7.0);
    c.delay = 0;
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Commands, GroupByVehicleKeepsFirstAppearanceOrder) {
    std::vector<Trip> trips(4);
    trips[0].vehicle_id = "b";
    trips[1].vehicle_id = "a";
    trips[2].vehicle_id = "b";
    trips[3].vehicle_id = "c";
    const auto groups = group_by_vehicle(trips);
    ASSERT_EQ(groups.size(), 3u);
    EXPECT_EQ(groups[0].size(), 2u);
    EXPECT_EQ(groups[1][0].vehicle_id, "a");
}
