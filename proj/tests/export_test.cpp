#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "velplane/errors.hpp"
#include "velplane/export.hpp"

using namespace velplane;

namespace {

std::vector<PlaneRow> sample_rows() {
    std::vector<PlaneRow> rows;
    rows.push_back({"veh,1", PointKind::Vehicle, 0.0, 0.0, 4, 1, 100});
    rows.push_back({"k=0", PointKind::Noise, 1.0, 0.0, 4, 1, 65536});
    rows.push_back({"mid \"q\"", PointKind::Vehicle, 0.5, 0.5 * (minimum_complexity(24, 0.5) + maximum_complexity(24, 0.5)),
                    4, 2, 1234});
    return rows;
}

}  // namespace

TEST(Format, Numbers) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_exact(0.1), "0.1");
    const double x = 1202497202.837;
    EXPECT_EQ(std::stod(format_exact(x)), x);
}

TEST(Trips, RoundTripIsExact) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1e9);
    std::vector<Trip> trips(3);
    for (std::size_t i = 0; i < trips.size(); ++i) {
        trips[i].vehicle_id = i == 1 ? "a,b" : "veh" + std::to_string(i);
        trips[i].trip_id = std::to_string(i);
        double t = u(rng);
        for (int k = 0; k < 5; ++k) {
            t += u(rng) / 1e6;
            trips[i].observations.push_back({t, u(rng) / 3e7});
        }
    }
    std::stringstream buf;
    write_trips(buf, trips);
    const auto back = read_trips(buf);
    ASSERT_EQ(back.size(), trips.size());
    for (std::size_t i = 0; i < trips.size(); ++i) {
        EXPECT_EQ(back[i].vehicle_id, trips[i].vehicle_id);
        EXPECT_EQ(back[i].trip_id, trips[i].trip_id);
        ASSERT_EQ(back[i].observations.size(), trips[i].observations.size());
        for (std::size_t k = 0; k < trips[i].observations.size(); ++k) {
            EXPECT_EQ(back[i].observations[k].time, trips[i].observations[k].time);
            EXPECT_EQ(back[i].observations[k].velocity, trips[i].observations[k].velocity);
        }
    }
}

TEST(Trips, RejectsBadHeaderAndRows) {
    std::istringstream bad_header("a,b,c,d\n");
    EXPECT_THROW(read_trips(bad_header), InputError);
    std::istringstream bad_row("vehicle_id,trip_id,t,v\nv,0,abc,1\n");
    EXPECT_THROW(read_trips(bad_row), InputError);
}

TEST(Plane, RoundTripToTwelveDigits) {
    const auto rows = sample_rows();
    std::stringstream first;
    write_plane(first, rows);
    const auto back = read_plane(first);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].label, rows[i].label);
        EXPECT_EQ(back[i].kind, rows[i].kind);
        EXPECT_NEAR(back[i].entropy, rows[i].entropy, 1e-12);
        EXPECT_NEAR(back[i].complexity, rows[i].complexity, 1e-12);
        EXPECT_EQ(back[i].dimension, rows[i].dimension);
        EXPECT_EQ(back[i].delay, rows[i].delay);
        EXPECT_EQ(back[i].length, rows[i].length);
    }
    std::stringstream second;
    write_plane(second, back);
    EXPECT_EQ(second.str(), first.str());
}

TEST(Plane, HeaderAndQuoting) {
    std::stringstream buf;
    write_plane(buf, sample_rows());
    std::string line;
    std::getline(buf, line);
    EXPECT_EQ(line, "label,kind,H,C,D,tau,M");
    std::getline(buf, line);
    EXPECT_EQ(line, "\"veh,1\",vehicle,0,0,4,1,100");
    std::getline(buf, line);
    EXPECT_EQ(line, "k=0,noise,1,0,4,1,65536");
    std::getline(buf, line);
    EXPECT_EQ(line.rfind("\"mid \"\"q\"\"\",vehicle,0.5,", 0), 0u);
}

TEST(Plane, OutOfBoundsRowRejected) {
    std::vector<PlaneRow> rows{{"bad", PointKind::Vehicle, 0.5, 0.9, 4, 1, 100}};
    std::stringstream buf;
    EXPECT_THROW(write_plane(buf, rows), ValidationError);
}

TEST(Plane, MakeRowUsesSeriesLength) {
    const auto dist = ordinal_distribution(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 3, 2);
    const auto row = make_row(plane_point(dist, "x"), PointKind::Vehicle);
    EXPECT_EQ(row.length, 10u);
    EXPECT_EQ(row.delay, 2);
    EXPECT_EQ(row.entropy, 0.0);
}

TEST(Boundaries, RoundTrip) {
    const auto curves = boundary_curves(24, 128);
    std::stringstream buf;
    write_boundaries(buf, curves.first, curves.second);
    const auto back = read_boundaries(buf);
    EXPECT_EQ(back.first.kind, BoundaryKind::Minimum);
    EXPECT_EQ(back.second.kind, BoundaryKind::Maximum);
    ASSERT_EQ(back.first.samples.size(), curves.first.samples.size());
    ASSERT_EQ(back.second.samples.size(), curves.second.samples.size());
    for (std::size_t i = 0; i < curves.second.samples.size(); ++i) {
        EXPECT_NEAR(back.second.samples[i].entropy, curves.second.samples[i].entropy, 1e-12);
        EXPECT_NEAR(back.second.samples[i].complexity, curves.second.samples[i].complexity, 1e-12);
    }
}

TEST(Patterns, OneRowPerPermutation) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    std::vector<double> x(500);
    for (auto& v : x) v = n(rng);
    std::vector<std::pair<std::string, OrdinalDistribution>> pdfs{{"a", ordinal_distribution(x, 4)},
                                                                  {"b", ordinal_distribution(x, 3)}};
    std::stringstream buf;
    write_patterns(buf, pdfs);
    std::string line;
    std::getline(buf, line);
    EXPECT_EQ(line, "label,pattern,index,count,probability");
    int rows = 0;
    std::getline(buf, line);
    EXPECT_EQ(line.rfind("a,0123,0,", 0), 0u);
    ++rows;
    while (std::getline(buf, line)) ++rows;
    EXPECT_EQ(rows, 24 + 6);
}

TEST(Report, JsonConservation) {
    CleaningReport r;
    r.parse.rows = 12;
    r.parsed = 10;
    r.nan = 1;
    r.negative = 2;
    r.retained = 7;
    r.retained_trips = 2;
    r.velocity_q3 = 21.355;
    const auto j = nlohmann::json::parse(report_json(r));
    EXPECT_EQ(j["parsed"].get<int>(), 10);
    EXPECT_EQ(j["retained"].get<int>(), 7);
    EXPECT_EQ(j["discarded"]["total"].get<int>(), 3);
    EXPECT_EQ(j["parsed"].get<int>(), j["retained"].get<int>() + j["discarded"]["total"].get<int>());
    EXPECT_TRUE(j["thresholds"]["trip_mean_q1"].is_null());
    EXPECT_DOUBLE_EQ(j["thresholds"]["velocity_q3"].get<double>(), 21.355);
}
