#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bergman/scenario.hpp"

using namespace bergman;

TEST_CASE("complex literals") {
    CHECK(parse_complex("0.5") == cplx(0.5, 0.0));
    CHECK(parse_complex("-1.25") == cplx(-1.25, 0.0));
    CHECK(parse_complex("0.3+0.2i") == cplx(0.3, 0.2));
    CHECK(parse_complex("0.3-0.2i") == cplx(0.3, -0.2));
    CHECK(parse_complex("0.7i") == cplx(0.0, 0.7));
    CHECK(parse_complex("-0.7i") == cplx(0.0, -0.7));
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
}

TEST_CASE("weight spec strings") {
    CHECK(parse_weight("std:alpha=1").kind() == WeightKind::standard);
    CHECK(parse_weight("logpow:alpha=-1,beta=-2").kind() == WeightKind::log_power);
    CHECK(parse_weight("exp:alpha=0.5,beta=1").kind() == WeightKind::exponential);
    CHECK(parse_weight("osc").kind() == WeightKind::oscillating);
    CHECK_THROWS_AS(parse_weight("std:alpha=-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_weight("nope:x=1"), std::invalid_argument);

    // CSV-backed weights, including the negative-sample rejection
    {
        std::ofstream out("/tmp/w_ok.csv");
        out << "# r,w\n";
        for (int i = 0; i <= 20; ++i) out << 0.045 * i << "," << 1.0 - 0.045 * i << "\n";
    }
    CHECK(parse_weight("file:/tmp/w_ok.csv").kind() == WeightKind::custom_sampled);
    {
        std::ofstream out("/tmp/w_bad.csv");
        out << "0.1,1.0\n0.5,-0.5\n0.9,0.1\n";
    }
    CHECK_THROWS_AS(parse_weight("file:/tmp/w_bad.csv"), std::invalid_argument);
}

TEST_CASE("map and measure spec strings") {
    CHECK(parse_map("poly:0.5,0.5").is_polynomial());
    CHECK(parse_map("affine:0.2,0.5").kind() == AnalyticMap::Kind::affine);
    CHECK(parse_map("blaschke:m=1;zeros=0.5,0.3+0.2i").kind() ==
          AnalyticMap::Kind::blaschke);
    CHECK(parse_map("recip:w=0.9;alpha=2").kind() == AnalyticMap::Kind::reciprocal_power);
    CHECK_THROWS_AS(parse_map("poly:0,0,3"), std::invalid_argument);

    CHECK(parse_measure("area").kind() == Measure::Kind::area);
    CHECK(parse_measure("warea:std:alpha=1").kind() == Measure::Kind::warea);
    CHECK(parse_measure("density:ring").kind() == Measure::Kind::density);
    {
        std::ofstream out("/tmp/atoms.csv");
        out << "0.5,0.0,1.5\n-0.2,0.3,0.25\n";
    }
    Measure atoms = parse_measure("atoms:/tmp/atoms.csv");
    REQUIRE(atoms.atoms().size() == 2);
    CHECK(atoms.atoms()[0].mass == 1.5);
    CHECK_THROWS_AS(parse_measure("density:unknown"), std::invalid_argument);
}

TEST_CASE("scenario json round trip") {
    ordered_json j = {
        {"name", "demo"},
        {"weight", "std:alpha=1"},
        {"u", "poly:0.5,0.5"},
        {"phi", "poly:0,0,0.7"},
        {"mu", "area"},
        {"p", 4.0},
        {"q", 2.0},
        {"grids", {{"J", 8}, {"j0", 5}, {"N", 32}, {"r", 0.3}}},
    };
    Scenario sc = Scenario::from_json(j);
    CHECK(sc.p == 4.0);
    CHECK(sc.grids.oracle_N == 32);
    ordered_json back = sc.to_json();
    CHECK(back["weight"] == "std:alpha=1");
    CHECK(back["grids"]["r"] == 0.3);

    OperatorSpec spec = sc.build();
    CHECK(spec.p == 4.0);
    CHECK(spec.mu.kind() == Measure::Kind::area);
    CHECK(spec.u_map.has_value());
}

TEST_CASE("report json is deterministic") {
    Scenario sc;
    sc.weight_spec = "std:alpha=1";
    sc.u_spec = "poly:0.5,0.5";
    sc.phi_spec = "poly:0,0,0.7";
    OperatorSpec spec = sc.build();

    FunctionalReport r1 = boundedness_functional(spec, AGrid{1, 5, 128}, 5);
    FunctionalReport r2 = boundedness_functional(spec, AGrid{1, 5, 128}, 5);
    RunConfig cfg;
    cfg.command = "functional";
    cfg.kind = "bounded";
    ordered_json j1 = report_to_json(r1, cfg);
    ordered_json j2 = report_to_json(r2, cfg);
    j1.erase("wall_time_ms");
    j2.erase("wall_time_ms");
    CHECK(j1.dump() == j2.dump());

#ifdef _OPENMP
    // identical values regardless of the worker count
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    FunctionalReport s1 = boundedness_functional(spec, AGrid{1, 5, 128}, 5);
    omp_set_num_threads(saved);
    CHECK(std::memcmp(&s1.value, &r1.value, sizeof(double)) == 0);
    for (size_t i = 0; i < s1.levels.size(); ++i) CHECK(s1.levels[i] == r1.levels[i]);
#endif
}

TEST_CASE("atomic writes land complete files") {
    const std::string path = "/tmp/bergman_atomic_test.json";
    write_json_atomic(path, ordered_json{{"x", 1}});
    std::ifstream in(path);
    ordered_json j = ordered_json::parse(in);
    CHECK(j["x"] == 1);
}
