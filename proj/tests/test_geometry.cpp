#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/geometry.hpp"

using namespace bergman;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("carleson box membership") {
    CHECK(in_carleson_box(0.5, 0.5));      // inner rim is included
    CHECK(!in_carleson_box(0.5, 0.0));     // |z| below the rim
    CHECK(in_carleson_box(0.5, 0.75));
    CHECK(!in_carleson_box(0.5, std::polar(0.75, 0.3)));  // outside the arc
    CHECK(in_carleson_box(0.5, std::polar(0.75, 0.2499)));
    // S(0) is the whole disk
    CHECK(in_carleson_box(0.0, std::polar(0.999, 2.0)));
}

TEST_CASE("carleson box area by monte carlo") {
    std::mt19937 rng(123456);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const long n = 10'000'000;
    long hits = 0, in_disk = 0;
    for (long i = 0; i < n; ++i) {
        cplx z(unif(rng), unif(rng));
        if (std::norm(z) >= 1.0) continue;
        ++in_disk;
        if (in_carleson_box(0.5, z)) ++hits;
    }
    double est = static_cast<double>(hits) / in_disk;  // normalized area
    double want = 0.5 * 0.75 / (2.0 * kPi);
    double sigma = std::sqrt(want * (1.0 - want) / in_disk);
    CHECK(std::abs(est - want) < 3.0 * sigma + 1e-9);
}

TEST_CASE("mobius involution") {
    cplx a(0.4, -0.3);
    CHECK(std::abs(mobius(a, a)) < 1e-15);
    CHECK(std::abs(mobius(a, 0.0) - a) < 1e-15);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-0.7, 0.7);
    for (int i = 0; i < 50; ++i) {
        cplx z(unif(rng), unif(rng));
        CHECK(std::abs(mobius(a, mobius(a, z)) - z) < 1e-13);
    }
}

TEST_CASE("pseudo-hyperbolic disk") {
    cplx a(0.5, 0.0);
    CHECK(in_pseudo_disk(a, 0.3, a));
    // a = 0: plain euclidean disk
    CHECK(in_pseudo_disk(0.0, 0.3, 0.29));
    CHECK(!in_pseudo_disk(0.0, 0.3, 0.31));

    EuclideanDisk d = pseudo_disk_shape(a, 0.3);
    CHECK(d.center.real() == doctest::Approx(0.46547314578005115).epsilon(1e-12));
    CHECK(d.radius == doctest::Approx(0.23017902813299233).epsilon(1e-12));
    // shape matches membership on a sample circle
    for (int t = 0; t < 64; ++t) {
        cplx inside = d.center + std::polar(d.radius * 0.999, 2.0 * kPi * t / 64.0);
        cplx outside = d.center + std::polar(d.radius * 1.001, 2.0 * kPi * t / 64.0);
        CHECK(in_pseudo_disk(a, 0.3, inside));
        CHECK(!in_pseudo_disk(a, 0.3, outside));
    }
}

TEST_CASE("stolz region and tent duality") {
    cplx a(0.8, 0.0);
    CHECK(in_stolz(a, 0.0));  // 0 belongs to every aperture region
    CHECK(!in_stolz(a, cplx(0.9, 0.0)));  // |z| >= |a| on the axis fails
    CHECK(!in_stolz(a, a));               // zero aperture at |z| = |a|

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        cplx x = std::polar(0.05 + 0.9 * unif(rng), 2.0 * kPi * unif(rng));
        cplx z = std::polar(0.05 + 0.9 * unif(rng), 2.0 * kPi * unif(rng));
        CHECK(in_tent(x, z) == in_stolz(z, x));
    }
}

TEST_CASE("blaschke bound formula") {
    CHECK(blaschke_bound({1, 0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(blaschke_bound({0, 1, 0.5, 0.5}) == doctest::Approx(6.0));
    CHECK(blaschke_bound({2, 2, 0.25, 0.25}) == doctest::Approx(2.0 + 4.0 * 1.25 / 0.75));

    // property: for c < |z| < 1 the derivative-quotient stays under the bound
    auto b = AnalyticMap::blaschke(0, {cplx(0.5, 0.0)});
    double bound = blaschke_bound(b.blaschke_data());
    for (int t = 0; t < 512; ++t) {
        cplx z = std::polar(0.99, 2.0 * kPi * t / 512.0);
        CHECK((1.0 - std::norm(b.eval(z))) / (1.0 - std::norm(z)) <= bound + 1e-12);
    }
}

TEST_CASE("boundary modulus profiles") {
    auto ident = AnalyticMap::identity();
    double r10 = 1.0 - std::pow(2.0, -10);
    CHECK(boundary_modulus_profile(ident, {r10})[0] >= 0.99);

    auto half = AnalyticMap::polynomial({0.0, 0.5});
    CHECK(boundary_modulus_profile(half, {0.999})[0] == doctest::Approx(0.4995).epsilon(1e-6));

    auto avg = AnalyticMap::polynomial({0.5, 0.5});
    // closed form (1-r)/2
    CHECK(boundary_modulus_profile(avg, {0.9})[0] == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(boundary_modulus_profile(avg, {0.99})[0] < 0.01);

    auto blas = AnalyticMap::blaschke(1, {cplx(0.3, 0.1)});
    auto prof = boundary_modulus_profile(blas, {0.9, 0.99, 0.999});
    CHECK(prof[0] < prof[1]);
    CHECK(prof[1] < prof[2]);
    CHECK(prof[2] > 0.99);
}

TEST_CASE("analytic map construction and validation") {
    CHECK_THROWS_AS(AnalyticMap::polynomial({0.0, 0.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(AnalyticMap::affine(0.8, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(AnalyticMap::blaschke(0, {cplx(1.2, 0.0)}), std::invalid_argument);

    auto b = AnalyticMap::blaschke(1, {cplx(0.5, 0.0), cplx(0.0, 0.25)});
    CHECK(b.self_map());
    for (int t = 0; t < 256; ++t)
        CHECK(std::abs(b.eval(std::polar(1.0, 2.0 * kPi * t / 256.0))) ==
              doctest::Approx(1.0).epsilon(1e-12));
    // zeros really are zeros
    CHECK(std::abs(b.eval(cplx(0.5, 0.0))) < 1e-15);
    CHECK(std::abs(b.eval(cplx(0.0, 0.25))) < 1e-15);
    CHECK(std::abs(b.eval(0.0)) < 1e-15);

    // reciprocal power multiplier: u_w(0) = 1, grows toward w/|w|
    auto u = AnalyticMap::reciprocal_power(cplx(0.9, 0.0), 2.0);
    CHECK(std::abs(u.eval(0.0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(u.eval(cplx(0.99, 0.0))) > 1.0);
    CHECK(!u.self_map());

    int pw = 0;
    cplx cf;
    CHECK(AnalyticMap::polynomial({0.0, 0.0, cplx(0.0, 0.7)}).is_monomial(&pw, &cf));
    CHECK(pw == 2);
    CHECK(std::abs(cf - cplx(0.0, 0.7)) < 1e-15);
    CHECK(!AnalyticMap::polynomial({0.1, 0.5}).is_monomial());

    auto comp = AnalyticMap::composition(
        {AnalyticMap::polynomial({0.0, 0.5}), AnalyticMap::polynomial({0.0, 0.0, 1.0})});
    CHECK(std::abs(comp.eval(cplx(0.6, 0.0)) - cplx(0.18, 0.0)) < 1e-15);
    auto tc = comp.taylor_coefficients();
    REQUIRE(tc.size() == 3);
    CHECK(std::abs(tc[2] - cplx(0.5, 0.0)) < 1e-15);
}
