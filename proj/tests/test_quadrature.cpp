#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/quadrature.hpp"
#include "bergman/scenario.hpp"

using namespace bergman;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("disk quadrature basics") {
    auto quad = DiskQuadrature::get(10);
    CHECK(std::abs(quad->integrate([](cplx) { return 1.0; }) - 1.0) < 1e-12);
    CHECK(std::abs(quad->integrate([](cplx z) { return std::norm(z); }) - 0.5) < 1e-10);

    // weight-density integrand hits the moment identity
    auto prof = profile_for("std:alpha=2");
    double got = quad->integrate([&](cplx z) { return prof->density(std::abs(z)); });
    CHECK(got == doctest::Approx(2.0 * prof->moment(1)).epsilon(1e-10));

    CHECK_THROWS_AS(quad->integrate([](cplx z) { return 1.0 / (1.0 - std::abs(z) * 0.0) *
                                                        std::numeric_limits<double>::quiet_NaN(); }),
                    NonFiniteError);
}

TEST_CASE("refinement error estimates shrink") {
    double prev = 1e300;
    for (int J = 4; J <= 12; ++J) {
        IntegralResult r = integrate_disk(
            [](cplx z) { return std::pow(std::abs(1.0 - 0.7 * z), -3.0); }, J);
        if (prev > 1e-13) CHECK(r.error_estimate <= prev);
        prev = r.error_estimate;
    }
}

TEST_CASE("measure of regions") {
    Measure area = Measure::area();
    double want = 0.5 * 0.75 / (2.0 * kPi);
    CHECK(measure_of_box(area, cplx(0.5, 0.0)) == doctest::Approx(want).epsilon(1e-12));

    // atoms respect the box's inclusive boundaries
    Measure with_atoms = area.with_atoms({{cplx(0.9, 0.0), 2.0}, {cplx(0.5, 0.0), 1.0}});
    CHECK(measure_of_box(with_atoms, cplx(0.9, 0.0)) ==
          doctest::Approx(measure_of_box(area, cplx(0.9, 0.0)) + 2.0).epsilon(1e-10));
    // rim atom counts (radial inequality is inclusive)
    CHECK(measure_of_box(with_atoms, cplx(0.5, 0.0)) ==
          doctest::Approx(want + 1.0 + 2.0).epsilon(1e-10));

    // pseudo-disk: atoms on the rim are excluded (strict inequality)
    EuclideanDisk d = pseudo_disk_shape(cplx(0.5, 0.0), 0.3);
    Measure rim = Measure::area().with_atoms({{d.center + d.radius, 5.0}});
    CHECK(measure_of_pseudo_disk(rim, cplx(0.5, 0.0), 0.3) ==
          doctest::Approx(d.radius * d.radius).epsilon(1e-10));

    // density path against the closed form
    Measure flat = Measure::density("flat", [](cplx) { return 1.0; }, true);
    CHECK(measure_of_box(flat, cplx(0.5, 0.0)) == doctest::Approx(want).epsilon(1e-9));
    CHECK(measure_of_pseudo_disk(flat, cplx(0.5, 0.0), 0.3) ==
          doctest::Approx(d.radius * d.radius).epsilon(1e-9));

    // warea path equals the profile box mass
    auto prof = profile_for("std:alpha=1");
    Measure warea = Measure::warea(prof);
    CHECK(measure_of_box(warea, cplx(0.7, 0.3)) ==
          doctest::Approx(prof->box_mass_at(std::abs(cplx(0.7, 0.3)))).epsilon(1e-12));
}

TEST_CASE("region measures are monotone under inclusion") {
    auto prof = profile_for("std:alpha=1");
    Measure mu = Measure::warea(prof);
    // deeper box with the same argument is contained in the shallower one
    double outer = measure_of_box(mu, cplx(0.6, 0.0));
    double inner = measure_of_box(mu, cplx(0.8, 0.0));
    CHECK(inner < outer);
}

TEST_CASE("pushforward measures") {
    auto prof = profile_for("std:alpha=1");
    auto quad = DiskQuadrature::get(8);

    // u = 1, phi = id: nu == mu on every region (closed transport path)
    Pushforward idpf;
    idpf.u = [](cplx) { return cplx(1.0, 0.0); };
    idpf.phi = AnalyticMap::identity();
    idpf.base = Measure::warea(prof);
    idpf.q = 2.0;
    idpf.transport_closed = true;
    idpf.transport_scale = 1.0;
    for (cplx a : {cplx(0.5, 0.0), cplx(0.0, 0.8)}) {
        CHECK(pushforward_box(idpf, a, *quad) ==
              doctest::Approx(idpf.base.box_mass(a)).epsilon(1e-12));
    }
    // raw composed-indicator route agrees to indicator resolution
    Pushforward raw = idpf;
    raw.transport_closed = false;
    CHECK(pushforward_box(raw, cplx(0.5, 0.0), *DiskQuadrature::get(10, 16)) ==
          doctest::Approx(idpf.base.box_mass(cplx(0.5, 0.0))).epsilon(2e-2));

    // u = 0 kills everything
    Pushforward zero = idpf;
    zero.u = [](cplx) { return cplx(0.0, 0.0); };
    zero.transport_closed = false;
    CHECK(pushforward_box(zero, cplx(0.5, 0.0), *quad) == 0.0);
    CHECK(pushforward_total(zero, *quad) == 0.0);

    // total mass identity nu(D) = int |u|^q dmu
    Pushforward sq;
    sq.u = [](cplx z) { return z; };
    sq.phi = AnalyticMap::polynomial({0.0, 0.0, 1.0});
    sq.base = Measure::area();
    sq.q = 2.0;
    CHECK(pushforward_total(sq, *quad) == doctest::Approx(0.5).epsilon(1e-10));

    // monte-carlo oracle for a composed membership mass
    Pushforward comp;
    comp.u = [](cplx) { return cplx(1.0, 0.0); };
    comp.phi = AnalyticMap::polynomial({0.0, 0.0, 1.0});
    comp.base = Measure::area();
    comp.q = 2.0;
    double got = pushforward_box(comp, cplx(0.9, 0.0), *DiskQuadrature::get(11, 32, 4096));
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    long n = 4'000'000, hits = 0, in_disk = 0;
    for (long i = 0; i < n; ++i) {
        cplx z(unif(rng), unif(rng));
        if (std::norm(z) >= 1.0) continue;
        ++in_disk;
        if (in_carleson_box(cplx(0.9, 0.0), z * z)) ++hits;
    }
    double est = static_cast<double>(hits) / in_disk;
    double sigma = std::sqrt(est * (1.0 - est) / in_disk);
    CHECK(std::abs(got - est) < 3.0 * sigma + 1e-6);
}

TEST_CASE("atomization conserves mass") {
    auto prof = profile_for("std:alpha=1");
    Pushforward pf;
    pf.u = [](cplx z) { return 0.5 + 0.5 * z; };
    pf.phi = AnalyticMap::polynomial({0.1, 0.0, 0.6});
    pf.base = Measure::warea(prof).with_atoms({{cplx(0.2, 0.2), 0.25}});
    pf.q = 2.0;
    auto quad = DiskQuadrature::get(8);
    auto atoms = atomize(pf, *quad);
    double total = 0.0;
    for (const Atom& at : atoms) total += at.mass;
    CHECK(total == doctest::Approx(pushforward_total(pf, *quad)).epsilon(1e-12));
}
