#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergman/quad1d.hpp"

using namespace bergman;

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    for (int order : {4, 8, 12, 16}) {
        const GaussRule& g = gauss_legendre(order);
        double wsum = 0.0;
        for (double w : g.weights) wsum += w;
        CHECK(std::abs(wsum - 2.0) < 1e-14);
        // degree 2*order-1 monomial on [0,1]
        int deg = 2 * order - 1;
        double got = integrate_gl([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0, order);
        CHECK(std::abs(got - 1.0 / (deg + 1)) < 1e-13);
    }
}

TEST_CASE("adaptive integration matches closed forms") {
    auto r1 = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 40.0);
    CHECK(std::abs(r1.value - (1.0 - std::exp(-40.0))) < 1e-12);

    // integrable endpoint behavior (1-x)^{-1/2}
    auto r2 = integrate_adaptive([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0,
                                 1.0 - 1e-14);
    CHECK(std::abs(r2.value - 2.0) < 1e-6);

    // break points honored: |sin| over three periods
    const double pi = 3.14159265358979323846;
    auto r3 = integrate_adaptive([](double x) { return std::abs(std::sin(x)); }, 0.0, 3.0 * pi,
                                 1e-13, 1e-300, {pi, 2.0 * pi});
    CHECK(std::abs(r3.value - 6.0) < 1e-12);
}
