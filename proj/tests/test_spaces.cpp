#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergman/scenario.hpp"
#include "bergman/spaces.hpp"

using namespace bergman;

TEST_CASE("default gamma keeps the exponent at four or more") {
    CHECK(default_gamma(1.0) == 9.0);
    CHECK(default_gamma(2.0) == 9.0);
    CHECK(default_gamma(4.0) == 15.0);
    for (double p : {1.0, 2.0, 3.0, 4.0})
        CHECK((default_gamma(p) + 1.0) / p >= 4.0);
}

TEST_CASE("test function values") {
    auto prof = profile_for("std:alpha=1");
    cplx a(0.7, 0.0);
    TestFunction tf = TestFunction::make(*prof, a, 2.0);
    CHECK(std::abs(tf.eval(a) - std::pow(tf.box_mass, -0.5)) < 1e-12);

    // a = 0: constant omega(D)^{-1/p} under the S(0) = D convention
    TestFunction t0 = TestFunction::make(*prof, 0.0, 2.0);
    for (cplx z : {cplx(0.0, 0.0), cplx(0.5, 0.2), cplx(-0.9, 0.0)})
        CHECK(std::abs(t0.eval(z) - std::pow(prof->disk_mass(), -0.5)) < 1e-12);
}

TEST_CASE("A^p norms") {
    auto flat = profile_for("std:alpha=0");
    CHECK(norm_Ap([](cplx) { return cplx(1.0, 0.0); }, *flat, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_Ap([](cplx) { return cplx(1.0, 0.0); }, *flat, 3.0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // ||z^k||_{A^2} = sqrt(2 omega_{2k+1})
    auto prof = profile_for("std:alpha=1");
    for (int k : {0, 1, 3, 8}) {
        double want = std::sqrt(2.0 * prof->moment(2 * k + 1));
        double got = norm_Ap([k](cplx z) { return std::pow(z, k); }, *prof, 2.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }

    // positive homogeneity
    double n1 = norm_Ap([](cplx z) { return z + 0.3; }, *prof, 1.5);
    double n2 = norm_Ap([](cplx z) { return 3.0 * (z + 0.3); }, *prof, 1.5);
    CHECK(n2 == doctest::Approx(3.0 * n1).epsilon(1e-12));
}

TEST_CASE("kernel series against closed forms") {
    // omega = (1-s^2)^alpha has kernel (alpha+1)/(1 - zeta conj(z))^{alpha+2}
    for (double alpha : {0.0, 1.0, 2.5}) {
        Weight w = Weight::custom_density(
            "sq", [alpha](double r) { return std::pow(1.0 - r * r, alpha); }, alpha);
        WeightProfile prof(w);
        KernelSeries ks(prof, cplx(0.5, 0.3), 200);
        for (cplx zeta : {cplx(0.2, 0.0), cplx(-0.4, 0.5), cplx(0.0, -0.9)}) {
            if (std::abs(zeta * std::conj(ks.anchor())) > 0.8) continue;
            cplx want = (alpha + 1.0) *
                        std::pow(1.0 - zeta * std::conj(ks.anchor()),
                                 cplx(-(alpha + 2.0), 0.0));
            CHECK(std::abs(ks.eval(zeta) - want) / std::abs(want) < 1e-6);
        }
    }

    // zeta = 0 leaves only the constant term
    auto prof = profile_for("std:alpha=1");
    KernelSeries ks(*prof, cplx(0.4, 0.1), 64);
    CHECK(std::abs(ks.eval(0.0) - 1.0 / (2.0 * prof->moment(1))) < 1e-14);

    // guarded evaluation
    CHECK_THROWS_AS(KernelSeries(*prof, cplx(1.0, 0.0), 16), std::invalid_argument);
    KernelSeries edge(*prof, cplx(0.999, 0.0), 16);
    CHECK_THROWS_AS(edge.eval_with_bound(std::polar(1.0 / 0.999, 1.0)), TailNotControlled);
    auto res = edge.eval_with_bound(cplx(0.9, 0.0));
    CHECK(res.tail > 0.0);
}

TEST_CASE("kernel A1 norm") {
    auto flat = profile_for("std:alpha=0");
    // z = 0: constant kernel, norm exactly 1
    CHECK(kernel_A1_norm(*flat, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    // omega = 1, z = 0.5: integral of |1 - z conj(0.5)|^{-2} = 4 log(4/3)
    CHECK(kernel_A1_norm(*flat, cplx(0.5, 0.0)) ==
          doctest::Approx(1.1507282898071237).epsilon(1e-8));
    CHECK_THROWS_AS(kernel_A1_norm(*flat, cplx(1.0 - 1e-9, 0.0)), std::exception);
}

TEST_CASE("coefficient operators") {
    TaylorPolynomial f{{1.0, 2.0, 3.0, 4.0}};
    // p > 1: hard truncation; degree <= n is untouched
    TaylorPolynomial k5 = apply_Kn(f, 5, 2.0);
    REQUIRE(k5.c.size() == f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) CHECK(std::abs(k5.c[i] - f.c[i]) < 1e-15);
    TaylorPolynomial k1 = apply_Kn(f, 1, 2.0);
    REQUIRE(k1.c.size() == 2);
    CHECK(std::abs(k1.c[1] - cplx(2.0, 0.0)) < 1e-15);

    // p = 1: the displayed Cesaro damping; f = z, n = 1 -> z/2
    TaylorPolynomial z{{0.0, 1.0}};
    TaylorPolynomial cz = apply_Kn(z, 1, 1.0);
    CHECK(std::abs(cz.c[1] - cplx(0.5, 0.0)) < 1e-15);

    TaylorPolynomial r1 = apply_Rn(f, 1, 2.0);
    CHECK(std::abs(r1.c[0]) < 1e-15);
    CHECK(std::abs(r1.c[1]) < 1e-15);
    CHECK(std::abs(r1.c[2] - cplx(3.0, 0.0)) < 1e-15);

    // R_n + K_n = Id
    TaylorPolynomial rc = apply_Rn(z, 1, 1.0);
    CHECK(std::abs(rc.c[1] - cplx(0.5, 0.0)) < 1e-15);
}

TEST_CASE("reproducing property on polynomials") {
    auto prof = profile_for("std:alpha=1");
    TaylorPolynomial f{{0.3, cplx(0.0, -0.5), 0.2, 0.0, 0.1}};
    for (cplx z : {cplx(0.5, 0.0), cplx(-0.2, 0.6), cplx(0.0, 0.85)}) {
        KernelSeries ks(*prof, z, 512);
        cplx got = inner_product_A2([&](cplx zeta) { return f.eval(zeta); },
                                    [&](cplx zeta) { return ks.eval(zeta); }, *prof);
        CHECK(std::abs(got - f.eval(z)) < 1e-6);
    }
}
