#include <cmath>
#include <vector>

#include "doctest.h"

#include "anelastic/density.hpp"
#include "anelastic/errors.hpp"

using namespace anelastic;

TEST_CASE("q_eps piecewise anchors") {
    QEps q = make_q_eps(0.1);
    CHECK(q.value(0.0) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(q.value(0.01) == doctest::Approx(0.05).epsilon(1e-14));   // constant branch
    CHECK(q.value(0.5) == doctest::Approx(0.75).epsilon(1e-14));    // parabola branch
    CHECK(q.value(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.seam_lo() == doctest::Approx(0.025));
    CHECK(q.seam_hi() == doctest::Approx(0.05));
}

TEST_CASE("q_eps blend values match the independently derived interpolant") {
    // Frozen values from a standalone implementation of the two-point
    // Hermite blend (4x4 linear solve in double precision).
    struct Probe {
        double eps, z, value;
    };
    const std::vector<Probe> probes{
        {0.25, 0.09, 0.15075076883455957},
        {0.25, 0.1, 0.17865439999999919},
        {0.125, 0.04, 0.066090463851519926},
        {0.5, 0.2, 0.34149759999999862},
        {0.1, 0.03, 0.050936671999999981},
    };
    for (const auto& p : probes) {
        QEps q = make_q_eps(p.eps);
        CHECK(q.value(p.z) == doctest::Approx(p.value).epsilon(1e-12));
    }
}

TEST_CASE("q_eps seams are C^3") {
    for (double eps : {0.5, 0.25, 0.125, 1.0 / 64.0}) {
        QEps q = make_q_eps(eps);
        for (double seam : {q.seam_lo(), q.seam_hi()}) {
            auto left = q.one_sided(seam, -1);
            auto right = q.one_sided(seam, +1);
            for (int order = 0; order < 4; ++order) {
                // Matching is exact up to the Hermite solve's roundoff, which
                // the 1/h^order derivative scaling amplifies; judge the jump
                // against the blend's characteristic magnitude at that order.
                const double characteristic = eps * std::pow(4.0 / eps, order);
                const double scale =
                    std::max({std::abs(left[order]), characteristic, 1.0});
                CHECK(std::abs(left[order] - right[order]) / scale < 1e-9);
            }
        }
    }
}

TEST_CASE("q_eps derivative sign and envelopes") {
    for (int j = 1; j <= 8; ++j) {
        const double eps = std::ldexp(1.0, -j);
        QEps q = make_q_eps(eps);
        double prev = q.value(0.0);
        for (int i = 1; i <= 2000; ++i) {
            const double z = static_cast<double>(i) / 2000;
            const double cur = q.value(z);
            CHECK(cur >= prev - 1e-13);
            CHECK(cur >= (z + eps) / 4.0 - 1e-13);
            CHECK(cur <= 2.0 * (z + eps) + 1e-13);
            prev = cur;
        }
    }
}

TEST_CASE("profile property certificates hold for the dyadic epsilon table") {
    double prev_dsup = 0.0;
    for (int j = 1; j <= 8; ++j) {
        const double eps = std::ldexp(1.0, -j);
        QEps q = make_q_eps(eps);
        ProfileProperties p = verify_profile_properties(q, 4096);
        CAPTURE(eps);
        CHECK(p.deviation_ok);
        CHECK(p.sup_deviation <= eps);
        CHECK(p.c3_ok);
        CHECK(p.monotone_ok);
        CHECK(p.envelope_ok);
        CHECK(p.derivative_sup_ok);
        CHECK(p.all_ok());
        if (j > 1) {
            // The combined derivative bound must stay of one scale as eps
            // shrinks (no blow-up of the blend).
            CHECK(p.derivative_sup <= 1.5 * std::max(prev_dsup, 1.0) + 1e-12);
        }
        prev_dsup = std::max(prev_dsup, p.derivative_sup);
    }
}

TEST_CASE("q_eps rejects invalid epsilon") {
    CHECK_THROWS_AS(make_q_eps(0.0), ConfigInvalid);
    CHECK_THROWS_AS(make_q_eps(-0.25), ConfigInvalid);
    CHECK_THROWS_AS(make_q_eps(1.0), ConfigInvalid);
}

TEST_CASE("density profiles expose positivity correctly") {
    DensityProfile c = DensityProfile::constant(2.0);
    CHECK(c.rho(0.3) == doctest::Approx(2.0));
    CHECK(c.min_rho() == doctest::Approx(2.0));
    CHECK(c.strictly_positive());

    DensityProfile vac = DensityProfile::physical_vacuum(2.0);
    CHECK(vac.rho(0.0) == doctest::Approx(0.0));
    CHECK(vac.rho(1.0) == doctest::Approx(1.0));
    CHECK(vac.min_rho() == doctest::Approx(0.0));
    CHECK(!vac.strictly_positive());

    DensityProfile reg = DensityProfile::regularized(2.0, 0.125);
    CHECK(reg.min_rho() == doctest::Approx(std::pow(0.0625, 2.0)).epsilon(1e-12));
    CHECK(reg.strictly_positive());
    CHECK(reg.q() != nullptr);
    CHECK(reg.rho(0.5) == doctest::Approx(std::pow(0.75, 2.0)).epsilon(1e-12));
}

TEST_CASE("degenerate density exponents below 3/2 are rejected") {
    CHECK_THROWS_AS(DensityProfile::physical_vacuum(1.5), ConfigInvalid);
    CHECK_THROWS_AS(DensityProfile::physical_vacuum(1.2), ConfigInvalid);
    CHECK_THROWS_AS(DensityProfile::regularized(1.0, 0.25), ConfigInvalid);
    CHECK_NOTHROW(DensityProfile::regularized(1.51, 0.25));
}

TEST_CASE("symmetric periodic extension, even parity") {
    // Samples of f on [0,1] with n=3: f(0)=1, f(1/2)=2, f(1)=3.
    std::vector<double> ext = extend_sp({1.0, 2.0, 3.0}, /*odd=*/false);
    REQUIRE(ext.size() == 4);
    // z = -1, -1/2, 0, 1/2
    CHECK(ext[0] == doctest::Approx(3.0));
    CHECK(ext[1] == doctest::Approx(2.0));
    CHECK(ext[2] == doctest::Approx(1.0));
    CHECK(ext[3] == doctest::Approx(2.0));
}

TEST_CASE("symmetric periodic extension, odd parity") {
    std::vector<double> ext = extend_sp({0.0, 0.7, 0.0}, /*odd=*/true);
    REQUIRE(ext.size() == 4);
    CHECK(ext[0] == doctest::Approx(0.0));
    CHECK(ext[1] == doctest::Approx(-0.7));
    CHECK(ext[2] == doctest::Approx(0.0));
    CHECK(ext[3] == doctest::Approx(0.7));
}

TEST_CASE("odd extension requires vanishing endpoint data") {
    CHECK_THROWS_AS(extend_sp({0.5, 0.7, 0.0}, /*odd=*/true), OddParityNonzeroAtOrigin);
}
