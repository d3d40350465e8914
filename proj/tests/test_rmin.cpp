#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lfdecay/rmin.hpp"

using namespace lfdecay;

TEST_CASE("spectrum grid") {
    const SpectrumGrid g(0.5, 1.5, 5);
    CHECK(g.point(0) == 0.5);
    CHECK(g.point(4) == 1.5);
    CHECK(g.point(2) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(SpectrumGrid(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(SpectrumGrid(1.0, 0.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(SpectrumGrid(0.5, 1.5, 1), std::invalid_argument);

    // defaults bracket the resonance and the band edge of the reference medium
    const LorentzMedium ref(1.0, 0.46, 0.1);
    CHECK(SpectrumGrid::figures_default().covers_bandgap(ref));
    CHECK(SpectrumGrid::rmin_default().covers_bandgap(ref));
    CHECK(ref.omega_l() == Catch::Approx(std::sqrt(1.0 + 0.46 * 0.46)).epsilon(1e-15));
}

TEST_CASE("minimum transverse rate over the spectrum") {
    const SpectrumGrid grid = SpectrumGrid::rmin_default();
    SECTION("gamma = 0.01, r = 30 admissible") {
        const GridMinimum m = min_gamma_perp(0.01, 30.0, grid);
        CHECK(m.value > 0.0);
    }
    SECTION("gamma = 0.01, r = 10 excluded, dip near the resonance") {
        const GridMinimum m = min_gamma_perp(0.01, 10.0, grid);
        CHECK(m.value < 0.0);
        // the negative window straddles omega_t: its minimum sits a hair
        // below the resonance, inside (0.995, omega_l)
        CHECK(m.omega_star > 0.995);
        CHECK(m.omega_star < std::sqrt(1.0 + 0.46 * 0.46));
    }
    SECTION("vacuum coupling never leaves 1") {
        for (double r : {1.0, 10.0, 50.0}) {
            const GridMinimum m =
                min_gamma_perp(LorentzMedium(1.0, 0.0, 0.01), r, SpectrumGrid(0.5, 1.5, 64));
            CHECK(m.value == Catch::Approx(1.0).margin(1e-14));
        }
    }
}

TEST_CASE("find_r_min at gamma = 0.01") {
    const SpectrumGrid grid = SpectrumGrid::rmin_default();
    const double tol = 1e-6;
    const RminResult res = find_r_min(0.01, grid, tol);

    CHECK(res.r_min > 10.0);
    CHECK(res.r_min < 20.0);
    CHECK(res.gamma == 0.01);

    // the touching frequency lies in the polariton gap
    CHECK(res.omega_critical > 1.0);
    CHECK(res.omega_critical < std::sqrt(1.0 + 0.46 * 0.46));
    CHECK(std::abs(res.min_value) < 1e-2);

    // two-sided sign invariant at +-10 tol
    CHECK(min_gamma_perp(0.01, res.r_min * (1.0 + 10.0 * tol), grid).value > 0.0);
    CHECK(min_gamma_perp(0.01, res.r_min * (1.0 - 10.0 * tol), grid).value < 0.0);

    SECTION("restart stability: independent of the initial bracket") {
        const RminResult a = find_r_min(0.01, grid, tol, 3.0);
        const RminResult b = find_r_min(0.01, grid, tol, 64.0);
        CHECK(std::abs(a.r_min - res.r_min) <= tol * res.r_min);
        CHECK(std::abs(b.r_min - res.r_min) <= tol * res.r_min);
    }
    SECTION("grid convergence: 2000 -> 4000 points") {
        const RminResult fine = find_r_min(0.01, SpectrumGrid(0.5, 1.5, 4000), tol);
        CHECK(std::abs(fine.r_min - res.r_min) / res.r_min < 10.0 * tol);
    }
}

TEST_CASE("find_r_min error paths") {
    const SpectrumGrid grid(0.5, 1.5, 256);
    SECTION("vacuum never constrains") {
        CHECK_THROWS_AS(find_r_min(LorentzMedium(1.0, 0.0, 0.01), grid), no_sign_change_error);
    }
    SECTION("heavily damped medium never constrains") {
        CHECK_THROWS_AS(find_r_min(0.5, SpectrumGrid::rmin_default()), no_sign_change_error);
    }
    SECTION("tolerance validation") {
        CHECK_THROWS_AS(find_r_min(0.01, grid, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(find_r_min(0.01, grid, 0.5), std::invalid_argument);
    }
}

TEST_CASE("rmin curve rows") {
    const SpectrumGrid grid = SpectrumGrid::rmin_default();
    SECTION("single gamma equals find_r_min") {
        const auto rows = rmin_curve({0.02}, grid, 1e-6);
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0].status == "ok");
        const RminResult direct = find_r_min(0.02, grid, 1e-6);
        CHECK(rows[0].result->r_min == Catch::Approx(direct.r_min).epsilon(1e-9));
    }
    SECTION("duplicate gammas give identical rows") {
        const auto rows = rmin_curve({0.05, 0.05}, grid, 1e-6);
        REQUIRE(rows.size() == 2);
        REQUIRE(rows[0].status == "ok");
        REQUIRE(rows[1].status == "ok");
        CHECK(rows[0].result->r_min == rows[1].result->r_min);
    }
    SECTION("unconstrained damping is recorded, not fatal") {
        const auto rows = rmin_curve({0.05, 0.5}, grid, 1e-6);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].status == "ok");
        CHECK(rows[1].status == "no_sign_change");
        CHECK_FALSE(rows[1].result.has_value());
    }
}
