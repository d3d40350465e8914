#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lfdecay/consistency.hpp"

using namespace lfdecay;

TEST_CASE("commutator coefficient reference values") {
    CHECK(commutator_coefficient(1.0) == 1.0);
    // default medium: eps_static = 1.2116, coefficient 1 + 0.2116/9
    CHECK(commutator_coefficient(1.2116) == Catch::Approx(1.0 + 0.2116 / 9.0).epsilon(1e-15));
    CHECK(commutator_coefficient(1.2116) == Catch::Approx(1.0235111111111111).epsilon(1e-12));
    // eps_static = 10: spurious term equals the canonical one
    CHECK(commutator_coefficient(10.0) == 2.0);
}

TEST_CASE("validity margin classification") {
    const ValidityMargin a = validity_margin(1.2116);
    CHECK(a.rho == Catch::Approx(0.2116 / 9.0).epsilon(1e-15));
    CHECK(a.cls == ValidityClass::Strict);

    const ValidityMargin b = validity_margin(10.0);
    CHECK(b.rho == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(b.cls == ValidityClass::Violated);

    const ValidityMargin c = validity_margin(2.0, StructureConstant{1.0 / 3.0});
    CHECK(c.rho == Catch::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(c.cls == ValidityClass::Marginal);

    CHECK(std::string(to_string(a.cls)) == "strict");
    CHECK(std::string(to_string(b.cls)) == "violated");
    CHECK(std::string(to_string(c.cls)) == "marginal");
}

TEST_CASE("coefficient and margin are tied and monotone") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> eps_dist(1.0, 20.0);
    std::uniform_real_distribution<double> s_dist(-1.0, 2.0);
    double prev_coeff = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double es = eps_dist(rng);
        const StructureConstant s{s_dist(rng)};
        const double coeff = commutator_coefficient(es, s);
        const ValidityMargin m = validity_margin(es, s);
        CHECK(coeff == 1.0 + m.rho); // tied exactly, same rounding path
        (void)prev_coeff;
    }

    // monotone in eps_static at fixed s
    for (const double s : {0.0, 0.5, -0.2}) {
        double prev = commutator_coefficient(1.0, StructureConstant{s});
        for (double es = 1.5; es < 12.0; es += 0.5) {
            const double cur = commutator_coefficient(es, StructureConstant{s});
            CHECK(cur >= prev);
            prev = cur;
        }
    }
    // monotone in |alpha| at fixed eps_static
    {
        double prev = commutator_coefficient(3.0, StructureConstant{0.0});
        for (double s = 0.1; s < 2.0; s += 0.1) {
            const double cur = commutator_coefficient(3.0, StructureConstant{s});
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("cubic symmetry reduces to the plain coefficient") {
    for (double es = 1.0; es <= 10.0; es += 0.25) {
        CHECK(commutator_coefficient(es, StructureConstant{0.0}) ==
              1.0 + (es - 1.0) / 9.0);
    }
}

TEST_CASE("nonphysical static permittivity rejected") {
    CHECK_THROWS_AS(commutator_coefficient(0.99), std::invalid_argument);
    CHECK_THROWS_AS(validity_margin(-1.0), std::invalid_argument);
}
