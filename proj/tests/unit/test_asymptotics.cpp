#include <doctest.h>

#include <cmath>

#include "ccbell/asymptotics.hpp"
#include "ccbell/errors.hpp"

using namespace ccbell;

namespace {

AsymptoticFamily vsp(double c = 1.0) {
    AsymptoticFamily f;
    f.kind = AsymptoticFamily::Kind::Vsp;
    f.c = c;
    return f;
}

AsymptoticFamily phm(double cp = 1.0, double cpp = 1.0, double alpha = 1.0) {
    AsymptoticFamily f;
    f.kind = AsymptoticFamily::Kind::AlphaPhm;
    f.c_prime = cp;
    f.c_double_prime = cpp;
    f.alpha = alpha;
    return f;
}

}  // namespace

TEST_CASE("family validation and description") {
    CHECK_NOTHROW(vsp().validate());
    CHECK_THROWS_AS(vsp(0.0).validate(), InputError);
    CHECK_THROWS_AS(phm(1.0, -1.0).validate(), InputError);
    CHECK_THROWS_AS(phm(1.0, 1.0, 0.5).validate(), InputError);
    CHECK(vsp(2.0).describe() == "vsp c=2");
    CHECK(phm(1.0, 3.0, 2.0).describe() == "alpha-phm c'=1 c''=3 alpha=2");
}

TEST_CASE("VSP inequality at n = 10^6") {
    const AsymptoticVerdict v = asymptotic_vsp(1e6, 1.0, 0.01, vsp());
    CHECK(v.rhs == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(v.lhs == doctest::Approx(6 * std::log2(10.0) + std::log2(2 * std::log2(10.0))).epsilon(1e-12));
    CHECK(v.lhs == doctest::Approx(22.66).epsilon(1e-3));
    CHECK(v.violated);
    CHECK_THROWS_AS(asymptotic_vsp(1.0, 1.0, 0.01, vsp()), InputError);
    CHECK_THROWS_AS(asymptotic_vsp(1e6, 1.0, 1.0, vsp()), InputError);
    // With no advantage over guessing the bound is zero.
    CHECK_FALSE(asymptotic_vsp(1e6, 0.5, 0.01, vsp()).violated);
}

TEST_CASE("VSP rhs model") {
    const RhsModel m = vsp_rhs(1e6, vsp(2.0));
    CHECK(m.source == RhsSource::AsymptoticFormula);
    CHECK(m.complexity(0.9) == doctest::Approx(200.0));
    CHECK(m.complexity(2.0 / 3.0) == doctest::Approx(200.0 / 108.0));
    CHECK(m.complexity(0.5) == 0.0);
}

TEST_CASE("best delta for the VSP inequality") {
    const auto best = asymptotic_vsp_best(1024.0, 1.0, vsp(), default_delta_grid());
    CHECK(best.delta == 0.5);
    CHECK(best.violated);
    CHECK_FALSE(asymptotic_vsp_best(512.0, 1.0, vsp(), default_delta_grid()).violated);
    CHECK_THROWS_AS(asymptotic_vsp_best(512.0, 1.0, vsp(), {}), InputError);
}

TEST_CASE("alpha-PHM inequality") {
    const AsymptoticVerdict v = asymptotic_phm(1e6, 0.5, phm());
    CHECK(v.lhs == doctest::Approx(std::log2(1e6)));
    CHECK(v.rhs == doctest::Approx(1000.0 / 432.0));
    CHECK_FALSE(v.violated);
    const AsymptoticVerdict a = asymptotic_phm(1e6, 0.25, phm(2.0, 5.0, 4.0));
    CHECK(a.lhs == doctest::Approx(2.0 * std::log2(1e6) / 4.0 + 1.0));
    CHECK(a.rhs == doctest::Approx(std::pow(0.75 / 6.0, 2) / 3.0 * 5.0 * 500.0));
}

TEST_CASE("alpha-PHM crossover agrees with a linear scan") {
    for (double cpp : {50.0, 200.0, 1000.0}) {
        for (double delta : {0.5, 0.1}) {
            const AsymptoticFamily f = phm(1.0, cpp);
            double scan = 2.0;
            while (!asymptotic_phm(scan, delta, f).violated) scan += 1.0;
            const auto found = phm_crossover(delta, f);
            REQUIRE(found.has_value());
            CAPTURE(cpp);
            CHECK(*found == scan);
        }
    }
    CHECK_FALSE(phm_crossover(0.5, phm(), 1e3).has_value());
    const auto big = phm_crossover(0.5, phm());
    REQUIRE(big.has_value());
    CHECK(asymptotic_phm(*big, 0.5, phm()).violated);
    CHECK_FALSE(asymptotic_phm(*big - 1.0, 0.5, phm()).violated);
}

TEST_CASE("grids") {
    CHECK(power_of_two_grid(0, 3) == std::vector<double>{1, 2, 4, 8});
    CHECK(uniform_grid(0.0, 1.0, 5) == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    CHECK(uniform_grid(0.3, 1.0, 1) == std::vector<double>{0.3});
    CHECK_THROWS_AS(uniform_grid(0, 1, 0), InputError);
    const auto dense = dense_half_delta_grid();
    CHECK(dense.size() == 1951);
    CHECK(dense.front() == 0.5);
    CHECK(dense.back() == doctest::Approx(std::exp2(-40.0)));
    for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i] < dense[i - 1]);
}

TEST_CASE("crossover on a grid needs a violated tail") {
    const std::vector<double> g{1, 2, 3, 4, 5};
    CHECK(crossover_on_grid(g, [](double n) { return n == 2 || n >= 4; }) == 4.0);
    CHECK_FALSE(crossover_on_grid(g, [](double n) { return n < 5; }).has_value());
    CHECK(crossover_on_grid(g, [](double) { return true; }) == 1.0);
}

TEST_CASE("region classification") {
    const CurveRow row{0.9, 10.0, 4.0, Region::Classical};
    CHECK(classify(3.9, row) == Region::Detected);
    CHECK(classify(4.0, row) == Region::AdvantageOnly);
    CHECK(classify(9.99, row) == Region::AdvantageOnly);
    CHECK(classify(10.0, row) == Region::Classical);
    CHECK(to_string(Region::AdvantageOnly) == "advantage-only");
}

TEST_CASE("property: VSP curves are ordered and nondecreasing") {
    for (double n : {1e3, 1e4, 1e6}) {
        const auto rows = vsp_curves(n, vsp(), uniform_grid(0.0, 1.0, 101));
        REQUIRE(rows.size() == 101);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].boundary >= 0.0);
            CHECK(rows[i].boundary <= rows[i].complexity + 1e-12);
            CHECK(rows[i].construction_region == classify(std::log2(n), rows[i]));
            if (i > 0) {
                CHECK(rows[i].complexity >= rows[i - 1].complexity);
                CHECK(rows[i].boundary >= rows[i - 1].boundary);
            }
        }
        CHECK(rows.back().complexity == doctest::Approx(std::cbrt(n)));
        CHECK(rows.front().complexity == 0.0);
    }
}

TEST_CASE("boundary uses the best delta at or below 1/2") {
    // At p_B = 1 the target at delta = 1/2 is 3/4, so C is already saturated
    // and smaller deltas only pay log log.
    const auto rows = vsp_curves(1e6, vsp(), {1.0});
    CHECK(rows[0].boundary == doctest::Approx(100.0));
    CHECK(rows[0].construction_region == Region::Detected);
    // A delta above 1/2 in the grid is ignored.
    const auto only_big = vsp_curves(1e6, vsp(), {1.0}, {0.6});
    CHECK(only_big[0].boundary == 0.0);
}

TEST_CASE("alpha-PHM curves") {
    const auto rows = phm_curves(1e6, phm(1.0, 1.0, 1.0), uniform_grid(0.5, 1.0, 51));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].complexity >= rows[i - 1].complexity);
        CHECK(rows[i].boundary <= rows[i].complexity + 1e-12);
    }
    CHECK(rows.back().complexity == doctest::Approx(1000.0));
    CHECK(rows.back().construction_region == Region::Detected);
}

TEST_CASE("VSP rhs limits") {
    CHECK(asymptotic_vsp(1e6, 0.5, 0.25, vsp()).rhs == 0.0);
    // delta -> 1 pushes the target down to 1/2 and the bound to 0.
    CHECK(asymptotic_vsp(1e6, 1.0, 1.0 - 1e-9, vsp()).rhs < 1e-12);
}

TEST_CASE("alpha-PHM rhs is linear in c''") {
    for (double n : {1e3, 1e6, 1e9}) {
        const double one = asymptotic_phm(n, 0.1, phm(1.0, 1.0)).rhs;
        CHECK(asymptotic_phm(n, 0.1, phm(1.0, 2.0)).rhs == doctest::Approx(2.0 * one).epsilon(1e-14));
    }
}

TEST_CASE("curves vanish at p_B = 1/2") {
    for (const auto& rows : {vsp_curves(1e4, vsp(), {0.5}), phm_curves(1e4, phm(), {0.5})}) {
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].complexity == 0.0);
        CHECK(rows[0].boundary == 0.0);
    }
}
