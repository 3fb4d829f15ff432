#include <doctest.h>

#include <random>

#include "ccbell/errors.hpp"
#include "ccbell/problems.hpp"
#include "oracles.hpp"

using namespace ccbell;

TEST_CASE("OutputSet basics") {
    CHECK(OutputSet::none().empty());
    CHECK(OutputSet::only(0).contains(0));
    CHECK_FALSE(OutputSet::only(0).contains(1));
    CHECK(OutputSet::only(1).is_singleton());
    CHECK(OutputSet::any().contains(0));
    CHECK(OutputSet::any().contains(1));
    CHECK_FALSE(OutputSet::any().is_singleton());
    CHECK(OutputSet::only(0).with(1) == OutputSet::any());
}

TEST_CASE("rac21 encodes x_y with x read as x1x0") {
    const CommProblem p = rac21();
    REQUIRE(p.num_x() == 4);
    REQUIRE(p.num_y() == 2);
    CHECK(p.n() == 2);
    CHECK(p.is_function());
    for (std::size_t x = 0; x < 4; ++x) {
        const std::string& lab = p.x_labels()[x];
        const int x0 = lab[1] - '0', x1 = lab[0] - '0';
        CHECK(p.mu(x, 0) == doctest::Approx(0.125));
        CHECK(p.valid(x, p.y_index("0")) == OutputSet::only(x0));
        CHECK(p.valid(x, p.y_index("1")) == OutputSet::only(x1));
    }
    CHECK(p.support().size() == 8);
}

TEST_CASE("constructor rejects broken problems") {
    const std::vector<std::string> xs{"a", "b"}, ys{"0"};
    const std::vector<OutputSet> ok_valid{OutputSet::only(0), OutputSet::only(1)};
    CHECK_NOTHROW(CommProblem(xs, ys, {0.5, 0.5}, ok_valid, 1));
    CHECK_THROWS_AS(CommProblem({}, ys, {}, {}, 1), InputError);
    CHECK_THROWS_AS(CommProblem({"a", "a"}, ys, {0.5, 0.5}, ok_valid, 1), InputError);
    CHECK_THROWS_AS(CommProblem(xs, ys, {0.5}, {OutputSet::only(0)}, 1), InputError);
    CHECK_THROWS_AS(CommProblem(xs, ys, {-0.1, 1.1}, ok_valid, 1), InputError);
    CHECK_THROWS_AS(CommProblem(xs, ys, {0.5, 0.6}, ok_valid, 1), InputError);
    CHECK_THROWS_AS(CommProblem(xs, ys, {0.5, 0.5}, {OutputSet::none(), OutputSet::only(1)}, 1), InputError);
    // An empty valid-set is fine off the support.
    CHECK_NOTHROW(CommProblem(xs, ys, {0.0, 1.0}, {OutputSet::none(), OutputSet::only(1)}, 1));
}

TEST_CASE("mu within tolerance is renormalized") {
    const CommProblem p({"a", "b"}, {"0"}, {0.5, 0.5 + 5e-10}, {OutputSet::only(0), OutputSet::only(1)}, 1);
    CHECK(p.mu(0, 0) + p.mu(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("unknown labels are input errors") {
    CHECK_THROWS_AS(rac21().x_index("22"), InputError);
    CHECK_THROWS_AS(rac21().y_index("2"), InputError);
}

TEST_CASE("JSON round trip preserves the problem") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const CommProblem p = oracle::random_problem(3 + trial % 3, 2 + trial % 2, rng);
        const CommProblem q = problem_from_json_text(problem_to_json(p).dump());
        // Reparsing may renormalize mu by one rounding step; the rest is exact.
        CHECK(q.x_labels() == p.x_labels());
        CHECK(q.y_labels() == p.y_labels());
        CHECK(q.n() == p.n());
        for (std::size_t x = 0; x < p.num_x(); ++x)
            for (std::size_t y = 0; y < p.num_y(); ++y) {
                CHECK(q.valid(x, y) == p.valid(x, y));
                CHECK(q.mu(x, y) == doctest::Approx(p.mu(x, y)).epsilon(1e-15));
            }
    }
    CHECK(problem_from_json(problem_to_json(rac21())) == rac21());
}

TEST_CASE("JSON accepts every valid-set encoding") {
    const auto p = problem_from_json_text(R"({"x":["a","b","c","d"],"y":[0],
        "mu":[[0.25],[0.25],[0.25],[0.25]],"valid":[[0],["any"],[[1]],[[0,1]]],"n":2})");
    CHECK(p.valid(0, 0) == OutputSet::only(0));
    CHECK(p.valid(1, 0) == OutputSet::any());
    CHECK(p.valid(2, 0) == OutputSet::only(1));
    CHECK(p.valid(3, 0) == OutputSet::any());
    CHECK(p.y_labels()[0] == "0");
    const auto off = problem_from_json_text(R"({"x":["a","b"],"y":["y"],"mu":[[1],[0]],"valid":[[1],[null]],"n":1})");
    CHECK(off.valid(1, 0).empty());
}

TEST_CASE("JSON errors are input errors") {
    CHECK_THROWS_AS(problem_from_json_text("{not json"), InputError);
    CHECK_THROWS_AS(problem_from_json_text("[]"), InputError);
    CHECK_THROWS_AS(problem_from_json_text(R"({"x":["a"],"y":["b"],"mu":[[1]],"n":1})"), InputError);
    CHECK_THROWS_AS(problem_from_json_text(R"({"x":["a"],"y":["b"],"mu":[[1]],"valid":[[2]],"n":1})"),
                    InputError);
    CHECK_THROWS_AS(problem_from_json_text(R"({"x":["a"],"y":["b"],"mu":[[1, 0]],"valid":[[1]],"n":1})"),
                    InputError);
    CHECK_THROWS_AS(problem_from_json_text(R"({"x":["a"],"y":["b"],"mu":[["1"]],"valid":[[1]],"n":1})"),
                    InputError);
    CHECK_THROWS_AS(problem_from_json_text(R"({"x":["a"],"y":["b"],"mu":[[1]],"valid":[["some"]],"n":1})"),
                    InputError);
}

TEST_CASE("success_probability scores strategy tables") {
    const CommProblem p = rac21();
    Strategy perfect(8), wrong(8), zero(8, 0);
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            perfect[x * 2 + y] = p.valid(x, y).contains(1) ? 1 : 0;
            wrong[x * 2 + y] = 1 - perfect[x * 2 + y];
        }
    CHECK(success_probability(p, perfect) == doctest::Approx(1.0));
    CHECK(success_probability(p, wrong) == doctest::Approx(0.0));
    CHECK(success_probability(p, zero) == doctest::Approx(0.5));
    CHECK_THROWS_AS(success_probability(p, Strategy(7, 0)), InputError);
    Strategy bad = zero;
    bad[3] = 2;
    CHECK_THROWS_AS(success_probability(p, bad), InputError);
}

TEST_CASE("rac21 spot values") {
    const CommProblem p = rac21();
    CHECK(p.valid(p.x_index("01"), p.y_index("0")) == OutputSet::only(1));
    CHECK(p.valid(p.x_index("00"), p.y_index("0")) == OutputSet::only(0));
    CHECK(p.valid(p.x_index("00"), p.y_index("1")) == OutputSet::only(0));
    double total = 0.0;
    for (auto [x, y] : p.support()) total += p.mu(x, y);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("strategies inside every valid-set score 1") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const CommProblem p = oracle::random_problem(3, 3, rng);
        Strategy s(9, 0);
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 3; ++y) s[x * 3 + y] = p.valid(x, y).contains(0) ? 0 : 1;
        CHECK(success_probability(p, s) == doctest::Approx(1.0));
    }
}
