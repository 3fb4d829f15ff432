#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ccbell/classical_cc.hpp"
#include "ccbell/errors.hpp"
#include "oracles.hpp"

using namespace ccbell;

namespace {

// Success of an explicit protocol, scored directly from the problem.
double score(const CommProblem& p, const OptimalProtocol& proto) {
    double s = 0.0;
    for (std::size_t x = 0; x < p.num_x(); ++x)
        for (std::size_t y = 0; y < p.num_y(); ++y) {
            const int out = proto.decoder[static_cast<std::size_t>(proto.encoder[x]) * p.num_y() + y];
            if (p.in_support(x, y) && p.valid(x, y).contains(out)) s += p.mu(x, y);
        }
    return s;
}

CommProblem permuted(const CommProblem& p, const std::vector<std::size_t>& px, const std::vector<std::size_t>& py) {
    std::vector<std::string> xs, ys;
    for (auto i : px) xs.push_back(p.x_labels()[i]);
    for (auto j : py) ys.push_back(p.y_labels()[j]);
    std::vector<double> mu;
    std::vector<OutputSet> valid;
    for (auto i : px)
        for (auto j : py) {
            mu.push_back(p.mu(i, j));
            valid.push_back(p.valid(i, j));
        }
    return CommProblem(xs, ys, mu, valid, p.n());
}

}  // namespace

TEST_CASE("partition counts are sums of Stirling numbers") {
    CHECK(partition_count(0, 1) == 1.0);
    CHECK(partition_count(4, 1) == 1.0);
    CHECK(partition_count(4, 2) == 8.0);
    CHECK(partition_count(5, 5) == 52.0);
    CHECK(partition_count(5, 100) == 52.0);
    CHECK(partition_count(10, 10) == 115975.0);
}

TEST_CASE("rac21 optimum by bit budget") {
    const CommProblem p = rac21();
    CHECK(optimal_success(p, 0) == doctest::Approx(0.5));
    CHECK(optimal_success(p, 1) == doctest::Approx(0.75));
    CHECK(optimal_success(p, 2) == doctest::Approx(1.0));
    CHECK(optimal_success(p, 5) == doctest::Approx(1.0));
    CHECK(full_disclosure_bits(p) == 2);
    const auto proto = optimal_protocol(p, 1);
    CHECK(proto.messages <= 2);
    CHECK(score(p, proto) == doctest::Approx(proto.success));
}

TEST_CASE("bad budgets and the partition guard") {
    CHECK_THROWS_AS(optimal_success(rac21(), -1), InputError);
    std::mt19937_64 rng(3);
    const CommProblem big = oracle::random_problem(16, 1, rng);
    CHECK(partition_count(16, 16) > kPartitionGuard);
    CHECK_THROWS_AS(optimal_success(big, 4), GuardExceeded);
    // Two blocks keep the count at 2^15 and the search runs.
    CHECK_NOTHROW(optimal_success(big, 1));
}

TEST_CASE("exhaustive search matches the brute-force oracle") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t nx = 2 + trial % 4, ny = 1 + trial % 3;
        const CommProblem p = oracle::random_problem(nx, ny, rng);
        for (int bits = 0; bits <= (nx <= 4 ? 2 : 1); ++bits) {
            const auto proto = optimal_protocol(p, bits);
            CAPTURE(trial);
            CAPTURE(bits);
            CHECK(proto.success == doctest::Approx(oracle::brute_force_success(p, 1 << bits)).epsilon(1e-12));
            CHECK(score(p, proto) == doctest::Approx(proto.success).epsilon(1e-12));
            CHECK(proto.messages <= (1 << bits));
        }
    }
}

TEST_CASE("property: success is nondecreasing in bits and full disclosure is optimal") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const CommProblem p = oracle::random_problem(2 + trial % 5, 1 + trial % 3, rng);
        double prev = -1.0;
        const int full = full_disclosure_bits(p);
        for (int bits = 0; bits <= full + 1; ++bits) {
            const double s = optimal_success(p, bits);
            CHECK(s >= prev - 1e-15);
            prev = s;
        }
        // With x announced Bob answers every support pair correctly.
        CHECK(optimal_success(p, full) == doctest::Approx(1.0));
    }
}

TEST_CASE("property: relabelling inputs does not change the optimum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t nx = 3 + trial % 3, ny = 2 + trial % 2;
        const CommProblem p = oracle::random_problem(nx, ny, rng);
        std::vector<std::size_t> px(nx), py(ny);
        std::iota(px.begin(), px.end(), 0);
        std::iota(py.begin(), py.end(), 0);
        std::shuffle(px.begin(), px.end(), rng);
        std::shuffle(py.begin(), py.end(), rng);
        const CommProblem q = permuted(p, px, py);
        for (int bits = 0; bits <= 1; ++bits)
            CHECK(optimal_success(q, bits) == doctest::Approx(optimal_success(p, bits)).epsilon(1e-12));
    }
}

TEST_CASE("property: result is independent of the worker count") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        const CommProblem p = oracle::random_problem(8 + trial % 3, 3, rng);
        const auto one = optimal_protocol(p, 2, {.workers = 1});
        for (unsigned w : {2U, 3U, 8U}) {
            const auto many = optimal_protocol(p, 2, {.workers = w});
            CHECK(many.success == one.success);  // bitwise
            CHECK(many.encoder == one.encoder);
            CHECK(many.decoder == one.decoder);
        }
    }
}

TEST_CASE("complexity and exact curves") {
    const CommProblem p = rac21();
    CHECK(complexity(p, 0.5) == 0);
    CHECK(complexity(p, 0.75) == 1);
    CHECK(complexity(p, 0.76) == 2);
    CHECK(complexity(p, 1.0) == 2);
    CHECK_FALSE(complexity(p, 1.01).has_value());
    const CCCurve curve = exact_curve(p, "rac21");
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.source == CurveSource::ExactSearch);
    CHECK(curve.problem_id == "rac21");
    CHECK(curve.complexity(0.6) == 1);
    CHECK(curve.complexity(0.9) == 2);
    CHECK_FALSE(curve.complexity(1.5).has_value());
    CHECK(curve.max_success(0) == doctest::Approx(0.5));
    CHECK(curve.max_success(7) == doctest::Approx(1.0));
}

TEST_CASE("amplification by majority vote") {
    CHECK(repetitions_needed(1.0 / 6.0) == 108);
    CHECK(repetitions_needed(0.5) == 12);
    CHECK(repetitions_needed(0.1) == 300);
    CHECK_THROWS_AS(repetitions_needed(0.0), InputError);
    CHECK_THROWS_AS(repetitions_needed(0.6), InputError);
    CHECK_THROWS_AS(repetitions_needed(-0.1), InputError);

    const double c = 540.0;
    CHECK(pumped_bound(c, 0.5) == 0.0);
    CHECK(pumped_bound(c, 0.3) == 0.0);
    CHECK(pumped_bound(c, 2.0 / 3.0) == doctest::Approx(c / 108.0));
    CHECK(pumped_bound(c, 0.6) == doctest::Approx(0.01 / 3.0 * c));
    CHECK(pumped_bound(c, 0.7) == c);
    CHECK(pumped_bound(c, 1.0) == c);
}

TEST_CASE("property: pumped bound is nondecreasing in p") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double c = 1.0 + 1000.0 * u(rng);
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        CHECK(pumped_bound(c, a) <= pumped_bound(c, b));
    }
}

TEST_CASE("zero target needs no communication") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) CHECK(complexity(oracle::random_problem(3, 2, rng), 0.0) == 0);
    CHECK(pumped_bound(108.0, 2.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pumped_bound(108.0, 0.9) == 108.0);
}
