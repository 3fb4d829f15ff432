#include <doctest.h>

#include <cmath>
#include <random>

#include "ccbell/errors.hpp"
#include "ccbell/local_polytope.hpp"
#include "ccbell/quantum.hpp"
#include "oracles.hpp"

using namespace ccbell;

namespace {

const std::vector<std::string> kX{"00", "01", "10", "11"};
const std::vector<std::string> kY{"0", "1"};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double brute_local_max(const std::vector<double>& f, const std::vector<std::string>& xs,
                       const std::vector<std::string>& ys) {
    double best = -1e300;
    for (const auto& b : oracle::all_deterministic_boxes(xs, ys)) best = std::max(best, dot(f, b.table()));
    return best;
}

void check_decomposition(const CorrelationBox& box, const LhvResult& r) {
    REQUIRE(r.verdict == LhvVerdict::Feasible);
    double total = 0.0;
    for (const auto& [s, w] : r.weights) {
        CHECK(w >= 0.0);
        total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto rec = reconstruct(r.weights, box.num_x(), box.num_y());
    double err = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) err = std::max(err, std::abs(rec[i] - box.table()[i]));
    CHECK(err < 1e-8);
}

void check_certificate(const CorrelationBox& box, const LhvResult& r) {
    REQUIRE(r.verdict == LhvVerdict::Infeasible);
    CHECK(r.margin > kLhvFeasibilityTolerance);
    CHECK(dot(r.certificate, box.table()) == doctest::Approx(r.certificate_box_value).epsilon(1e-9));
    CHECK(r.certificate_box_value == doctest::Approx(r.margin).epsilon(1e-6));
    const double lm = brute_local_max(r.certificate, box.x_labels(), box.y_labels());
    CHECK(lm == doctest::Approx(r.certificate_local_max).epsilon(1e-9));
    CHECK(lm < 1e-9);
    CHECK(r.certificate_box_value > lm + kLhvFeasibilityTolerance);
}

CorrelationBox pr_box() {
    std::vector<double> t(16, 0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a) t[CorrelationBox::offset(2, x, y, a, a ^ static_cast<int>(x * y))] = 0.5;
    return CorrelationBox({"0", "1"}, {"0", "1"}, t);
}

}  // namespace

TEST_CASE("local maximum matches enumeration") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<std::string> xs(kX.begin(), kX.begin() + 1 + trial % 4);
        const std::vector<std::string> ys = trial % 2 ? kY : std::vector<std::string>{"0", "1", "2"};
        std::vector<double> f(xs.size() * ys.size() * 4);
        for (auto& v : f) v = g(rng);
        const LocalMaximum lm = local_maximum(f, xs.size(), ys.size());
        CHECK(lm.value == doctest::Approx(brute_local_max(f, xs, ys)).epsilon(1e-12));
        std::vector<int> a(xs.size()), b(ys.size());
        for (std::size_t x = 0; x < xs.size(); ++x) a[x] = lm.argmax.a(x);
        for (std::size_t y = 0; y < ys.size(); ++y) b[y] = lm.argmax.b(y);
        CHECK(dot(f, CorrelationBox::deterministic(xs, ys, a, b).table()) == doctest::Approx(lm.value));
    }
}

TEST_CASE("every deterministic box is local") {
    for (const auto& box : oracle::all_deterministic_boxes(kX, kY)) {
        const LhvResult r = lhv_membership(box);
        check_decomposition(box, r);
        CHECK(r.margin <= kLhvFeasibilityTolerance);
    }
}

TEST_CASE("property: random local mixtures are feasible and reconstruct") {
    std::mt19937_64 rng(2718);
    const auto boxes = oracle::all_deterministic_boxes(kX, kY);
    for (int trial = 0; trial < 300; ++trial) {
        const auto box = oracle::random_mixture(boxes, 1 + trial % 12, rng);
        check_decomposition(box, lhv_membership(box));
    }
    const std::vector<std::string> xs{"a", "b", "c"}, ys{"p", "q", "r"};
    const auto boxes3 = oracle::all_deterministic_boxes(xs, ys);
    for (int trial = 0; trial < 50; ++trial) {
        const auto box = oracle::random_mixture(boxes3, 2 + trial % 10, rng);
        check_decomposition(box, lhv_membership(box));
    }
}

TEST_CASE("nonlocal boxes come with separating certificates") {
    const CommProblem p = rac21();
    const auto q = box_from_protocol(rac_quantum_protocol(), phi_plus(2), p);
    check_certificate(q, lhv_membership(q));
    check_certificate(pr_box(), lhv_membership(pr_box()));
    // A signaling box is outside the local polytope too.
    std::vector<double> t(32, 0.0);
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 2; ++y) t[CorrelationBox::offset(2, x, y, static_cast<int>(y), 0)] = 1.0;
    const CorrelationBox signaling(kX, kY, t);
    check_certificate(signaling, lhv_membership(signaling));
}

TEST_CASE("Werner boxes cross the local boundary at 1/sqrt2") {
    const CommProblem p = rac21();
    const auto proto = rac_quantum_protocol();
    const auto near_local = box_from_protocol(proto, werner(0.70), p);
    check_decomposition(near_local, lhv_membership(near_local));
    const auto beyond = box_from_protocol(proto, werner(0.72), p);
    check_certificate(beyond, lhv_membership(beyond));
}

TEST_CASE("strategy-count guard") {
    std::vector<std::string> xs, ys;
    for (int i = 0; i < 13; ++i) xs.push_back("x" + std::to_string(i));
    for (int i = 0; i < 12; ++i) ys.push_back("y" + std::to_string(i));
    const CorrelationBox big(xs, ys, std::vector<double>(xs.size() * ys.size() * 4, 0.25));
    CHECK_THROWS_AS(lhv_membership(big), GuardExceeded);
}

TEST_CASE("deterministic boxes decompose with a single unit weight") {
    for (const auto& box : oracle::all_deterministic_boxes(kX, kY)) {
        const LhvResult r = lhv_membership(box);
        REQUIRE(r.weights.size() == 1);
        CHECK(r.weights[0].second == doctest::Approx(1.0));
        CHECK_FALSE(r.marginal);
    }
}
