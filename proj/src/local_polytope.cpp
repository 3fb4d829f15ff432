#include "ccbell/local_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kPricingTolerance = 1e-11;
constexpr int kRefactorEvery = 40;
constexpr int kDegenerateBeforeBland = 50;
constexpr int kIterationCap = 200000;

// Best Alice response for a fixed Bob strategy (or vice versa), ties to 0.
double best_response_alice(const std::vector<double>& f, std::size_t nx, std::size_t ny, std::uint32_t bob,
                           std::uint32_t& alice) {
    double total = 0.0;
    alice = 0;
    for (std::size_t x = 0; x < nx; ++x) {
        double s[2] = {0.0, 0.0};
        for (int a = 0; a < 2; ++a) {
            for (std::size_t y = 0; y < ny; ++y) {
                s[a] += f[CorrelationBox::offset(ny, x, y, a, static_cast<int>((bob >> y) & 1U))];
            }
        }
        if (s[1] > s[0]) alice |= (1U << x);
        total += std::max(s[0], s[1]);
    }
    return total;
}

double best_response_bob(const std::vector<double>& f, std::size_t nx, std::size_t ny, std::uint32_t alice,
                         std::uint32_t& bob) {
    double total = 0.0;
    bob = 0;
    for (std::size_t y = 0; y < ny; ++y) {
        double s[2] = {0.0, 0.0};
        for (int b = 0; b < 2; ++b) {
            for (std::size_t x = 0; x < nx; ++x) {
                s[b] += f[CorrelationBox::offset(ny, x, y, static_cast<int>((alice >> x) & 1U), b)];
            }
        }
        if (s[1] > s[0]) bob |= (1U << y);
        total += std::max(s[0], s[1]);
    }
    return total;
}

double strategy_value(const std::vector<double>& f, std::size_t nx, std::size_t ny, LocalStrategy s) {
    double total = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) total += f[CorrelationBox::offset(ny, x, y, s.a(x), s.b(y))];
    }
    return total;
}

}  // namespace

LocalMaximum local_maximum(const std::vector<double>& f, std::size_t nx, std::size_t ny) {
    LocalMaximum best;
    best.value = -std::numeric_limits<double>::infinity();
    if (ny <= nx) {
        for (std::uint32_t bob = 0; bob < (1U << ny); ++bob) {
            std::uint32_t alice = 0;
            const double v = best_response_alice(f, nx, ny, bob, alice);
            if (v > best.value) best = {v, {alice, bob}};
        }
    } else {
        for (std::uint32_t alice = 0; alice < (1U << nx); ++alice) {
            std::uint32_t bob = 0;
            const double v = best_response_bob(f, nx, ny, alice, bob);
            if (v > best.value) best = {v, {alice, bob}};
        }
    }
    return best;
}

std::vector<double> reconstruct(const std::vector<std::pair<LocalStrategy, double>>& weights, std::size_t nx,
                                std::size_t ny) {
    std::vector<double> table(nx * ny * 4, 0.0);
    for (const auto& [s, w] : weights) {
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t y = 0; y < ny; ++y) table[CorrelationBox::offset(ny, x, y, s.a(x), s.b(y))] += w;
        }
    }
    return table;
}

LhvResult lhv_membership(const CorrelationBox& box) {
    const std::size_t nx = box.num_x();
    const std::size_t ny = box.num_y();
    if (nx + ny > static_cast<std::size_t>(kLocalStrategyLog2Guard)) {
        throw GuardExceeded("local polytope has 2^" + std::to_string(nx + ny) +
                            " deterministic strategies, above the 2^24 guard");
    }
    const std::size_t m = nx * ny * 4;
    const std::uint64_t artificial_end = m;
    const bool small = nx + ny <= 16;

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) rhs[static_cast<Eigen::Index>(r)] = std::max(0.0, box.table()[r]);

    auto column_of = [&](std::uint64_t id) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        if (id < artificial_end) {
            col[static_cast<Eigen::Index>(id)] = 1.0;
            return col;
        }
        const std::uint64_t code = id - artificial_end;
        LocalStrategy s{static_cast<std::uint32_t>(code & ((std::uint64_t{1} << nx) - 1)),
                        static_cast<std::uint32_t>(code >> nx)};
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t y = 0; y < ny; ++y) col[static_cast<Eigen::Index>(CorrelationBox::offset(ny, x, y, s.a(x), s.b(y)))] = 1.0;
        }
        return col;
    };
    auto cost_of = [&](std::uint64_t id) { return id < artificial_end ? 1.0 : 0.0; };

    // Column ids: [0, m) artificials, then m + (bob << nx | alice).
    std::vector<std::uint64_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = r;
    Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::VectorXd xb = rhs;

    auto refactor = [&] {
        Eigen::MatrixXd bmat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) bmat.col(static_cast<Eigen::Index>(i)) = column_of(basis[i]);
        binv = bmat.fullPivLu().inverse();
        xb = binv * rhs;
        for (Eigen::Index i = 0; i < xb.size(); ++i) {
            if (xb[i] < 0.0 && xb[i] > -1e-13) xb[i] = 0.0;
        }
    };

    LhvResult result;
    std::vector<double> duals(m, 0.0);
    int degenerate_run = 0;
    for (int iter = 0; iter < kIterationCap; ++iter) {
        result.iterations = iter;
        if (iter > 0 && iter % kRefactorEvery == 0) refactor();

        Eigen::VectorXd cb(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) cb[static_cast<Eigen::Index>(i)] = cost_of(basis[i]);
        const Eigen::VectorXd pi = binv.transpose() * cb;
        for (std::size_t r = 0; r < m; ++r) duals[r] = pi[static_cast<Eigen::Index>(r)];

        // Pricing. Reduced cost of a strategy column is -pi.A, of an artificial 1 - pi_r.
        bool have_entering = false;
        std::uint64_t entering = 0;
        const bool bland = degenerate_run >= kDegenerateBeforeBland && small;
        if (bland) {
            for (std::size_t r = 0; r < m && !have_entering; ++r) {
                if (1.0 - duals[r] < -kPricingTolerance) {
                    entering = r;
                    have_entering = true;
                }
            }
            const std::uint64_t total = std::uint64_t{1} << (nx + ny);
            for (std::uint64_t code = 0; code < total && !have_entering; ++code) {
                LocalStrategy s{static_cast<std::uint32_t>(code & ((std::uint64_t{1} << nx) - 1)),
                                static_cast<std::uint32_t>(code >> nx)};
                if (-strategy_value(duals, nx, ny, s) < -kPricingTolerance) {
                    entering = artificial_end + code;
                    have_entering = true;
                }
            }
        } else {
            double best = -kPricingTolerance;
            const LocalMaximum lm = local_maximum(duals, nx, ny);
            if (-lm.value < best) {
                best = -lm.value;
                entering = artificial_end + ((static_cast<std::uint64_t>(lm.argmax.bob) << nx) | lm.argmax.alice);
                have_entering = true;
            }
            for (std::size_t r = 0; r < m; ++r) {
                if (1.0 - duals[r] < best) {
                    best = 1.0 - duals[r];
                    entering = r;
                    have_entering = true;
                }
            }
        }
        if (!have_entering) break;

        const Eigen::VectorXd dir = binv * column_of(entering);
        std::size_t leave = m;
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double d = dir[static_cast<Eigen::Index>(i)];
            if (d <= kPivotTolerance) continue;
            const double ratio = std::max(0.0, xb[static_cast<Eigen::Index>(i)]) / d;
            const bool tie = leave < m && std::abs(ratio - step) <= 1e-15;
            if (ratio < step - 1e-15 || (tie && basis[i] < basis[leave])) {
                step = ratio;
                leave = i;
            }
        }
        if (leave == m) break;  // unbounded direction; cannot happen for phase one
        degenerate_run = step <= 1e-14 ? degenerate_run + 1 : 0;

        const auto li = static_cast<Eigen::Index>(leave);
        const double pivot = dir[li];
        xb -= step * dir;
        xb[li] = step;
        const Eigen::RowVectorXd pivot_row = binv.row(li) / pivot;
        for (Eigen::Index i = 0; i < binv.rows(); ++i) {
            if (i == li) continue;
            binv.row(i) -= dir[i] * pivot_row;
        }
        binv.row(li) = pivot_row;
        basis[leave] = entering;
        for (Eigen::Index i = 0; i < xb.size(); ++i) {
            if (xb[i] < 0.0 && xb[i] > -1e-13) xb[i] = 0.0;
        }
    }
    refactor();

    double objective = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < artificial_end) objective += std::max(0.0, xb[static_cast<Eigen::Index>(i)]);
    }
    result.margin = objective;

    if (objective <= kLhvFeasibilityTolerance) {
        result.verdict = LhvVerdict::Feasible;
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < artificial_end) continue;
            const double w = xb[static_cast<Eigen::Index>(i)];
            if (w <= 0.0) continue;
            const std::uint64_t code = basis[i] - artificial_end;
            result.weights.push_back({{static_cast<std::uint32_t>(code & ((std::uint64_t{1} << nx) - 1)),
                                       static_cast<std::uint32_t>(code >> nx)},
                                      w});
            total += w;
        }
        for (auto& entry : result.weights) entry.second /= total;
        std::sort(result.weights.begin(), result.weights.end(), [](const auto& l, const auto& r) {
            return l.first.bob != r.first.bob ? l.first.bob < r.first.bob : l.first.alice < r.first.alice;
        });
        return result;
    }

    result.verdict = LhvVerdict::Infeasible;
    result.marginal = objective < kLhvMarginalThreshold;
    // Final duals from the refactored basis.
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) cb[static_cast<Eigen::Index>(i)] = cost_of(basis[i]);
    const Eigen::VectorXd pi = binv.transpose() * cb;
    result.certificate.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) result.certificate[r] = pi[static_cast<Eigen::Index>(r)];
    result.certificate_local_max = local_maximum(result.certificate, nx, ny).value;
    double value = 0.0;
    for (std::size_t r = 0; r < m; ++r) value += result.certificate[r] * box.table()[r];
    result.certificate_box_value = value;
    return result;
}

}  // namespace ccbell
