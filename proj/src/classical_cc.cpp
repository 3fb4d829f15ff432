#include "ccbell/classical_cc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

constexpr double kTargetSlack = 1e-12;

struct Candidate {
    double value = -1.0;
    std::vector<int> rgs;
    bool found = false;
};

// Restricted-growth strings are compared lexicographically; that is the
// enumeration order, so "lower" means "enumerated first".
bool better(const Candidate& a, const Candidate& b) {
    if (!a.found) return false;
    if (!b.found) return true;
    if (a.value != b.value) return a.value > b.value;
    return a.rgs < b.rgs;
}

class PartitionSearch {
public:
    PartitionSearch(const CommProblem& problem, std::size_t max_blocks)
        : nx_(problem.num_x()), ny_(problem.num_y()), max_blocks_(max_blocks) {
        // weight[x][y][o] = mu(x,y) * [o in valid(x,y)]
        weight_.assign(nx_ * ny_ * 2, 0.0);
        for (std::size_t x = 0; x < nx_; ++x) {
            for (std::size_t y = 0; y < ny_; ++y) {
                if (!problem.in_support(x, y)) continue;
                for (int o = 0; o < 2; ++o) {
                    if (problem.valid(x, y).contains(o)) weight_[(x * ny_ + y) * 2 + o] = problem.mu(x, y);
                }
            }
        }
    }

    // Enumerates every completion of `prefix` (a valid RGS prefix).
    Candidate search_from(const std::vector<int>& prefix) const {
        State s;
        s.rgs.assign(nx_, 0);
        s.score.assign(max_blocks_ * ny_ * 2, 0.0);
        int used = 0;
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            s.rgs[i] = prefix[i];
            add(s, i, prefix[i], +1);
            used = std::max(used, prefix[i] + 1);
        }
        Candidate best;
        recurse(s, prefix.size(), used, best);
        return best;
    }

    double evaluate(const std::vector<int>& rgs) const {
        State s;
        s.rgs = rgs;
        s.score.assign(max_blocks_ * ny_ * 2, 0.0);
        int used = 0;
        for (std::size_t i = 0; i < nx_; ++i) {
            add(s, i, rgs[i], +1);
            used = std::max(used, rgs[i] + 1);
        }
        return total(s, used);
    }

    const std::vector<double>& weights() const { return weight_; }

private:
    struct State {
        std::vector<int> rgs;
        std::vector<double> score;  // [block][y][o]
    };

    void add(State& s, std::size_t x, int block, int sign) const {
        for (std::size_t y = 0; y < ny_; ++y) {
            for (int o = 0; o < 2; ++o) {
                s.score[(block * ny_ + y) * 2 + o] += sign * weight_[(x * ny_ + y) * 2 + o];
            }
        }
    }

    double total(const State& s, int used) const {
        double sum = 0.0;
        for (int m = 0; m < used; ++m) {
            for (std::size_t y = 0; y < ny_; ++y) {
                const double s0 = s.score[(m * ny_ + y) * 2];
                const double s1 = s.score[(m * ny_ + y) * 2 + 1];
                sum += std::max(s0, s1);
            }
        }
        return sum;
    }

    void recurse(State& s, std::size_t pos, int used, Candidate& best) const {
        if (pos == nx_) {
            const double value = total(s, used);
            if (!best.found || value > best.value) {
                best.value = value;
                best.rgs = s.rgs;
                best.found = true;
            }
            return;
        }
        const int limit = std::min<int>(used + 1, static_cast<int>(max_blocks_));
        for (int b = 0; b < limit; ++b) {
            s.rgs[pos] = b;
            add(s, pos, b, +1);
            recurse(s, pos + 1, std::max(used, b + 1), best);
            // Rebuild instead of subtracting, so every leaf score is summed in
            // x order regardless of the path that reached it.
            rebuild_block(s, b, pos);
        }
        s.rgs[pos] = 0;
    }

    void rebuild_block(State& s, int block, std::size_t upto) const {
        for (std::size_t y = 0; y < ny_; ++y) {
            for (int o = 0; o < 2; ++o) s.score[(block * ny_ + y) * 2 + o] = 0.0;
        }
        for (std::size_t x = 0; x < upto; ++x) {
            if (s.rgs[x] == block) add(s, x, block, +1);
        }
    }

    std::size_t nx_;
    std::size_t ny_;
    std::size_t max_blocks_;
    std::vector<double> weight_;
};

void collect_prefixes(std::vector<int>& cur, int used, std::size_t depth, std::size_t max_blocks,
                      std::vector<std::vector<int>>& out) {
    if (cur.size() == depth) {
        out.push_back(cur);
        return;
    }
    const int limit = std::min<int>(used + 1, static_cast<int>(max_blocks));
    for (int b = 0; b < limit; ++b) {
        cur.push_back(b);
        collect_prefixes(cur, std::max(used, b + 1), depth, max_blocks, out);
        cur.pop_back();
    }
}

}  // namespace

double partition_count(std::size_t n, std::size_t max_blocks) {
    if (n == 0) return 1.0;
    max_blocks = std::min(max_blocks, n);
    // Stirling numbers of the second kind, S(i, k), row by row.
    std::vector<double> row(max_blocks + 1, 0.0);
    row[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = std::min(i, max_blocks); k >= 1; --k) {
            row[k] = static_cast<double>(k) * row[k] + row[k - 1];
        }
        row[0] = 0.0;
    }
    double total = 0.0;
    for (std::size_t k = 1; k <= max_blocks; ++k) total += row[k];
    return total;
}

int full_disclosure_bits(const CommProblem& problem) {
    int bits = 0;
    while ((std::size_t{1} << bits) < problem.num_x()) ++bits;
    return bits;
}

OptimalProtocol optimal_protocol(const CommProblem& problem, int bits, const SearchOptions& options) {
    if (bits < 0) throw InputError("bits must be nonnegative");
    const std::size_t nx = problem.num_x();
    const std::size_t ny = problem.num_y();
    const std::size_t max_blocks =
        bits >= 62 ? nx : std::min<std::size_t>(nx, std::size_t{1} << bits);

    const double count = partition_count(nx, max_blocks);
    if (count > kPartitionGuard) {
        throw GuardExceeded("exhaustive search over " + std::to_string(count) +
                            " partitions exceeds the guard of 1e8; use a bound formula instead");
    }

    PartitionSearch search(problem, max_blocks);

    // Split the search tree at a fixed prefix depth; each prefix is an
    // independent subproblem and the prefixes are themselves in RGS order.
    std::vector<std::vector<int>> prefixes;
    std::vector<int> cur;
    const std::size_t depth = std::min<std::size_t>(nx, 6);
    collect_prefixes(cur, 0, depth, max_blocks, prefixes);

    unsigned workers = options.workers ? options.workers : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(prefixes.size()));

    std::vector<Candidate> results(prefixes.size());
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < prefixes.size(); i += workers) results[i] = search.search_from(prefixes[i]);
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }

    Candidate best;
    for (const auto& c : results) {
        if (better(c, best)) best = c;
    }

    OptimalProtocol out;
    out.encoder = best.rgs;
    out.messages = 0;
    for (int m : out.encoder) out.messages = std::max(out.messages, m + 1);
    out.decoder.assign(static_cast<std::size_t>(out.messages) * ny, 0);
    const auto& w = search.weights();
    for (int m = 0; m < out.messages; ++m) {
        for (std::size_t y = 0; y < ny; ++y) {
            double s0 = 0.0, s1 = 0.0;
            for (std::size_t x = 0; x < nx; ++x) {
                if (out.encoder[x] != m) continue;
                s0 += w[(x * ny + y) * 2];
                s1 += w[(x * ny + y) * 2 + 1];
            }
            out.decoder[m * ny + y] = s1 > s0 ? 1 : 0;
        }
    }
    out.success = best.value;
    return out;
}

double optimal_success(const CommProblem& problem, int bits, const SearchOptions& options) {
    return optimal_protocol(problem, bits, options).success;
}

std::optional<int> complexity(const CommProblem& problem, double p_target, const SearchOptions& options) {
    const int top = full_disclosure_bits(problem);
    for (int c = 0; c <= top; ++c) {
        if (optimal_success(problem, c, options) >= p_target - kTargetSlack) return c;
    }
    return std::nullopt;
}

std::optional<int> CCCurve::complexity(double p_target) const {
    for (std::size_t c = 0; c < points.size(); ++c) {
        if (points[c] >= p_target - kTargetSlack) return static_cast<int>(c);
    }
    return std::nullopt;
}

double CCCurve::max_success(int bits) const {
    if (points.empty() || bits < 0) return 0.0;
    return points[std::min<std::size_t>(static_cast<std::size_t>(bits), points.size() - 1)];
}

CCCurve exact_curve(const CommProblem& problem, const std::string& problem_id, const SearchOptions& options) {
    CCCurve curve;
    curve.source = CurveSource::ExactSearch;
    curve.problem_id = problem_id;
    curve.parameters = "exhaustive deterministic one-way search";
    const int top = full_disclosure_bits(problem);
    for (int c = 0; c <= top; ++c) curve.points.push_back(optimal_success(problem, c, options));
    return curve;
}

double pumped_bound(double c_two_thirds, double p_s) {
    if (p_s <= 0.5) return 0.0;
    // Targets such as (1 - d) p + d/2 at d = 2/3 land an ulp either side of
    // 2/3; keep them on the amplified branch rather than the saturated one.
    if (p_s <= 2.0 / 3.0 + 1e-12) {
        const double eps = std::min(p_s - 0.5, 1.0 / 6.0);
        return eps * eps / 3.0 * c_two_thirds;
    }
    return c_two_thirds;
}

int repetitions_needed(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw InputError("epsilon must lie in (0, 1/2]");
    // 3/eps^2 is often an integer in exact arithmetic (eps = 1/6 gives 108);
    // absorb the rounding of the division before taking the ceiling.
    const double l = 3.0 / (epsilon * epsilon);
    return static_cast<int>(std::ceil(l - 1e-9 * l));
}

}  // namespace ccbell
