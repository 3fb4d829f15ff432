#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccbell/problems.hpp"

namespace ccbell {

// Refuse exhaustive search above this many partitions.
inline constexpr double kPartitionGuard = 1e8;

/// Best deterministic one-way protocol found by exhaustive search.
struct OptimalProtocol {
    double success = 0.0;
    // encoder[x] = message (block index, restricted growth string).
    std::vector<int> encoder;
    // decoder[m * |Y| + y] = Bob's answer on message m.
    std::vector<int> decoder;
    int messages = 0;
};

struct SearchOptions {
    // 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

// Number of set partitions of an n-set into at most max_blocks nonempty
// blocks (sum of Stirling numbers of the second kind), as a double.
double partition_count(std::size_t n, std::size_t max_blocks);

/// Exact maximum of p_S^dist over deterministic one-way protocols whose
/// message alphabet has at most 2^bits symbols.
///
/// Encoders are enumerated as set partitions of X in restricted-growth
/// order; for a fixed encoder Bob's greedy decoder (majority weight per
/// block and y, ties to 0) is optimal. Ties between encoders resolve to
/// the first in enumeration order, so the result does not depend on the
/// number of workers.
///
/// Throws InputError for bits < 0 and GuardExceeded when the partition
/// count exceeds kPartitionGuard.
OptimalProtocol optimal_protocol(const CommProblem& problem, int bits, const SearchOptions& options = {});

double optimal_success(const CommProblem& problem, int bits, const SearchOptions& options = {});

// Bits needed to announce x verbatim: ceil(log2 |X|).
int full_disclosure_bits(const CommProblem& problem);

/// Minimum bits c with optimal_success(problem, c) >= p_target - 1e-12,
/// or nullopt when even full disclosure falls short.
std::optional<int> complexity(const CommProblem& problem, double p_target, const SearchOptions& options = {});

enum class CurveSource { ExactSearch, BoundFormula };

/// Map from bit budget to maximal distributional success.
struct CCCurve {
    std::vector<double> points;  // points[c] for c = 0..max_bits
    CurveSource source = CurveSource::ExactSearch;
    std::string problem_id;
    std::string parameters;

    std::optional<int> complexity(double p_target) const;
    // Best success attainable with `bits` (saturates past the last point).
    double max_success(int bits) const;
};

// Exact curve for c = 0..full_disclosure_bits(problem).
CCCurve exact_curve(const CommProblem& problem, const std::string& problem_id = "problem",
                    const SearchOptions& options = {});

/// Lower bound on C(p_s) from C(2/3) by amplification with majority vote:
/// (1/3)(p_s - 1/2)^2 * C(2/3) for 1/2 < p_s <= 2/3, C(2/3) above 2/3 and 0
/// at or below 1/2. Stated for boolean functions.
double pumped_bound(double c_two_thirds, double p_s);

// Repetitions l >= 3/eps^2 that lift success 1/2 + eps to 2/3 by majority.
// Throws InputError unless 0 < eps <= 1/2.
int repetitions_needed(double epsilon);

}  // namespace ccbell
