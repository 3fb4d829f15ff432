#pragma once

#include <cstdint>

#include "ccbell/correlations.hpp"
#include "ccbell/problems.hpp"

namespace ccbell {

/// Classical one-way protocol built from a shared correlation box:
/// Alice and Bob share N copies, Alice announces the index of the first copy
/// where she saw a = 1 (or ABORT), and Bob outputs his b on that copy
/// (a uniformly random bit after ABORT).
struct PiBProtocol {
    CorrelationBox box;
    CommProblem problem;
    int k = 1;              // delta = 2^-k
    double delta = 0.5;
    long long copies = 1;   // N = ceil(k / p_A)
    int message_bits = 1;   // ceil(log2 N) + 1 (index plus ABORT flag)
    BoxSummary summary;
};

/// Throws InputError when k < 1 or p_A = 0.
PiBProtocol compile(const CorrelationBox& box, const CommProblem& problem, int k);

// ceil(log2 n) for n >= 1, exact in integers.
int ceil_log2(long long n);

/// Exact success of the compiled protocol, pair by pair:
/// sum mu(x,y) [ (1 - r^N) q(x,y) + r^N / 2 ] with r = 1 - p(a=1|x,y).
double exact_success(const PiBProtocol& protocol);

// (1 - delta) p_B + delta / 2 from the averaged summary.
double guaranteed_success(const PiBProtocol& protocol);

struct SimulationResult {
    double success = 0.0;
    double standard_error = 0.0;
    long long trials = 0;
    long long successes = 0;
};

// Trials per independently seeded chunk; fixed so results do not depend on threading.
inline constexpr long long kSimulationChunk = 1 << 16;

/// Monte Carlo run of the protocol. Chunk c draws from a generator seeded
/// by (seed, c), so the result is reproducible for a given seed and does
/// not depend on the number of worker threads.
SimulationResult simulate(const PiBProtocol& protocol, long long trials, std::uint64_t seed, unsigned workers = 0);

}  // namespace ccbell
