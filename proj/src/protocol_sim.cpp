#include "ccbell/protocol_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

int ceil_log2(long long n) {
    if (n < 1) throw InputError("ceil_log2 needs n >= 1");
    int bits = 0;
    while ((1LL << bits) < n) ++bits;
    return bits;
}

PiBProtocol compile(const CorrelationBox& box, const CommProblem& problem, int k) {
    if (k < 1) throw InputError("k must be at least 1");
    const BoxSummary summary = summarize(box, problem);
    if (summary.p_A <= 0.0) throw InputError("p_A = 0: Alice never accepts, the protocol is undefined");
    const double ratio = static_cast<double>(k) / summary.p_A;
    // k / p_A is frequently an exact integer; do not let rounding push the ceiling up.
    const auto copies = static_cast<long long>(std::ceil(ratio - 1e-9 * ratio));
    return PiBProtocol{box,
                       problem,
                       k,
                       std::ldexp(1.0, -k),
                       std::max(1LL, copies),
                       ceil_log2(std::max(1LL, copies)) + 1,
                       summary};
}

double exact_success(const PiBProtocol& protocol) {
    const auto al = align(protocol.box, protocol.problem);
    double total = 0.0;
    for (auto [x, y] : protocol.problem.support()) {
        const double accept = protocol.box.p_alice(al.x[x], al.y[y], 1);
        const double fail_all = std::pow(1.0 - accept, static_cast<double>(protocol.copies));
        const double q = conditional_success(protocol.box, protocol.problem, al, x, y);
        total += protocol.problem.mu(x, y) * ((1.0 - fail_all) * q + 0.5 * fail_all);
    }
    return total;
}

double guaranteed_success(const PiBProtocol& protocol) {
    return (1.0 - protocol.delta) * protocol.summary.p_B + protocol.delta / 2.0;
}

SimulationResult simulate(const PiBProtocol& protocol, long long trials, std::uint64_t seed, unsigned workers) {
    if (trials < 1) throw InputError("trials must be at least 1");
    const CommProblem& problem = protocol.problem;
    const CorrelationBox& box = protocol.box;
    const auto al = align(box, problem);

    const auto support = problem.support();
    std::vector<double> cumulative;
    double acc = 0.0;
    for (auto [x, y] : support) {
        acc += problem.mu(x, y);
        cumulative.push_back(acc);
    }

    const long long chunks = (trials + kSimulationChunk - 1) / kSimulationChunk;
    std::vector<long long> hits(static_cast<std::size_t>(chunks), 0);

    auto run_chunk = [&](long long c) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(c))));
        const long long begin = c * kSimulationChunk;
        const long long end = std::min(trials, begin + kSimulationChunk);
        long long local = 0;
        for (long long t = begin; t < end; ++t) {
            const double u = unit(rng) * acc;
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            if (it == cumulative.end()) --it;
            const auto [x, y] = support[static_cast<std::size_t>(it - cumulative.begin())];
            const std::size_t bx = al.x[x];
            const std::size_t by = al.y[y];

            int answer = -1;
            for (long long i = 0; i < protocol.copies; ++i) {
                const double v = unit(rng);
                // Outcomes in order (0,0), (0,1), (1,0), (1,1).
                double edge = 0.0;
                int a = 1, b = 1;
                for (int cell = 0; cell < 4; ++cell) {
                    edge += box.p(bx, by, cell >> 1, cell & 1);
                    if (v < edge) {
                        a = cell >> 1;
                        b = cell & 1;
                        break;
                    }
                }
                if (a == 1) {
                    answer = b;
                    break;
                }
            }
            if (answer < 0) answer = unit(rng) < 0.5 ? 0 : 1;  // ABORT
            if (problem.valid(x, y).contains(answer)) ++local;
        }
        hits[static_cast<std::size_t>(c)] = local;
    };

    unsigned n_workers = workers ? workers : std::max(1U, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(std::min<long long>(n_workers, chunks));
    if (n_workers <= 1) {
        for (long long c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (long long c = next++; c < chunks; c = next++) run_chunk(c);
            });
        }
    }

    SimulationResult r;
    r.trials = trials;
    for (long long h : hits) r.successes += h;
    r.success = static_cast<double>(r.successes) / static_cast<double>(trials);
    r.standard_error = std::sqrt(r.success * (1.0 - r.success) / static_cast<double>(trials));
    return r;
}

}  // namespace ccbell
