#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccbell/classical_cc.hpp"
#include "ccbell/correlations.hpp"
#include "ccbell/problems.hpp"
#include "ccbell/quantum.hpp"

namespace ccbell {

// Strict-inequality slack for every violation verdict.
inline constexpr double kVerdictSlack = 1e-12;

enum class RhsSource { ExactSearch, PumpedBound, AsymptoticFormula, Custom };

std::string to_string(RhsSource source);

/// Right-hand side of the communication test: C(f, n, p) as a function of
/// the success probability p. Returns +infinity where p is unattainable.
struct RhsModel {
    RhsSource source = RhsSource::Custom;
    std::function<double(double)> complexity;
    std::string description;
};

RhsModel exact_rhs(const CCCurve& curve);
RhsModel exact_rhs(const CommProblem& problem);
// pumped_bound(c_two_thirds, p).
RhsModel pumped_rhs(double c_two_thirds);

// {2^-k : k = 1..20} followed by 2/3.
std::vector<double> default_delta_grid();

/// Communication used by the compiled protocol at (p_A, delta):
/// ceil(log2(1/p_A) + log2 log2(1/delta)) + 1, the ceiling taken no lower
/// than 0 (a message index never needs negative bits). +infinity at p_A = 0.
double communication_lhs(double p_A, double delta);

struct DeltaRow {
    double delta = 0.0;
    double target = 0.0;  // (1 - delta) p_B + delta / 2
    double lhs = 0.0;
    double rhs = 0.0;
};

struct BellReport {
    double p_A = 0.0;
    double p_B = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double delta_star = 0.0;
    bool violated = false;
    RhsSource rhs_source = RhsSource::Custom;
    std::string rhs_description;
    std::vector<DeltaRow> per_delta;
};

struct EvaluateOptions {
    std::vector<double> delta_grid = default_delta_grid();
    // Golden-section search between the grid neighbours of the best delta;
    // refined points are appended to per_delta.
    bool refine = false;
};

/// Local-realism test from a one-way complexity bound: a box admitting a
/// local model satisfies lhs(p_A, delta) >= C(target(delta)) for every delta.
/// Reports the delta with the largest rhs - lhs; ties go to the earlier
/// grid entry. Unattainable targets give rhs = +inf and never count as a
/// violation.
BellReport evaluate(const BoxSummary& summary, const RhsModel& rhs, const EvaluateOptions& options = {});

nlohmann::json report_to_json(const BellReport& report);

inline constexpr double kRacLocalBound = 0.75;

/// How Alice's outcome enters the random-access-code sum.
///
/// HeraldedState: a = 1 means Bob now holds psi_x, so success is
/// b = x_y xor (1 - a). This matches the Phi+ construction with Alice
/// projecting onto conj(psi_x).
/// Xor: success is b = x_y xor a, the natural form when a = 1 heralds the
/// orthogonal state (a singlet-type source).
/// Both are relabelings of one local outcome, so both have local bound 0.75.
enum class RacLabeling { HeraldedState, Xor };

/// sum over a, x, y of (1/8) p(a, b = success bit | x, y) for a box on the
/// 2->1 random access code labels.
double rac_inequality(const CorrelationBox& box, RacLabeling labeling = RacLabeling::HeraldedState);
inline bool rac_violated(double value) { return value > kRacLocalBound + kVerdictSlack; }

enum class InequalityKind { Communication, Rac };

struct NoiseOptions {
    InequalityKind inequality = InequalityKind::Rac;
    double tol = 1e-7;
    // Communication-test right-hand side; defaults to the exact curve of the problem.
    std::optional<RhsModel> rhs;
    EvaluateOptions evaluate;
};

struct NoiseThreshold {
    bool found = false;   // false: no violation even at p = 1
    double p_star = 1.0;  // midpoint of the final bracket
    double lower = 0.0;
    double upper = 1.0;
    int iterations = 0;
};

/// Smallest isotropic weight p whose box violates the chosen inequality,
/// by bisection on [0, 1]. Assumes the verdict is monotone in p. The box at
/// weight p is the mixture p * box(Phi+) + (1 - p) * box(I/d^2), which equals
/// box(isotropic(d, p)) since the construction is affine in the state.
NoiseThreshold noise_threshold(const QuantumProtocol& protocol, const CommProblem& problem,
                               const NoiseOptions& options);

}  // namespace ccbell
