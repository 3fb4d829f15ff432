#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccbell/bell.hpp"

namespace ccbell {

/// Known-up-to-constants complexity families. c scales the VSP bound
/// C(2/3) >= c n^(1/3); c' and c'' scale the quantum and classical sides of
/// the alpha-partial hidden matching bounds.
struct AsymptoticFamily {
    enum class Kind { Vsp, AlphaPhm };
    Kind kind = Kind::Vsp;
    double c = 1.0;
    double c_prime = 1.0;
    double c_double_prime = 1.0;
    double alpha = 1.0;

    // Throws InputError unless all constants are positive and alpha >= 1.
    void validate() const;
    std::string describe() const;
};

struct AsymptoticVerdict {
    double lhs = 0.0;
    double rhs = 0.0;
    double delta = 0.0;
    bool violated = false;
};

// pumped_bound(c * cbrt(n), p): the VSP classical bound at success p.
double vsp_classical_bound(double n, double p, const AsymptoticFamily& fam);

RhsModel vsp_rhs(double n, const AsymptoticFamily& fam);

/// log2 n + log2 log2(1/delta) against the VSP bound at (1 - delta) p_B + delta/2.
AsymptoticVerdict asymptotic_vsp(double n, double p_B, double delta, const AsymptoticFamily& fam);

// Best delta from the grid (largest rhs - lhs, earlier entry on ties).
AsymptoticVerdict asymptotic_vsp_best(double n, double p_B, const AsymptoticFamily& fam,
                                      const std::vector<double>& delta_grid);

/// c' log2(n)/alpha + log2 log2(1/delta) against
/// (1/3) ((1 - delta)/6)^2 c'' sqrt(n/alpha).
AsymptoticVerdict asymptotic_phm(double n, double delta, const AsymptoticFamily& fam);

/// Smallest integer n >= 2 where asymptotic_phm is violated, found by
/// doubling then bisection (the difference rhs - lhs is increasing once
/// n > e^2). nullopt if none below n_max.
std::optional<double> phm_crossover(double delta, const AsymptoticFamily& fam, double n_max = 1e18);

/// First point of n_grid from which `violated(n)` holds at every later grid
/// point. nullopt if the last grid point is not violated.
std::optional<double> crossover_on_grid(const std::vector<double>& n_grid,
                                        const std::function<bool(double)>& violated);

// Powers of two 2^lo .. 2^hi.
std::vector<double> power_of_two_grid(int lo, int hi);
// `points` evenly spaced values from a to b inclusive.
std::vector<double> uniform_grid(double a, double b, int points);
// delta = 2^-t for t = 1, 1 + step, ..., t_max: dense grid on (0, 1/2].
std::vector<double> dense_half_delta_grid(double step = 0.02, double t_max = 40.0);

/// Regions of the (p_B, log 1/p_A) plane for a fixed problem size.
enum class Region {
    Detected,          // below the boundary: the local-realism test is violated
    AdvantageOnly,     // between boundary and C: beats classical, not detected
    Classical,         // at or above C
};

std::string to_string(Region region);

struct CurveRow {
    double p_B = 0.0;
    double complexity = 0.0;  // C(p_B, n)
    double boundary = 0.0;    // least log 1/p_A attainable with a local model
    Region construction_region = Region::Classical;
};

Region classify(double log_inv_p_A, const CurveRow& row);

/// VSP curves: C(p_B, n) and the boundary
///   max over delta of [ C((1 - delta) p_B + delta/2, n) - log2 log2(1/delta) ],
/// floored at 0, with delta restricted to (0, 1/2] as in the compiled
/// protocol (delta = 2^-k, k >= 1). construction_region places the point
/// log 1/p_A = log2 n of the maximally entangled construction.
std::vector<CurveRow> vsp_curves(double n, const AsymptoticFamily& fam, const std::vector<double>& p_B_grid,
                                 const std::vector<double>& delta_grid = dense_half_delta_grid());

/// alpha-PHM analogue with C(p, n) = pumped_bound(c'' sqrt(n/alpha), p) and
/// construction point log 1/p_A = c' log2(n)/alpha.
std::vector<CurveRow> phm_curves(double n, const AsymptoticFamily& fam, const std::vector<double>& p_B_grid,
                                 const std::vector<double>& delta_grid = dense_half_delta_grid());

}  // namespace ccbell
