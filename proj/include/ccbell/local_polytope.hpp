#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ccbell/correlations.hpp"

namespace ccbell {

// At most this many deterministic strategy pairs 2^|X| * 2^|Y|.
inline constexpr int kLocalStrategyLog2Guard = 24;

// Phase-one residual above which a box is declared outside the local polytope.
inline constexpr double kLhvFeasibilityTolerance = 1e-9;
// Infeasibility certificates weaker than this are flagged as marginal.
inline constexpr double kLhvMarginalThreshold = 1e-7;

/// Deterministic local strategy: a = bit x of alice, b = bit y of bob.
struct LocalStrategy {
    std::uint32_t alice = 0;
    std::uint32_t bob = 0;

    int a(std::size_t x) const { return static_cast<int>((alice >> x) & 1U); }
    int b(std::size_t y) const { return static_cast<int>((bob >> y) & 1U); }
    friend bool operator==(const LocalStrategy&, const LocalStrategy&) = default;
};

/// A linear functional on boxes, laid out like CorrelationBox::table().
/// Its local maximum is the largest value over deterministic strategies.
struct LocalMaximum {
    double value = 0.0;
    LocalStrategy argmax;
};

LocalMaximum local_maximum(const std::vector<double>& functional, std::size_t nx, std::size_t ny);

enum class LhvVerdict { Feasible, Infeasible };

struct LhvResult {
    LhvVerdict verdict = LhvVerdict::Feasible;
    // Phase-one objective: L1 distance between the box and the best local
    // reconstruction (0 when feasible). Equals the certificate value when infeasible.
    double margin = 0.0;
    bool marginal = false;
    // Feasible: the decomposition. Weights are nonnegative and sum to 1.
    std::vector<std::pair<LocalStrategy, double>> weights;
    // Infeasible: separating functional F with F.box = margin > 0 while
    // F.local <= certificate_local_max (~0) for every local box.
    std::vector<double> certificate;
    double certificate_box_value = 0.0;
    double certificate_local_max = 0.0;
    int iterations = 0;
};

/// Decides whether the box is a convex combination of deterministic local
/// boxes by a phase-one simplex over strategy columns generated on demand.
/// Throws GuardExceeded when |X| + |Y| > 24.
LhvResult lhv_membership(const CorrelationBox& box);

// Sum of weight * deterministic box, same layout as CorrelationBox::table().
std::vector<double> reconstruct(const std::vector<std::pair<LocalStrategy, double>>& weights, std::size_t nx,
                                std::size_t ny);

}  // namespace ccbell
