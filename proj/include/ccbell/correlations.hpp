#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccbell/problems.hpp"

namespace ccbell {

/// Conditional distribution p(a,b|x,y) with binary outcomes.
///
/// The table is stored as [x][y][a][b]. Construction checks nonnegativity
/// (down to -1e-12, then clamped) and per-(x,y) normalization within 1e-9.
/// Non-signaling is not assumed; see check_nonsignaling.
class CorrelationBox {
public:
    static constexpr double kNegativeTolerance = 1e-12;
    static constexpr double kNormalizationTolerance = 1e-9;

    CorrelationBox(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                   std::vector<double> table);

    // Box of the local deterministic strategy a = alice[x], b = bob[y].
    static CorrelationBox deterministic(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                                        const std::vector<int>& alice, const std::vector<int>& bob);

    std::size_t num_x() const { return x_labels_.size(); }
    std::size_t num_y() const { return y_labels_.size(); }
    const std::vector<std::string>& x_labels() const { return x_labels_; }
    const std::vector<std::string>& y_labels() const { return y_labels_; }
    const std::vector<double>& table() const { return table_; }

    static std::size_t offset(std::size_t ny, std::size_t x, std::size_t y, int a, int b) {
        return ((x * ny + y) * 2 + static_cast<std::size_t>(a)) * 2 + static_cast<std::size_t>(b);
    }
    double p(std::size_t x, std::size_t y, int a, int b) const { return table_[offset(num_y(), x, y, a, b)]; }
    double p_alice(std::size_t x, std::size_t y, int a) const { return p(x, y, a, 0) + p(x, y, a, 1); }
    double p_bob(std::size_t x, std::size_t y, int b) const { return p(x, y, 0, b) + p(x, y, 1, b); }

    bool same_labels(const CorrelationBox& other) const {
        return x_labels_ == other.x_labels_ && y_labels_ == other.y_labels_;
    }

private:
    std::vector<std::string> x_labels_;
    std::vector<std::string> y_labels_;
    std::vector<double> table_;
};

/// Index maps from problem inputs to box inputs (the box may carry extra labels).
struct LabelAlignment {
    std::vector<std::size_t> x;  // x[problem x] = box x
    std::vector<std::size_t> y;
};

// Throws InputError if the box lacks a label of the problem.
LabelAlignment align(const CorrelationBox& box, const CommProblem& problem);

// Below this acceptance probability p(b|x,y,a=1) is treated as undefined.
inline constexpr double kAcceptanceFloor = 1e-12;

struct BoxSummary {
    double p_A = 0.0;
    double p_B = 0.0;
    // Support pairs (problem indices) where p(a=1|x,y) vanishes; they enter
    // p_B with q = 1/2, the value Bob gets by guessing after ABORT.
    std::vector<std::pair<std::size_t, std::size_t>> undefined_pairs;
};

// q(x,y) = p(b in valid(x,y) | x, y, a = 1), or 1/2 when the condition is undefined.
double conditional_success(const CorrelationBox& box, const CommProblem& problem, const LabelAlignment& al,
                           std::size_t x, std::size_t y);

/// p_A = sum mu(x,y) p(a=1|x,y) and p_B = sum mu(x,y) q(x,y) over the
/// support of mu.
BoxSummary summarize(const CorrelationBox& box, const CommProblem& problem);

struct NonSignalingReport {
    double alice_deviation = 0.0;  // max over x,a of spread of p(a|x,y) across y
    double bob_deviation = 0.0;    // max over y,b of spread of p(b|x,y) across x
    double tolerance = 0.0;
    bool passed = false;
};

NonSignalingReport check_nonsignaling(const CorrelationBox& box, double tol);

// Entrywise w*box1 + (1-w)*box2. Labels must match; 0 <= w <= 1.
CorrelationBox mix(const CorrelationBox& box1, const CorrelationBox& box2, double w);

CorrelationBox box_from_json(const nlohmann::json& doc);
CorrelationBox box_from_json_text(const std::string& text);
nlohmann::json box_to_json(const CorrelationBox& box);

}  // namespace ccbell
