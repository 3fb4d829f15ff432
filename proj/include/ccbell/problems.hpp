#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ccbell {

// Set of acceptable outputs for one input pair, as a bitmask over {0,1}.
class OutputSet {
public:
    constexpr OutputSet() = default;
    static constexpr OutputSet none() { return OutputSet{0}; }
    static constexpr OutputSet only(int bit) { return OutputSet{static_cast<std::uint8_t>(bit ? 2 : 1)}; }
    static constexpr OutputSet any() { return OutputSet{3}; }

    constexpr bool contains(int bit) const { return (mask_ >> (bit ? 1 : 0)) & 1U; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr bool is_singleton() const { return mask_ == 1 || mask_ == 2; }
    constexpr OutputSet with(int bit) const {
        return OutputSet{static_cast<std::uint8_t>(mask_ | (bit ? 2 : 1))};
    }
    constexpr std::uint8_t mask() const { return mask_; }
    friend constexpr bool operator==(OutputSet, OutputSet) = default;

private:
    constexpr explicit OutputSet(std::uint8_t mask) : mask_(mask) {}
    std::uint8_t mask_ = 0;
};

/// A finite one-way communication problem: Alice holds x, Bob holds y and
/// must output a bit in valid(x,y). Inputs are drawn from mu.
///
/// Immutable after construction; the constructor enforces every invariant
/// (normalized nonnegative mu, nonempty duplicate-free labels, nonempty
/// valid-set on the support).
class CommProblem {
public:
    static constexpr double kNormalizationTolerance = 1e-9;

    // mu and valid are row-major |X| x |Y|. mu is renormalized when its sum is
    // within kNormalizationTolerance of 1, otherwise InputError is thrown.
    CommProblem(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                std::vector<double> mu, std::vector<OutputSet> valid, int n);

    std::size_t num_x() const { return x_labels_.size(); }
    std::size_t num_y() const { return y_labels_.size(); }
    const std::vector<std::string>& x_labels() const { return x_labels_; }
    const std::vector<std::string>& y_labels() const { return y_labels_; }
    int n() const { return n_; }

    double mu(std::size_t x, std::size_t y) const { return mu_[x * num_y() + y]; }
    OutputSet valid(std::size_t x, std::size_t y) const { return valid_[x * num_y() + y]; }
    bool in_support(std::size_t x, std::size_t y) const { return mu(x, y) > 0.0; }

    std::size_t x_index(const std::string& label) const;
    std::size_t y_index(const std::string& label) const;

    // True when every support pair has exactly one valid output.
    bool is_function() const;

    std::vector<std::pair<std::size_t, std::size_t>> support() const;

    friend bool operator==(const CommProblem&, const CommProblem&) = default;

private:
    std::vector<std::string> x_labels_;
    std::vector<std::string> y_labels_;
    std::vector<double> mu_;
    std::vector<OutputSet> valid_;
    int n_;
};

// Deterministic answer table, row-major |X| x |Y|, entries 0 or 1.
// Entries off the support are ignored.
using Strategy = std::vector<int>;

// The 2->1 random access code: x = "x1x0" in {00,01,10,11}, y in {0,1},
// f(x,y) = x_y, uniform mu = 1/8.
CommProblem rac21();

CommProblem problem_from_json(const nlohmann::json& doc);
CommProblem problem_from_json_text(const std::string& text);
nlohmann::json problem_to_json(const CommProblem& problem);

// Weighted success sum over the support of mu(x,y) * [strategy(x,y) in valid(x,y)].
// Throws InputError if the strategy table has the wrong size or a support
// entry that is not 0/1.
double success_probability(const CommProblem& problem, const Strategy& strategy);

}  // namespace ccbell
