#include "ccbell/problems.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

void require_unique_nonempty(const std::vector<std::string>& labels, const char* which) {
    if (labels.empty()) {
        throw InputError(std::string(which) + " labels must be nonempty");
    }
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) {
        throw InputError(std::string(which) + " labels contain duplicates");
    }
}

std::size_t index_of(const std::vector<std::string>& labels, const std::string& label, const char* which) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw InputError(std::string("unknown ") + which + " label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

std::string label_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw InputError("labels must be strings or integers");
}

OutputSet parse_valid(const nlohmann::json& v) {
    if (v.is_null()) return OutputSet::none();
    if (v.is_string()) {
        if (v.get<std::string>() == "any") return OutputSet::any();
        throw InputError("valid entry must be 0, 1, \"any\", null or a list of bits");
    }
    if (v.is_number_integer()) {
        auto bit = v.get<long long>();
        if (bit != 0 && bit != 1) throw InputError("valid entry must be 0 or 1");
        return OutputSet::only(static_cast<int>(bit));
    }
    if (v.is_array()) {
        OutputSet s = OutputSet::none();
        for (const auto& e : v) {
            if (!e.is_number_integer() || (e.get<long long>() != 0 && e.get<long long>() != 1)) {
                throw InputError("valid list entries must be 0 or 1");
            }
            s = s.with(static_cast<int>(e.get<long long>()));
        }
        return s;
    }
    throw InputError("valid entry must be 0, 1, \"any\", null or a list of bits");
}

nlohmann::json valid_to_json(OutputSet s) {
    if (s == OutputSet::any()) return "any";
    if (s.empty()) return nullptr;
    return s.contains(1) ? 1 : 0;
}

const nlohmann::json& require_field(const nlohmann::json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw InputError(std::string("missing field '") + key + "'");
    return *it;
}

}  // namespace

CommProblem::CommProblem(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                         std::vector<double> mu, std::vector<OutputSet> valid, int n)
    : x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      mu_(std::move(mu)),
      valid_(std::move(valid)),
      n_(n) {
    require_unique_nonempty(x_labels_, "x");
    require_unique_nonempty(y_labels_, "y");
    const std::size_t cells = num_x() * num_y();
    if (mu_.size() != cells || valid_.size() != cells) {
        throw InputError("mu and valid must have |X|*|Y| entries");
    }
    double total = 0.0;
    for (double w : mu_) {
        if (!std::isfinite(w) || w < 0.0) throw InputError("mu weights must be finite and nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw InputError("mu does not sum to 1 (sum = " + std::to_string(total) + ")");
    }
    if (total != 1.0) {
        for (double& w : mu_) w /= total;
    }
    for (std::size_t i = 0; i < cells; ++i) {
        if (mu_[i] > 0.0 && valid_[i].empty()) {
            throw InputError("empty valid-set on support pair (" + x_labels_[i / num_y()] + ", " +
                             y_labels_[i % num_y()] + ")");
        }
    }
}

std::size_t CommProblem::x_index(const std::string& label) const { return index_of(x_labels_, label, "x"); }
std::size_t CommProblem::y_index(const std::string& label) const { return index_of(y_labels_, label, "y"); }

bool CommProblem::is_function() const {
    for (std::size_t i = 0; i < mu_.size(); ++i) {
        if (mu_[i] > 0.0 && !valid_[i].is_singleton()) return false;
    }
    return true;
}

std::vector<std::pair<std::size_t, std::size_t>> CommProblem::support() const {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < num_x(); ++x) {
        for (std::size_t y = 0; y < num_y(); ++y) {
            if (in_support(x, y)) pairs.emplace_back(x, y);
        }
    }
    return pairs;
}

CommProblem rac21() {
    // Labels read x1x0; Bob's y selects bit x_y, so y=0 picks the last character.
    std::vector<std::string> xs{"00", "01", "10", "11"};
    std::vector<std::string> ys{"0", "1"};
    std::vector<double> mu(8, 1.0 / 8.0);
    std::vector<OutputSet> valid;
    for (const auto& x : xs) {
        const int x0 = x[1] - '0';
        const int x1 = x[0] - '0';
        valid.push_back(OutputSet::only(x0));
        valid.push_back(OutputSet::only(x1));
    }
    return CommProblem(xs, ys, mu, valid, 2);
}

CommProblem problem_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("problem document must be a JSON object");
    std::vector<std::string> xs, ys;
    const auto& jx = require_field(doc, "x");
    const auto& jy = require_field(doc, "y");
    if (!jx.is_array() || !jy.is_array()) throw InputError("'x' and 'y' must be arrays");
    for (const auto& v : jx) xs.push_back(label_string(v));
    for (const auto& v : jy) ys.push_back(label_string(v));

    const auto& jmu = require_field(doc, "mu");
    const auto& jvalid = require_field(doc, "valid");
    if (!jmu.is_array() || jmu.size() != xs.size() || !jvalid.is_array() || jvalid.size() != xs.size()) {
        throw InputError("'mu' and 'valid' must be |x| rows");
    }
    std::vector<double> mu;
    std::vector<OutputSet> valid;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!jmu[i].is_array() || jmu[i].size() != ys.size() || !jvalid[i].is_array() ||
            jvalid[i].size() != ys.size()) {
            throw InputError("'mu' and 'valid' rows must have |y| entries");
        }
        for (std::size_t j = 0; j < ys.size(); ++j) {
            if (!jmu[i][j].is_number()) throw InputError("mu entries must be numbers");
            mu.push_back(jmu[i][j].get<double>());
            valid.push_back(parse_valid(jvalid[i][j]));
        }
    }
    const auto& jn = require_field(doc, "n");
    if (!jn.is_number_integer()) throw InputError("'n' must be an integer");
    return CommProblem(std::move(xs), std::move(ys), std::move(mu), std::move(valid), jn.get<int>());
}

CommProblem problem_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return problem_from_json(doc);
}

nlohmann::json problem_to_json(const CommProblem& problem) {
    nlohmann::json mu = nlohmann::json::array();
    nlohmann::json valid = nlohmann::json::array();
    for (std::size_t x = 0; x < problem.num_x(); ++x) {
        nlohmann::json mu_row = nlohmann::json::array();
        nlohmann::json valid_row = nlohmann::json::array();
        for (std::size_t y = 0; y < problem.num_y(); ++y) {
            mu_row.push_back(problem.mu(x, y));
            valid_row.push_back(valid_to_json(problem.valid(x, y)));
        }
        mu.push_back(std::move(mu_row));
        valid.push_back(std::move(valid_row));
    }
    return {{"x", problem.x_labels()}, {"y", problem.y_labels()}, {"mu", mu}, {"valid", valid},
            {"n", problem.n()}};
}

double success_probability(const CommProblem& problem, const Strategy& strategy) {
    if (strategy.size() != problem.num_x() * problem.num_y()) {
        throw InputError("strategy table must have |X|*|Y| entries");
    }
    double total = 0.0;
    for (std::size_t x = 0; x < problem.num_x(); ++x) {
        for (std::size_t y = 0; y < problem.num_y(); ++y) {
            if (!problem.in_support(x, y)) continue;
            const int out = strategy[x * problem.num_y() + y];
            if (out != 0 && out != 1) {
                throw InputError("strategy undefined on support pair (" + problem.x_labels()[x] + ", " +
                                 problem.y_labels()[y] + ")");
            }
            if (problem.valid(x, y).contains(out)) total += problem.mu(x, y);
        }
    }
    return total;
}

}  // namespace ccbell
