#include "ccbell/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "ccbell/errors.hpp"

namespace ccbell {

CorrelationBox::CorrelationBox(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                               std::vector<double> table)
    : x_labels_(std::move(x_labels)), y_labels_(std::move(y_labels)), table_(std::move(table)) {
    if (x_labels_.empty() || y_labels_.empty()) throw InputError("box labels must be nonempty");
    if (table_.size() != num_x() * num_y() * 4) throw InputError("box table must have |X|*|Y|*4 entries");
    for (double& v : table_) {
        if (!std::isfinite(v) || v < -kNegativeTolerance) throw InputError("box entries must be nonnegative");
        v = std::max(v, 0.0);
    }
    for (std::size_t x = 0; x < num_x(); ++x) {
        for (std::size_t y = 0; y < num_y(); ++y) {
            const double sum = p(x, y, 0, 0) + p(x, y, 0, 1) + p(x, y, 1, 0) + p(x, y, 1, 1);
            if (std::abs(sum - 1.0) > kNormalizationTolerance) {
                throw InputError("box not normalized at (" + x_labels_[x] + ", " + y_labels_[y] + ")");
            }
        }
    }
}

CorrelationBox CorrelationBox::deterministic(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                                             const std::vector<int>& alice, const std::vector<int>& bob) {
    if (alice.size() != x_labels.size() || bob.size() != y_labels.size()) {
        throw InputError("deterministic strategy size mismatch");
    }
    const std::size_t ny = y_labels.size();
    std::vector<double> table(x_labels.size() * ny * 4, 0.0);
    for (std::size_t x = 0; x < x_labels.size(); ++x) {
        for (std::size_t y = 0; y < ny; ++y) table[offset(ny, x, y, alice[x] ? 1 : 0, bob[y] ? 1 : 0)] = 1.0;
    }
    return CorrelationBox(std::move(x_labels), std::move(y_labels), std::move(table));
}

LabelAlignment align(const CorrelationBox& box, const CommProblem& problem) {
    auto lookup = [](const std::vector<std::string>& labels, const std::string& l, const char* which) {
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end()) throw InputError(std::string("box lacks ") + which + " label '" + l + "'");
        return static_cast<std::size_t>(it - labels.begin());
    };
    LabelAlignment al;
    for (const auto& l : problem.x_labels()) al.x.push_back(lookup(box.x_labels(), l, "x"));
    for (const auto& l : problem.y_labels()) al.y.push_back(lookup(box.y_labels(), l, "y"));
    return al;
}

double conditional_success(const CorrelationBox& box, const CommProblem& problem, const LabelAlignment& al,
                           std::size_t x, std::size_t y) {
    const std::size_t bx = al.x[x];
    const std::size_t by = al.y[y];
    const double accept = box.p_alice(bx, by, 1);
    if (accept <= kAcceptanceFloor) return 0.5;
    double hit = 0.0;
    for (int b = 0; b < 2; ++b) {
        if (problem.valid(x, y).contains(b)) hit += box.p(bx, by, 1, b);
    }
    return hit / accept;
}

BoxSummary summarize(const CorrelationBox& box, const CommProblem& problem) {
    const auto al = align(box, problem);
    BoxSummary s;
    for (auto [x, y] : problem.support()) {
        const double mu = problem.mu(x, y);
        const double accept = box.p_alice(al.x[x], al.y[y], 1);
        s.p_A += mu * accept;
        if (accept <= kAcceptanceFloor) s.undefined_pairs.emplace_back(x, y);
        s.p_B += mu * conditional_success(box, problem, al, x, y);
    }
    s.p_A = std::clamp(s.p_A, 0.0, 1.0);
    s.p_B = std::clamp(s.p_B, 0.0, 1.0);
    return s;
}

NonSignalingReport check_nonsignaling(const CorrelationBox& box, double tol) {
    NonSignalingReport r;
    r.tolerance = tol;
    for (std::size_t x = 0; x < box.num_x(); ++x) {
        for (int a = 0; a < 2; ++a) {
            double lo = 1.0, hi = 0.0;
            for (std::size_t y = 0; y < box.num_y(); ++y) {
                lo = std::min(lo, box.p_alice(x, y, a));
                hi = std::max(hi, box.p_alice(x, y, a));
            }
            r.alice_deviation = std::max(r.alice_deviation, hi - lo);
        }
    }
    for (std::size_t y = 0; y < box.num_y(); ++y) {
        for (int b = 0; b < 2; ++b) {
            double lo = 1.0, hi = 0.0;
            for (std::size_t x = 0; x < box.num_x(); ++x) {
                lo = std::min(lo, box.p_bob(x, y, b));
                hi = std::max(hi, box.p_bob(x, y, b));
            }
            r.bob_deviation = std::max(r.bob_deviation, hi - lo);
        }
    }
    r.passed = r.alice_deviation <= tol && r.bob_deviation <= tol;
    return r;
}

CorrelationBox mix(const CorrelationBox& box1, const CorrelationBox& box2, double w) {
    if (!box1.same_labels(box2)) throw InputError("cannot mix boxes with different labels");
    if (!(w >= 0.0 && w <= 1.0)) throw InputError("mixing weight must lie in [0,1]");
    std::vector<double> table(box1.table().size());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = w * box1.table()[i] + (1.0 - w) * box2.table()[i];
    return CorrelationBox(box1.x_labels(), box1.y_labels(), std::move(table));
}

namespace {

std::vector<std::string> labels_from(const nlohmann::json& v, const char* key) {
    if (!v.is_array()) throw InputError(std::string("'") + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (e.is_string()) out.push_back(e.get<std::string>());
        else if (e.is_number_integer()) out.push_back(std::to_string(e.get<long long>()));
        else throw InputError("labels must be strings or integers");
    }
    return out;
}

}  // namespace

CorrelationBox box_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("x") || !doc.contains("y") || !doc.contains("p")) {
        throw InputError("box document needs fields 'x', 'y', 'p'");
    }
    auto xs = labels_from(doc["x"], "x");
    auto ys = labels_from(doc["y"], "y");
    const auto& p = doc["p"];
    std::vector<double> table;
    auto shape_error = [] { return InputError("'p' must be a [x][y][a][b] array with binary a, b"); };
    if (!p.is_array() || p.size() != xs.size()) throw shape_error();
    for (const auto& px : p) {
        if (!px.is_array() || px.size() != ys.size()) throw shape_error();
        for (const auto& pxy : px) {
            if (!pxy.is_array() || pxy.size() != 2) throw shape_error();
            for (const auto& pa : pxy) {
                if (!pa.is_array() || pa.size() != 2) throw shape_error();
                for (const auto& v : pa) {
                    if (!v.is_number()) throw shape_error();
                    table.push_back(v.get<double>());
                }
            }
        }
    }
    return CorrelationBox(std::move(xs), std::move(ys), std::move(table));
}

CorrelationBox box_from_json_text(const std::string& text) {
    try {
        return box_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

nlohmann::json box_to_json(const CorrelationBox& box) {
    nlohmann::json p = nlohmann::json::array();
    for (std::size_t x = 0; x < box.num_x(); ++x) {
        nlohmann::json px = nlohmann::json::array();
        for (std::size_t y = 0; y < box.num_y(); ++y) {
            px.push_back({{box.p(x, y, 0, 0), box.p(x, y, 0, 1)}, {box.p(x, y, 1, 0), box.p(x, y, 1, 1)}});
        }
        p.push_back(std::move(px));
    }
    return {{"x", box.x_labels()}, {"y", box.y_labels()}, {"p", p}};
}

}  // namespace ccbell
