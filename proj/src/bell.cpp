#include "ccbell/bell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCeilSlack = 1e-9;

DeltaRow evaluate_at(const BoxSummary& s, const RhsModel& rhs, double delta) {
    DeltaRow row;
    row.delta = delta;
    row.target = (1.0 - delta) * s.p_B + delta / 2.0;
    row.lhs = communication_lhs(s.p_A, delta);
    row.rhs = rhs.complexity(row.target);
    return row;
}

// rhs - lhs, with unattainable targets never counting as a violation.
double gap(const DeltaRow& row) {
    if (std::isinf(row.rhs) || std::isinf(row.lhs)) return -kInf;
    return row.rhs - row.lhs;
}

}  // namespace

std::string to_string(RhsSource source) {
    switch (source) {
        case RhsSource::ExactSearch: return "exact-search";
        case RhsSource::PumpedBound: return "pumped-bound";
        case RhsSource::AsymptoticFormula: return "asymptotic-formula";
        case RhsSource::Custom: return "custom";
    }
    return "custom";
}

RhsModel exact_rhs(const CCCurve& curve) {
    RhsModel m;
    m.source = RhsSource::ExactSearch;
    m.description = "exact one-way complexity of " + curve.problem_id;
    m.complexity = [curve](double p) {
        auto c = curve.complexity(p);
        return c ? static_cast<double>(*c) : kInf;
    };
    return m;
}

RhsModel exact_rhs(const CommProblem& problem) { return exact_rhs(exact_curve(problem)); }

RhsModel pumped_rhs(double c_two_thirds) {
    RhsModel m;
    m.source = RhsSource::PumpedBound;
    m.description = "pumped bound from C(2/3) = " + std::to_string(c_two_thirds);
    m.complexity = [c_two_thirds](double p) { return pumped_bound(c_two_thirds, p); };
    return m;
}

std::vector<double> default_delta_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) grid.push_back(std::ldexp(1.0, -k));
    grid.push_back(2.0 / 3.0);
    return grid;
}

double communication_lhs(double p_A, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0,1)");
    if (!(p_A >= 0.0 && p_A <= 1.0)) throw InputError("p_A must lie in [0,1]");
    if (p_A <= 0.0) return kInf;
    const double inner = std::log2(1.0 / p_A) + std::log2(std::log2(1.0 / delta));
    return std::max(0.0, std::ceil(inner - kCeilSlack)) + 1.0;
}

BellReport evaluate(const BoxSummary& summary, const RhsModel& rhs, const EvaluateOptions& options) {
    if (options.delta_grid.empty()) throw InputError("delta grid must be nonempty");
    for (double d : options.delta_grid) {
        if (!(d > 0.0 && d < 1.0)) throw InputError("delta grid entries must lie in (0,1)");
    }
    BellReport report;
    report.p_A = summary.p_A;
    report.p_B = summary.p_B;
    report.rhs_source = rhs.source;
    report.rhs_description = rhs.description;

    std::size_t best = 0;
    for (double d : options.delta_grid) {
        report.per_delta.push_back(evaluate_at(summary, rhs, d));
        if (gap(report.per_delta.back()) > gap(report.per_delta[best])) best = report.per_delta.size() - 1;
    }

    if (options.refine && options.delta_grid.size() > 1) {
        std::vector<double> sorted = options.delta_grid;
        std::sort(sorted.begin(), sorted.end());
        const double centre = report.per_delta[best].delta;
        auto pos = std::lower_bound(sorted.begin(), sorted.end(), centre);
        double lo = pos == sorted.begin() ? sorted.front() / 2.0 : *(pos - 1);
        double hi = pos + 1 == sorted.end() ? (sorted.back() + 1.0) / 2.0 : *(pos + 1);
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = hi - phi * (hi - lo);
        double b = lo + phi * (hi - lo);
        auto probe = [&](double d) {
            report.per_delta.push_back(evaluate_at(summary, rhs, d));
            if (gap(report.per_delta.back()) > gap(report.per_delta[best])) best = report.per_delta.size() - 1;
            return gap(report.per_delta.back());
        };
        double fa = probe(a), fb = probe(b);
        for (int it = 0; it < 40; ++it) {
            if (fa >= fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - phi * (hi - lo);
                fa = probe(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + phi * (hi - lo);
                fb = probe(b);
            }
        }
    }

    const DeltaRow& star = report.per_delta[best];
    report.delta_star = star.delta;
    report.lhs = star.lhs;
    report.rhs = star.rhs;
    report.violated = gap(star) > kVerdictSlack;
    return report;
}

nlohmann::json report_to_json(const BellReport& report) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.per_delta) {
        rows.push_back({{"delta", r.delta}, {"target", r.target}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}});
    }
    return {{"lhs", num(report.lhs)},
            {"rhs", num(report.rhs)},
            {"delta_star", report.delta_star},
            {"violated", report.violated},
            {"rhs_source", to_string(report.rhs_source)},
            {"rhs_description", report.rhs_description},
            {"p_A", report.p_A},
            {"p_B", report.p_B},
            {"per_delta", rows}};
}

double rac_inequality(const CorrelationBox& box, RacLabeling labeling) {
    static const CommProblem rac = rac21();
    const auto al = align(box, rac);
    double total = 0.0;
    for (std::size_t x = 0; x < rac.num_x(); ++x) {
        for (std::size_t y = 0; y < rac.num_y(); ++y) {
            const int bit = rac.valid(x, y).contains(1) ? 1 : 0;
            const int flip = labeling == RacLabeling::HeraldedState ? 1 : 0;
            for (int a = 0; a < 2; ++a) total += box.p(al.x[x], al.y[y], a, bit ^ a ^ flip) / 8.0;
        }
    }
    return total;
}

NoiseThreshold noise_threshold(const QuantumProtocol& protocol, const CommProblem& problem,
                               const NoiseOptions& options) {
    if (!(options.tol > 0.0)) throw InputError("tolerance must be positive");
    const int d = protocol.dim();
    const CorrelationBox entangled = box_from_protocol(protocol, phi_plus(d), problem);
    const CorrelationBox noise = box_from_protocol(protocol, maximally_mixed_pair(d), problem);

    std::optional<RhsModel> rhs = options.rhs;
    if (options.inequality == InequalityKind::Communication && !rhs) rhs = exact_rhs(problem);

    auto violated = [&](double p) {
        const CorrelationBox box = mix(entangled, noise, p);
        if (options.inequality == InequalityKind::Rac) return rac_violated(rac_inequality(box));
        return evaluate(summarize(box, problem), *rhs, options.evaluate).violated;
    };

    NoiseThreshold out;
    if (!violated(1.0)) return out;
    out.found = true;
    if (violated(0.0)) {
        out.p_star = out.lower = out.upper = 0.0;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > options.tol) {
        const double mid = 0.5 * (lo + hi);
        (violated(mid) ? hi : lo) = mid;
        ++out.iterations;
    }
    out.lower = lo;
    out.upper = hi;
    out.p_star = 0.5 * (lo + hi);
    return out;
}

}  // namespace ccbell
