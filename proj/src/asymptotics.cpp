#include "ccbell/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

double loglog(double delta) { return std::log2(std::log2(1.0 / delta)); }

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0,1)");
}

void check_n(double n) {
    if (!(n >= 2.0)) throw InputError("n must be at least 2");
}

std::vector<CurveRow> curves(const std::function<double(double)>& complexity_at, double construction_point,
                             const std::vector<double>& p_B_grid, const std::vector<double>& delta_grid) {
    std::vector<CurveRow> rows;
    for (double p_B : p_B_grid) {
        CurveRow row;
        row.p_B = p_B;
        row.complexity = complexity_at(p_B);
        double best = 0.0;
        for (double delta : delta_grid) {
            if (delta > 0.5) continue;
            const double target = (1.0 - delta) * p_B + delta / 2.0;
            best = std::max(best, complexity_at(target) - loglog(delta));
        }
        row.boundary = best;
        row.construction_region = classify(construction_point, row);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

void AsymptoticFamily::validate() const {
    if (!(c > 0.0 && c_prime > 0.0 && c_double_prime > 0.0)) throw InputError("family constants must be positive");
    if (!(alpha >= 1.0)) throw InputError("alpha must be at least 1");
}

std::string AsymptoticFamily::describe() const {
    std::ostringstream os;
    if (kind == Kind::Vsp) {
        os << "vsp c=" << c;
    } else {
        os << "alpha-phm c'=" << c_prime << " c''=" << c_double_prime << " alpha=" << alpha;
    }
    return os.str();
}

double vsp_classical_bound(double n, double p, const AsymptoticFamily& fam) {
    return pumped_bound(fam.c * std::cbrt(n), p);
}

RhsModel vsp_rhs(double n, const AsymptoticFamily& fam) {
    fam.validate();
    check_n(n);
    RhsModel m;
    m.source = RhsSource::AsymptoticFormula;
    m.description = "VSP bound, " + fam.describe() + ", n=" + std::to_string(n);
    m.complexity = [n, fam](double p) { return vsp_classical_bound(n, p, fam); };
    return m;
}

AsymptoticVerdict asymptotic_vsp(double n, double p_B, double delta, const AsymptoticFamily& fam) {
    fam.validate();
    check_n(n);
    check_delta(delta);
    AsymptoticVerdict v;
    v.delta = delta;
    v.lhs = std::log2(n) + loglog(delta);
    v.rhs = vsp_classical_bound(n, (1.0 - delta) * p_B + delta / 2.0, fam);
    v.violated = v.lhs < v.rhs - kVerdictSlack;
    return v;
}

AsymptoticVerdict asymptotic_vsp_best(double n, double p_B, const AsymptoticFamily& fam,
                                      const std::vector<double>& delta_grid) {
    if (delta_grid.empty()) throw InputError("delta grid must be nonempty");
    AsymptoticVerdict best;
    bool first = true;
    for (double delta : delta_grid) {
        const auto v = asymptotic_vsp(n, p_B, delta, fam);
        if (first || v.rhs - v.lhs > best.rhs - best.lhs) best = v;
        first = false;
    }
    return best;
}

AsymptoticVerdict asymptotic_phm(double n, double delta, const AsymptoticFamily& fam) {
    fam.validate();
    check_n(n);
    check_delta(delta);
    AsymptoticVerdict v;
    v.delta = delta;
    v.lhs = fam.c_prime * std::log2(n) / fam.alpha + loglog(delta);
    const double shrink = (1.0 - delta) / 6.0;
    v.rhs = shrink * shrink / 3.0 * fam.c_double_prime * std::sqrt(n / fam.alpha);
    v.violated = v.lhs < v.rhs - kVerdictSlack;
    return v;
}

std::optional<double> phm_crossover(double delta, const AsymptoticFamily& fam, double n_max) {
    auto violated = [&](double n) { return asymptotic_phm(n, delta, fam).violated; };
    // Below e^2 the difference may still be decreasing; scan those few integers directly.
    for (double n = 2.0; n <= 8.0; n += 1.0) {
        if (violated(n)) return n;
    }
    double hi = 8.0;
    while (!violated(hi)) {
        hi *= 2.0;
        if (hi > n_max) return std::nullopt;
    }
    double lo = hi / 2.0;  // not violated
    while (hi - lo > 1.0) {
        const double mid = std::floor((lo + hi) / 2.0);
        (violated(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::optional<double> crossover_on_grid(const std::vector<double>& n_grid,
                                        const std::function<bool(double)>& violated) {
    std::optional<double> start;
    for (double n : n_grid) {
        if (violated(n)) {
            if (!start) start = n;
        } else {
            start.reset();
        }
    }
    return start;
}

std::vector<double> power_of_two_grid(int lo, int hi) {
    std::vector<double> grid;
    for (int e = lo; e <= hi; ++e) grid.push_back(std::ldexp(1.0, e));
    return grid;
}

std::vector<double> uniform_grid(double a, double b, int points) {
    if (points < 1) throw InputError("grid needs at least one point");
    if (points == 1) return {a};
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) grid.push_back(a + (b - a) * i / (points - 1));
    return grid;
}

std::vector<double> dense_half_delta_grid(double step, double t_max) {
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((t_max - 1.0) / step + 1e-9));
    for (int i = 0; i <= count; ++i) grid.push_back(std::exp2(-(1.0 + i * step)));
    return grid;
}

std::string to_string(Region region) {
    switch (region) {
        case Region::Detected: return "detected";
        case Region::AdvantageOnly: return "advantage-only";
        case Region::Classical: return "classical";
    }
    return "classical";
}

Region classify(double log_inv_p_A, const CurveRow& row) {
    if (log_inv_p_A < row.boundary) return Region::Detected;
    if (log_inv_p_A < row.complexity) return Region::AdvantageOnly;
    return Region::Classical;
}

std::vector<CurveRow> vsp_curves(double n, const AsymptoticFamily& fam, const std::vector<double>& p_B_grid,
                                 const std::vector<double>& delta_grid) {
    fam.validate();
    check_n(n);
    return curves([&](double p) { return vsp_classical_bound(n, p, fam); }, std::log2(n), p_B_grid, delta_grid);
}

std::vector<CurveRow> phm_curves(double n, const AsymptoticFamily& fam, const std::vector<double>& p_B_grid,
                                 const std::vector<double>& delta_grid) {
    fam.validate();
    check_n(n);
    const double c_two_thirds = fam.c_double_prime * std::sqrt(n / fam.alpha);
    return curves([&](double p) { return pumped_bound(c_two_thirds, p); }, fam.c_prime * std::log2(n) / fam.alpha,
                  p_B_grid, delta_grid);
}

}  // namespace ccbell
