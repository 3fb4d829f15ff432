#include "ccbell/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ccbell/errors.hpp"

namespace ccbell {

namespace {

void check_dim(int d) {
    if (d < 2) throw InputError("dimension must be at least 2");
    if (d > kMaxLocalDimension) throw GuardExceeded("local dimension " + std::to_string(d) + " exceeds 64");
}

bool is_hermitian(const CMatrix& m, double tol) { return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol; }

double min_eigenvalue(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

QState::QState(int dim, CMatrix rho, StateKind kind) : dim_(dim), rho_(std::move(rho)), kind_(kind) {
    check_dim(dim_);
    const Eigen::Index n = kind_ == StateKind::Bipartite ? dim_ * dim_ : dim_;
    if (rho_.rows() != n || rho_.cols() != n) throw InputError("density matrix has the wrong shape");
    if (!is_hermitian(rho_, kHermitianTolerance)) throw InputError("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > kTraceTolerance) throw InputError("density matrix trace != 1");
    if (min_eigenvalue(rho_) < -kPsdTolerance) throw InputError("density matrix is not positive semidefinite");
}

QState::QState(int dim, CMatrix rho, StateKind kind, Unchecked) : dim_(dim), rho_(std::move(rho)), kind_(kind) {
    check_dim(dim_);
}

CMatrix QState::reduced_alice() const {
    if (kind_ != StateKind::Bipartite) throw InputError("reduced state needs a bipartite state");
    const int d = dim_;
    CMatrix out = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out(i, j) += rho_(i * d + k, j * d + k);
    return out;
}

CMatrix QState::reduced_bob() const {
    if (kind_ != StateKind::Bipartite) throw InputError("reduced state needs a bipartite state");
    const int d = dim_;
    CMatrix out = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i) out(k, l) += rho_(i * d + k, i * d + l);
    return out;
}

BinaryMeasurement::BinaryMeasurement(CMatrix effect_one) : effect_(std::move(effect_one)) {
    if (effect_.rows() != effect_.cols() || effect_.rows() < 1) throw InputError("effect must be square");
    if (!is_hermitian(effect_, kHermitianTolerance)) throw InputError("effect is not Hermitian");
    if (min_eigenvalue(effect_) < -kPsdTolerance || max_eigenvalue(effect_) > 1.0 + kPsdTolerance) {
        throw InputError("effect eigenvalues must lie in [0,1]");
    }
    complement_ = CMatrix::Identity(effect_.rows(), effect_.cols()) - effect_;
}

void QuantumProtocol::validate() const {
    if (states.empty() || states.size() != x_labels.size()) throw InputError("protocol needs one state per x label");
    if (measurements.size() != y_labels.size() || measurements.empty()) {
        throw InputError("protocol needs one measurement per y label");
    }
    const auto d = states.front().size();
    check_dim(static_cast<int>(d));
    for (const auto& s : states) {
        if (s.size() != d) throw InputError("protocol states have different dimensions");
        if (std::abs(s.norm() - 1.0) > 1e-10) throw InputError("protocol states must have unit norm");
    }
    for (const auto& m : measurements) {
        if (m.dim() != static_cast<int>(d)) throw InputError("measurement dimension does not match states");
    }
}

double QuantumProtocol::qubits() const { return std::log2(static_cast<double>(dim())); }

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

CMatrix projector(const CVector& psi) { return psi * psi.adjoint(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector bloch_state(double rx, double ry, double rz) {
    const double norm = std::sqrt(rx * rx + ry * ry + rz * rz);
    if (std::abs(norm - 1.0) > 1e-12) throw InputError("Bloch vector of a pure state must have unit length");
    const double theta = std::acos(std::clamp(rz, -1.0, 1.0));
    const double phi = std::atan2(ry, rx);
    CVector v(2);
    v[0] = std::cos(theta / 2.0);
    v[1] = std::polar(std::sin(theta / 2.0), phi);
    return v;
}

CMatrix bloch_projector(double nx, double ny, double nz) {
    CMatrix m(2, 2);
    m(0, 0) = 0.5 * (1.0 + nz);
    m(1, 1) = 0.5 * (1.0 - nz);
    m(0, 1) = Complex(0.5 * nx, -0.5 * ny);
    m(1, 0) = Complex(0.5 * nx, 0.5 * ny);
    return m;
}

QState phi_plus(int d) {
    check_dim(d);
    CMatrix rho = CMatrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho(i * d + i, j * d + j) = 1.0 / d;
    return QState(d, std::move(rho), StateKind::Bipartite, QState::Unchecked{});
}

QState maximally_mixed_pair(int d) {
    check_dim(d);
    return QState(d, CMatrix::Identity(d * d, d * d) / static_cast<double>(d * d), StateKind::Bipartite,
                  QState::Unchecked{});
}

QState isotropic(int d, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("isotropic weight must lie in [0,1]");
    check_dim(d);
    CMatrix rho = (1.0 - p) * CMatrix::Identity(d * d, d * d) / static_cast<double>(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho(i * d + i, j * d + j) += p / d;
    return QState(d, std::move(rho), StateKind::Bipartite, QState::Unchecked{});
}

QState werner(double p) { return isotropic(2, p); }

Complex bipartite_expectation(const CMatrix& a, const CMatrix& b, const QState& state) {
    if (state.kind() != StateKind::Bipartite) throw InputError("expectation needs a bipartite state");
    const int d = state.dim();
    if (a.rows() != d || b.rows() != d) throw InputError("operator dimension does not match state");
    const CMatrix& rho = state.rho();
    // Tr[(A (x) B) rho] = sum A_ij B_kl rho_(jl),(ik)
    Complex total = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (a(i, j) == Complex(0.0)) continue;
            Complex inner = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) inner += b(k, l) * rho(j * d + l, i * d + k);
            total += a(i, j) * inner;
        }
    return total;
}

CorrelationBox box_from_protocol(const QuantumProtocol& protocol, const QState& state, const CommProblem& problem) {
    protocol.validate();
    if (state.kind() != StateKind::Bipartite) throw InputError("construction needs a bipartite state");
    const int d = protocol.dim();
    if (state.dim() != d) throw InputError("state dimension does not match the protocol");

    auto find = [](const std::vector<std::string>& labels, const std::string& l, const char* which) {
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end()) throw InputError(std::string("protocol has no ") + which + " entry for '" + l + "'");
        return static_cast<std::size_t>(it - labels.begin());
    };

    const std::size_t nx = problem.num_x();
    const std::size_t ny = problem.num_y();
    const CMatrix& rho = state.rho();
    std::vector<double> table(nx * ny * 4, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
        const CVector& psi = protocol.states[find(protocol.x_labels, problem.x_labels()[x], "state")];
        const CMatrix alice_one = projector(psi.conjugate());
        // Unnormalized state of Bob conditioned on a = 1: Tr_A[(E (x) I) rho].
        CMatrix bob_cond = CMatrix::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (alice_one(i, j) == Complex(0.0)) continue;
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) bob_cond(l, k) += alice_one(i, j) * rho(j * d + l, i * d + k);
            }
        const CMatrix bob_all = state.reduced_bob();
        for (std::size_t y = 0; y < ny; ++y) {
            const auto& meas = protocol.measurements[find(protocol.y_labels, problem.y_labels()[y], "measurement")];
            const double p11 = (meas.effect(1) * bob_cond).trace().real();
            const double p1_ = bob_cond.trace().real();
            const double p_1 = (meas.effect(1) * bob_all).trace().real();
            table[CorrelationBox::offset(ny, x, y, 1, 1)] = p11;
            table[CorrelationBox::offset(ny, x, y, 1, 0)] = p1_ - p11;
            table[CorrelationBox::offset(ny, x, y, 0, 1)] = p_1 - p11;
            table[CorrelationBox::offset(ny, x, y, 0, 0)] = 1.0 - p1_ - p_1 + p11;
        }
    }
    for (double& v : table) {
        if (v < 0.0 && v > -1e-12) v = 0.0;
    }
    return CorrelationBox(problem.x_labels(), problem.y_labels(), std::move(table));
}

namespace {

QuantumProtocol make_rac_protocol(bool flipped) {
    const CommProblem rac = rac21();
    QuantumProtocol proto;
    proto.x_labels = rac.x_labels();
    proto.y_labels = rac.y_labels();
    const double s = 1.0 / std::sqrt(2.0);
    for (const auto& x : proto.x_labels) {
        const int x0 = x[1] - '0';
        const int x1 = x[0] - '0';
        proto.states.push_back(bloch_state(s * (x0 ? -1.0 : 1.0), s * (x1 ? -1.0 : 1.0), 0.0));
    }
    for (int y = 0; y < 2; ++y) {
        // Outcome b projects onto (-1)^b (1-y, y, 0).
        const double sign = flipped ? 1.0 : -1.0;
        proto.measurements.emplace_back(bloch_projector(sign * (1 - y), sign * y, 0.0));
    }
    const double c = std::cos(std::numbers::pi / 8.0);
    proto.declared_success = flipped ? 1.0 - c * c : c * c;
    proto.validate();
    return proto;
}

}  // namespace

QuantumProtocol rac_quantum_protocol() { return make_rac_protocol(false); }

QuantumProtocol rac_quantum_protocol_flipped() { return make_rac_protocol(true); }

namespace {

Complex complex_from_json(const nlohmann::json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw InputError("complex entries must be numbers or [re, im] pairs");
}

std::vector<std::string> protocol_labels(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) throw InputError(std::string("'") + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& l : doc[key]) {
        if (l.is_string()) out.push_back(l.get<std::string>());
        else if (l.is_number_integer()) out.push_back(std::to_string(l.get<long long>()));
        else throw InputError("labels must be strings or integers");
    }
    return out;
}

}  // namespace

QuantumProtocol protocol_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("protocol document must be a JSON object");
    QuantumProtocol proto;
    proto.x_labels = protocol_labels(doc, "x");
    proto.y_labels = protocol_labels(doc, "y");
    if (!doc.contains("states") || !doc["states"].is_array()) throw InputError("'states' must be an array");
    if (!doc.contains("effects") || !doc["effects"].is_array()) throw InputError("'effects' must be an array");
    for (const auto& js : doc["states"]) {
        if (!js.is_array() || js.empty()) throw InputError("each state must be a nonempty array");
        CVector v(static_cast<Eigen::Index>(js.size()));
        for (std::size_t i = 0; i < js.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(js[i]);
        proto.states.push_back(v);
    }
    for (const auto& je : doc["effects"]) {
        if (!je.is_array() || je.empty()) throw InputError("each effect must be a square matrix");
        const auto n = static_cast<Eigen::Index>(je.size());
        CMatrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& row = je[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw InputError("each effect must be a square matrix");
            }
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
        }
        proto.measurements.emplace_back(m);
    }
    if (doc.contains("declared_success")) {
        if (!doc["declared_success"].is_number()) throw InputError("'declared_success' must be a number");
        proto.declared_success = doc["declared_success"].get<double>();
    }
    proto.validate();
    if (proto.dim() > kMaxLocalDimension) throw GuardExceeded("protocol dimension exceeds 64");
    return proto;
}

QuantumProtocol protocol_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return protocol_from_json(doc);
}

}  // namespace ccbell
