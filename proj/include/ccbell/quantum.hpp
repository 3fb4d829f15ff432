#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ccbell/correlations.hpp"
#include "ccbell/problems.hpp"

namespace ccbell {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Local dimensions above this are refused (bipartite states are d^2 x d^2 dense).
inline constexpr int kMaxLocalDimension = 64;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;

enum class StateKind { Local, Bipartite };

/// Density matrix of a d-level system or of two d-level systems
/// (product basis |i>|k> at row i*d + k). Validated on construction:
/// Hermitian, unit trace, positive semidefinite.
class QState {
public:
    QState(int dim, CMatrix rho, StateKind kind);

    int dim() const { return dim_; }
    StateKind kind() const { return kind_; }
    const CMatrix& rho() const { return rho_; }

    double purity() const { return (rho_ * rho_).trace().real(); }

    // Reduced states of a bipartite state.
    CMatrix reduced_alice() const;
    CMatrix reduced_bob() const;

private:
    // Closed-form states below are valid by construction; skipping the
    // eigenvalue check keeps d = 64 (a 4096 x 4096 matrix) affordable.
    struct Unchecked {};
    QState(int dim, CMatrix rho, StateKind kind, Unchecked);
    friend QState phi_plus(int d);
    friend QState maximally_mixed_pair(int d);
    friend QState isotropic(int d, double p);

    int dim_;
    CMatrix rho_;
    StateKind kind_;
};

/// Two-outcome POVM {E0 = I - E1, E1}; E1 is the effect of outcome 1.
class BinaryMeasurement {
public:
    explicit BinaryMeasurement(CMatrix effect_one);

    int dim() const { return static_cast<int>(effect_.rows()); }
    const CMatrix& effect(int outcome) const { return outcome ? effect_ : complement_; }

private:
    CMatrix effect_;
    CMatrix complement_;
};

/// One-way quantum protocol: Alice sends |psi_x>, Bob measures B_y and
/// outputs the result.
struct QuantumProtocol {
    std::vector<std::string> x_labels;
    std::vector<std::string> y_labels;
    std::vector<CVector> states;                 // aligned with x_labels
    std::vector<BinaryMeasurement> measurements;  // aligned with y_labels
    double declared_success = 0.0;

    // Validates unit norms, common dimension and label/entry counts.
    void validate() const;
    int dim() const { return static_cast<int>(states.front().size()); }
    // log2 of the dimension; fractional for non-powers of two.
    double qubits() const;
};

CMatrix identity(int d);
CMatrix projector(const CVector& psi);
// Kronecker product, A acting on the first factor.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Qubit pure state with unit Bloch vector r.
CVector bloch_state(double rx, double ry, double rz);
// Projector (I + n.sigma)/2 onto the unit Bloch direction n.
CMatrix bloch_projector(double nx, double ny, double nz);

QState phi_plus(int d);
QState maximally_mixed_pair(int d);
// p * Phi+ + (1 - p) * I / d^2.
QState isotropic(int d, double p);
// Two-qubit isotropic state p * Phi+ + (1 - p) * I / 4.
QState werner(double p);

// Tr[(A (x) B) rho] for a bipartite rho.
Complex bipartite_expectation(const CMatrix& a, const CMatrix& b, const QState& state);

/// Construction on a shared bipartite state: Alice measures the projector
/// onto conj(psi_x) (outcome a = 1) and Bob measures B_y. The resulting box
/// has p(a,b|x,y) = Tr[(E_x^a (x) E_y^b) rho], labelled like the problem.
///
/// On Phi+ this prepares psi_x on Bob's side whenever a = 1, so
/// p(a=1|x,y) = 1/d and p(b|x,y,a=1) = <psi_x|E_y^b|psi_x>.
CorrelationBox box_from_protocol(const QuantumProtocol& protocol, const QState& state, const CommProblem& problem);

/// Qubit protocol for the 2->1 random access code. psi_x has Bloch vector
/// ((-1)^x0, (-1)^x1, 0)/sqrt(2) and Bob's outcome b = 1 projects onto the
/// Bloch direction -(1-y, y, 0). Success cos^2(pi/8) for every (x,y).
QuantumProtocol rac_quantum_protocol();

// Same protocol with Bob's outcome labels swapped (the other sign convention).
QuantumProtocol rac_quantum_protocol_flipped();

/// Protocol document: {"x": [...], "y": [...], "states": [[amp, ...], ...],
/// "effects": [[[entry, ...], ...], ...], "declared_success": p}. Amplitudes and
/// matrix entries are numbers or [re, im] pairs; effects are Bob's outcome-1
/// operators. States must have unit norm within 1e-10.
QuantumProtocol protocol_from_json(const nlohmann::json& doc);
QuantumProtocol protocol_from_json_text(const std::string& text);

}  // namespace ccbell
