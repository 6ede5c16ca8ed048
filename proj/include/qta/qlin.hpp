#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qta/errors.hpp"
#include "qta/rng.hpp"

namespace qta {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Shared numerical tolerances. Dense double-precision problems at
// dim <= 4096 keep errors far below these bounds.
namespace tol {
inline constexpr double unitarity = 1e-10;
inline constexpr double hermiticity = 1e-10;
inline constexpr double eig_residual = 1e-8;
inline constexpr double eig_precondition = 1e-8;
inline constexpr double state_norm = 1e-9;
inline constexpr double annihilation = 1e-12;
inline constexpr double translation_defect = 1e-9;
} // namespace tol

inline constexpr int max_qubits = 12;

// Largest absolute entry, used for all max-norm contract checks.
double max_abs(const Matrix& m);
double unitarity_defect(const Matrix& m);  // ||U^dag U - I||_max
double hermiticity_defect(const Matrix& m); // ||M - M^dag||_max
bool is_unitary(const Matrix& m, double tolerance = tol::unitarity);
bool is_hermitian(const Matrix& m, double tolerance = tol::hermiticity);

// Basis convention used everywhere: big-endian bitstrings. Basis index b of
// an n-qubit register carries qubit 0 in its most significant bit, so
// |q0 q1 ... q_{n-1}> has index sum_j q_j * 2^(n-1-j).
inline int qubit_bit_shift(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }

// Normalized amplitude vector over the 2^n big-endian basis states.
class StateVector {
public:
    // Validates length 2^n and unit norm (within 1e-9).
    StateVector(int n_qubits, Vector amplitudes);

    // Rescales an arbitrary nonzero vector to unit norm.
    static StateVector normalized(int n_qubits, Vector amplitudes);
    static StateVector basis_state(int n_qubits, std::size_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }

    RealVector probabilities() const;

    // <this|other>
    Complex inner(const StateVector& other) const;

private:
    int n_qubits_;
    Vector amplitudes_;
};

// Hermitian, unit-trace matrix over 2^n basis states. Positive
// semidefiniteness is not rechecked on every construction; callers that
// need it can inspect min_eigenvalue().
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);

    static DensityMatrix pure(const StateVector& psi);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

    double min_eigenvalue() const;

private:
    int n_qubits_;
    Matrix entries_;
};

// Pauli matrices and the handful of named gates the automata use.
namespace gates {
Matrix identity(Eigen::Index dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
Matrix cnot(); // control = first tensor factor
} // namespace gates

// Kronecker (tensor) product, dims (a.rows*b.rows, a.cols*b.cols).
Matrix kron(const Matrix& a, const Matrix& b);

// Embeds a 4x4 gate on the qubit pair (site, site+1 mod n), qubit `site` as
// the first tensor factor, identity elsewhere. The wrap pair is handled by
// direct index arithmetic, equivalent to conjugating by the permutation
// that brings the two qubits adjacent.
Matrix embed_two_qubit(const Matrix& u, int site, int n_qubits);

// Single-qubit analogue; used by the teleportation protocol.
Matrix embed_one_qubit(const Matrix& u, int qubit, int n_qubits);

// Reduced density matrix over `keep` (indices into 0..n-1, any order;
// kept qubits appear in increasing original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Haar-distributed d x d unitary: Ginibre sample, QR, then each column of Q
// multiplied by r_ii/|r_ii|. Deterministic in the seed.
Matrix haar_unitary(int dim, RngSeed seed);

// Amplitudes drawn as independent complex standard normals, normalized.
StateVector random_state(int n_qubits, RngSeed seed);

struct HermitianEig {
    RealVector eigenvalues; // ascending
    Matrix eigenvectors;    // orthonormal columns
};

// Requires input Hermitian within 1e-8; residual ||m - V L V^dag||_max < 1e-8.
HermitianEig eig_hermitian(const Matrix& m);

struct UnitaryEig {
    Vector eigenvalues; // on the unit circle
    Matrix eigenvectors;
};

// Requires input unitary within 1e-8. Implemented via a Schur
// decomposition; for a unitary (hence normal) matrix the Schur form is
// diagonal and the Schur vectors are an orthonormal eigenbasis.
UnitaryEig eig_unitary(const Matrix& m);

} // namespace qta
