#pragma once

#include <span>
#include <string>
#include <vector>

#include "qta/qca.hpp"
#include "qta/qlin.hpp"

namespace qta {

// Hermitian R with R psi_t = e^{i phase} psi_0. The canonical construction
// is the minimal-Frobenius-norm Hermitian solution
//   R = b x^dag + x b^dag - s x x^dag,
// with x = psi_t and b = e^{i phase} psi_0 phased so that s = <x|b> is real
// and nonnegative.
struct ReversalOperator {
    Matrix matrix;
    double phase = 0.0;   // phi applied to psi_0
    double overlap = 0.0; // s = |<psi_t|psi_0>| in [0, 1]
};

ReversalOperator reversal_operator(const StateVector& psi0, const StateVector& psi_t);

// Coarse circuit-complexity proxy: sum of squared eigenvalue moduli of R,
// computed as the squared Frobenius norm. Equals 2 - s^2 for the canonical
// construction, so it lies in [1, 2].
struct ComplexityReport {
    double value = 0.0;
    double overlap = 0.0;
};

ComplexityReport coarse_complexity(const ReversalOperator& r);

// Evolve `steps`, then score the reversal from the evolved state back to
// the initial one.
ComplexityReport complexity_of_evolution(const StateVector& initial, const GlobalOperator& g,
                                         int steps);

// ---------------------------------------------------------------------------
// k-local Hamiltonians
// ---------------------------------------------------------------------------

// Length-n word over {I, X, Y, Z}; qubit 0 is the leftmost letter and the
// first tensor factor.
class PauliString {
public:
    PauliString(int n_qubits, std::string letters);

    int n_qubits() const { return n_qubits_; }
    const std::string& letters() const { return letters_; }
    int weight() const; // non-identity letter count
    Matrix to_matrix() const;

private:
    int n_qubits_;
    std::string letters_;
};

int pauli_weight(const PauliString& p);

struct PauliTerm {
    PauliString string;
    double coupling;
};

struct KLocalHamiltonian {
    int n_qubits = 0;
    int locality = 0;
    std::vector<PauliTerm> terms;
    Matrix matrix; // dense sum J_I sigma_I, Hermitian
};

// Exactly-k-local Hamiltonian: one term per (size-k site subset, letter
// assignment in {X,Y,Z}^k). Subsets enumerate lexicographically and letters
// in base-3 (X<Y<Z) order; couplings follow that order.
KLocalHamiltonian build_k_local(int n_qubits, int locality, RngSeed seed);
KLocalHamiltonian build_k_local(int n_qubits, int locality, std::span<const double> couplings);

// Number of terms build_k_local generates: C(K,k) * 3^k.
std::size_t k_local_term_count(int n_qubits, int locality);

// Validates weights and assembles the dense matrix; used by the JSON import.
KLocalHamiltonian assemble_hamiltonian(int n_qubits, int locality, std::vector<PauliTerm> terms);

// U(t) = e^{-iHt} through the spectral decomposition; unitary within 1e-8.
Matrix time_evolution(const KLocalHamiltonian& h, double t);

} // namespace qta
