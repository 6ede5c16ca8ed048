#include "qta/complexity.hpp"

#include <cmath>
#include <utility>

namespace qta {

ReversalOperator reversal_operator(const StateVector& psi0, const StateVector& psi_t) {
    if (psi0.dim() != psi_t.dim()) throw InputError("reversal_operator: dimension mismatch");

    const Complex c = psi_t.inner(psi0); // <psi_t|psi_0>
    const double s = std::abs(c);
    const double phase = s == 0.0 ? 0.0 : -std::arg(c);

    const Vector x = psi_t.amplitudes();
    const Vector b = std::exp(Complex(0.0, phase)) * psi0.amplitudes();

    ReversalOperator r;
    r.phase = phase;
    r.overlap = s;
    r.matrix = b * x.adjoint() + x * b.adjoint() - s * (x * x.adjoint());
    return r;
}

ComplexityReport coarse_complexity(const ReversalOperator& r) {
    return {r.matrix.squaredNorm(), r.overlap};
}

ComplexityReport complexity_of_evolution(const StateVector& initial, const GlobalOperator& g,
                                         int steps) {
    const Trajectory traj = evolve(initial, g, steps);
    return coarse_complexity(reversal_operator(initial, traj.states.back()));
}

// ---------------------------------------------------------------------------
// k-local Hamiltonians
// ---------------------------------------------------------------------------

PauliString::PauliString(int n_qubits, std::string letters)
    : n_qubits_(n_qubits), letters_(std::move(letters)) {
    if (n_qubits_ < 1 || n_qubits_ > max_qubits)
        throw InputError("PauliString: qubit count out of range [1, 12]");
    if (letters_.size() != static_cast<std::size_t>(n_qubits_))
        throw InputError("PauliString: letter count does not match qubit count");
    for (char c : letters_)
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw InputError(std::string("PauliString: invalid letter '") + c + "'");
}

int PauliString::weight() const {
    int w = 0;
    for (char c : letters_)
        if (c != 'I') ++w;
    return w;
}

Matrix PauliString::to_matrix() const {
    Matrix acc = Matrix::Ones(1, 1);
    for (char c : letters_) {
        switch (c) {
        case 'I': acc = kron(acc, gates::identity(2)); break;
        case 'X': acc = kron(acc, gates::pauli_x()); break;
        case 'Y': acc = kron(acc, gates::pauli_y()); break;
        case 'Z': acc = kron(acc, gates::pauli_z()); break;
        }
    }
    return acc;
}

int pauli_weight(const PauliString& p) { return p.weight(); }

std::size_t k_local_term_count(int n_qubits, int locality) {
    // C(K,k) * 3^k
    std::size_t binom = 1;
    for (int i = 1; i <= locality; ++i)
        binom = binom * static_cast<std::size_t>(n_qubits - locality + i) / static_cast<std::size_t>(i);
    std::size_t pow3 = 1;
    for (int i = 0; i < locality; ++i) pow3 *= 3;
    return binom * pow3;
}

namespace {

void check_k_local_args(int n_qubits, int locality) {
    if (n_qubits < 1 || n_qubits > max_qubits)
        throw InputError("build_k_local: qubit count out of range [1, 12]");
    if (locality < 1 || locality > n_qubits)
        throw InputError("build_k_local: locality must satisfy 1 <= k <= K");
}

// Enumerates size-k subsets of {0..K-1} lexicographically and letter
// assignments in base-3 X<Y<Z order, invoking fn(letters) per term.
template <typename Fn>
void for_each_term(int n_qubits, int locality, Fn&& fn) {
    static constexpr char kLetters[3] = {'X', 'Y', 'Z'};

    std::vector<int> sites(static_cast<std::size_t>(locality));
    for (int i = 0; i < locality; ++i) sites[static_cast<std::size_t>(i)] = i;

    while (true) {
        std::vector<int> assignment(static_cast<std::size_t>(locality), 0);
        while (true) {
            std::string letters(static_cast<std::size_t>(n_qubits), 'I');
            for (int i = 0; i < locality; ++i)
                letters[static_cast<std::size_t>(sites[static_cast<std::size_t>(i)])] =
                    kLetters[assignment[static_cast<std::size_t>(i)]];
            fn(letters);

            int pos = locality - 1;
            while (pos >= 0 && assignment[static_cast<std::size_t>(pos)] == 2) {
                assignment[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++assignment[static_cast<std::size_t>(pos)];
        }

        // next lexicographic subset
        int pos = locality - 1;
        while (pos >= 0 && sites[static_cast<std::size_t>(pos)] == n_qubits - locality + pos) --pos;
        if (pos < 0) break;
        ++sites[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < locality; ++i)
            sites[static_cast<std::size_t>(i)] = sites[static_cast<std::size_t>(i - 1)] + 1;
    }
}

KLocalHamiltonian build_from_couplings(int n_qubits, int locality,
                                       std::span<const double> couplings) {
    std::vector<PauliTerm> terms;
    terms.reserve(couplings.size());
    std::size_t index = 0;
    for_each_term(n_qubits, locality, [&](const std::string& letters) {
        terms.push_back({PauliString(n_qubits, letters), couplings[index++]});
    });
    return assemble_hamiltonian(n_qubits, locality, std::move(terms));
}

} // namespace

KLocalHamiltonian build_k_local(int n_qubits, int locality, RngSeed seed) {
    check_k_local_args(n_qubits, locality);
    Xoshiro256ss rng(seed);
    std::vector<double> couplings(k_local_term_count(n_qubits, locality));
    for (double& j : couplings) j = rng.normal();
    return build_from_couplings(n_qubits, locality, couplings);
}

KLocalHamiltonian build_k_local(int n_qubits, int locality, std::span<const double> couplings) {
    check_k_local_args(n_qubits, locality);
    if (couplings.size() != k_local_term_count(n_qubits, locality))
        throw InputError("build_k_local: expected one coupling per (subset, letters) term");
    return build_from_couplings(n_qubits, locality, couplings);
}

KLocalHamiltonian assemble_hamiltonian(int n_qubits, int locality, std::vector<PauliTerm> terms) {
    check_k_local_args(n_qubits, locality);

    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Matrix h = Matrix::Zero(dim, dim);
    for (const PauliTerm& term : terms) {
        if (term.string.n_qubits() != n_qubits)
            throw InputError("assemble_hamiltonian: term qubit count mismatch");
        if (term.string.weight() != locality)
            throw InputError("assemble_hamiltonian: term weight differs from the stated locality");
        h += term.coupling * term.string.to_matrix();
    }

    if (hermiticity_defect(h) > tol::hermiticity)
        throw ContractError("assemble_hamiltonian: matrix is not Hermitian");

    KLocalHamiltonian result;
    result.n_qubits = n_qubits;
    result.locality = locality;
    result.terms = std::move(terms);
    result.matrix = std::move(h);
    return result;
}

Matrix time_evolution(const KLocalHamiltonian& h, double t) {
    const HermitianEig eig = eig_hermitian(h.matrix);
    Vector phases(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases[i] = std::exp(Complex(0.0, -eig.eigenvalues[i] * t));
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

} // namespace qta
