#include "qta/qlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace qta {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

double hermiticity_defect(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(m - m.adjoint());
}

bool is_unitary(const Matrix& m, double tolerance) {
    return unitarity_defect(m) < tolerance;
}

bool is_hermitian(const Matrix& m, double tolerance) {
    return hermiticity_defect(m) < tolerance;
}

namespace {

int qubit_count_for_dim(std::size_t dim, const char* what) {
    int n = 0;
    std::size_t d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw InputError(std::string(what) + ": dimension is not a power of two");
        d /= 2;
        ++n;
    }
    if (n < 1 || n > max_qubits)
        throw InputError(std::string(what) + ": qubit count out of range [1, 12]");
    return n;
}

} // namespace

StateVector::StateVector(int n_qubits, Vector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > max_qubits)
        throw InputError("StateVector: qubit count out of range [1, 12]");
    if (amplitudes_.size() != Eigen::Index(1) << n_qubits_)
        throw InputError("StateVector: amplitude length is not 2^n");
    if (!amplitudes_.allFinite())
        throw ContractError("StateVector: non-finite amplitude");
    if (std::abs(amplitudes_.norm() - 1.0) > tol::state_norm)
        throw ContractError("StateVector: not normalized");
}

StateVector StateVector::normalized(int n_qubits, Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm <= tol::annihilation)
        throw ContractError("StateVector: cannot normalize a numerically zero vector");
    return StateVector(n_qubits, amplitudes / norm);
}

StateVector StateVector::basis_state(int n_qubits, std::size_t index) {
    if (n_qubits < 1 || n_qubits > max_qubits)
        throw InputError("basis_state: qubit count out of range [1, 12]");
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) throw InputError("basis_state: index out of range");
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(dim));
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

RealVector StateVector::probabilities() const {
    return amplitudes_.cwiseAbs2();
}

Complex StateVector::inner(const StateVector& other) const {
    if (other.dim() != dim()) throw InputError("inner: dimension mismatch");
    return amplitudes_.dot(other.amplitudes_); // Eigen's dot conjugates the left factor
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
        throw InputError("DensityMatrix: not square");
    n_qubits_ = qubit_count_for_dim(static_cast<std::size_t>(entries_.rows()), "DensityMatrix");
    if (hermiticity_defect(entries_) > tol::hermiticity)
        throw ContractError("DensityMatrix: not Hermitian");
    if (std::abs(entries_.trace().real() - 1.0) > 1e-10 || std::abs(entries_.trace().imag()) > 1e-10)
        throw ContractError("DensityMatrix: trace is not 1");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace gates {

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

} // namespace gates

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix embed_two_qubit(const Matrix& u, int site, int n_qubits) {
    if (u.rows() != 4 || u.cols() != 4)
        throw InputError("embed_two_qubit: gate must be 4x4");
    if (n_qubits < 2 || n_qubits > max_qubits)
        throw InputError("embed_two_qubit: qubit count out of range [2, 12]");
    if (site < 0 || site >= n_qubits)
        throw InputError("embed_two_qubit: site out of range");

    const int partner = (site + 1) % n_qubits;
    const int shift_a = qubit_bit_shift(n_qubits, site);
    const int shift_b = qubit_bit_shift(n_qubits, partner);
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t mask_a = std::size_t{1} << shift_a;
    const std::size_t mask_b = std::size_t{1} << shift_b;

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        const int in_sub = static_cast<int>(((col >> shift_a) & 1) << 1 | ((col >> shift_b) & 1));
        const std::size_t rest = col & ~(mask_a | mask_b);
        for (int out_sub = 0; out_sub < 4; ++out_sub) {
            const std::size_t row = rest |
                                    (static_cast<std::size_t>((out_sub >> 1) & 1) << shift_a) |
                                    (static_cast<std::size_t>(out_sub & 1) << shift_b);
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = u(out_sub, in_sub);
        }
    }
    return out;
}

Matrix embed_one_qubit(const Matrix& u, int qubit, int n_qubits) {
    if (u.rows() != 2 || u.cols() != 2)
        throw InputError("embed_one_qubit: gate must be 2x2");
    if (n_qubits < 1 || n_qubits > max_qubits)
        throw InputError("embed_one_qubit: qubit count out of range [1, 12]");
    if (qubit < 0 || qubit >= n_qubits)
        throw InputError("embed_one_qubit: qubit out of range");

    const int shift = qubit_bit_shift(n_qubits, qubit);
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t mask = std::size_t{1} << shift;

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        const int in_sub = static_cast<int>((col >> shift) & 1);
        const std::size_t rest = col & ~mask;
        for (int out_sub = 0; out_sub < 2; ++out_sub) {
            const std::size_t row = rest | (std::size_t(out_sub) << shift);
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = u(out_sub, in_sub);
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    if (keep.empty()) throw InputError("partial_trace: keep set is empty");
    const int n = rho.n_qubits();

    std::set<int> kept(keep.begin(), keep.end());
    for (int q : kept)
        if (q < 0 || q >= n) throw InputError("partial_trace: qubit index out of range");

    std::vector<int> kept_sorted(kept.begin(), kept.end());
    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
        if (!kept.count(q)) traced.push_back(q);

    const int n_keep = static_cast<int>(kept_sorted.size());
    const int n_trace = static_cast<int>(traced.size());
    const std::size_t dim_keep = std::size_t{1} << n_keep;
    const std::size_t dim_trace = std::size_t{1} << n_trace;

    // Scatter a reduced-register index into the full-register bit positions.
    auto scatter = [&](std::size_t sub, const std::vector<int>& qubits, int n_sub) {
        std::size_t full = 0;
        for (int p = 0; p < n_sub; ++p) {
            const std::size_t bit = (sub >> (n_sub - 1 - p)) & 1;
            full |= bit << qubit_bit_shift(n, qubits[static_cast<std::size_t>(p)]);
        }
        return full;
    };

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim_keep), static_cast<Eigen::Index>(dim_keep));
    for (std::size_t r = 0; r < dim_keep; ++r) {
        const std::size_t r_base = scatter(r, kept_sorted, n_keep);
        for (std::size_t c = 0; c < dim_keep; ++c) {
            const std::size_t c_base = scatter(c, kept_sorted, n_keep);
            Complex acc = 0;
            for (std::size_t e = 0; e < dim_trace; ++e) {
                const std::size_t env = scatter(e, traced, n_trace);
                acc += rho.entries()(static_cast<Eigen::Index>(r_base | env),
                                     static_cast<Eigen::Index>(c_base | env));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

Matrix haar_unitary(int dim, RngSeed seed) {
    if (dim < 2) throw InputError("haar_unitary: dimension must be >= 2");

    Xoshiro256ss rng(seed);
    Matrix ginibre(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            ginibre(i, j) = rng.complex_normal();

    Eigen::HouseholderQR<Matrix> qr(ginibre);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();

    // Phase correction: without it the QR factorization is not Haar.
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex rii = r(i, i);
        const double mag = std::abs(rii);
        q.col(i) *= (mag > 0.0) ? rii / mag : Complex(1.0, 0.0);
    }
    return q;
}

StateVector random_state(int n_qubits, RngSeed seed) {
    if (n_qubits < 1 || n_qubits > max_qubits)
        throw InputError("random_state: qubit count out of range [1, 12]");
    Xoshiro256ss rng(seed);
    Vector amps(Eigen::Index(1) << n_qubits);
    for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = rng.complex_normal();
    return StateVector::normalized(n_qubits, std::move(amps));
}

HermitianEig eig_hermitian(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("eig_hermitian: not square");
    if (hermiticity_defect(m) > tol::eig_precondition)
        throw ContractError("eig_hermitian: input is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw ContractError("eig_hermitian: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

UnitaryEig eig_unitary(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("eig_unitary: not square");
    if (unitarity_defect(m) > tol::eig_precondition)
        throw ContractError("eig_unitary: input is not unitary");

    Eigen::ComplexSchur<Matrix> schur(m);
    if (schur.info() != Eigen::Success)
        throw ContractError("eig_unitary: Schur decomposition failed to converge");
    return {schur.matrixT().diagonal(), schur.matrixU()};
}

} // namespace qta
