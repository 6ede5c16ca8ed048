#include "qta/qca.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qta {

LocalRule::LocalRule(std::vector<Matrix> gates) : gates_(std::move(gates)) {
    if (gates_.empty()) throw InputError("LocalRule: needs at least one gate");
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const Matrix& g = gates_[k];
        if (g.rows() != 4 || g.cols() != 4)
            throw InputError("LocalRule: gate " + std::to_string(k + 1) + " is not 4x4");
        if (!is_unitary(g))
            throw ContractError("LocalRule: gate " + std::to_string(k + 1) + " is not unitary");
    }
}

LocalRule LocalRule::identity() { return LocalRule({gates::identity(4)}); }

LocalRule LocalRule::cnot() { return LocalRule({gates::cnot()}); }

LocalRule LocalRule::haar(RngSeed seed) { return LocalRule({haar_unitary(4, seed)}); }

Matrix LocalRule::composed() const {
    Matrix product = gates_.front();
    for (std::size_t k = 1; k < gates_.size(); ++k) product = gates_[k] * product;
    return product;
}

GlobalOperator build_global_operator(const LocalRule& rule, int n_qubits) {
    if (n_qubits < 2 || n_qubits > max_qubits)
        throw InputError("build_global_operator: qubit count out of range [2, 12]");

    const Matrix site_gate = rule.composed();
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Matrix sum = Matrix::Zero(dim, dim);
    for (int j = 0; j < n_qubits; ++j) sum += embed_two_qubit(site_gate, j, n_qubits);
    return GlobalOperator(n_qubits, std::move(sum), rule);
}

StateVector step(const StateVector& state, const GlobalOperator& g) {
    if (state.n_qubits() != g.n_qubits()) throw InputError("step: dimension mismatch");
    Vector next = g.matrix() * state.amplitudes();
    const double norm = next.norm();
    if (norm <= tol::annihilation) throw AnnihilatedState();
    return StateVector(state.n_qubits(), next / norm);
}

Trajectory evolve(const StateVector& initial, const GlobalOperator& g, int steps) {
    if (steps < 0) throw InputError("evolve: negative step count");

    Trajectory traj;
    traj.n_qubits = initial.n_qubits();
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.push_back(initial);
    traj.probabilities.resize(steps + 1, static_cast<Eigen::Index>(initial.dim()));
    traj.probabilities.row(0) = initial.probabilities();

    for (int t = 0; t < steps; ++t) {
        try {
            traj.states.push_back(step(traj.states.back(), g));
        } catch (const AnnihilatedState&) {
            throw AnnihilatedState(t);
        }
        traj.probabilities.row(t + 1) = traj.states.back().probabilities();
    }
    return traj;
}

namespace {

// Rotate an n-bit big-endian basis index left by one qubit.
std::size_t rotate_index_left(std::size_t index, int n_qubits) {
    const std::size_t mask = (std::size_t{1} << n_qubits) - 1;
    return ((index << 1) | (index >> (n_qubits - 1))) & mask;
}

} // namespace

StateVector translate(const StateVector& state) {
    const int n = state.n_qubits();
    Vector out(state.amplitudes().size());
    for (std::size_t b = 0; b < state.dim(); ++b)
        out[static_cast<Eigen::Index>(rotate_index_left(b, n))] =
            state.amplitudes()[static_cast<Eigen::Index>(b)];
    return StateVector(n, std::move(out));
}

Matrix translation_matrix(int n_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits)
        throw InputError("translation_matrix: qubit count out of range [1, 12]");
    const std::size_t dim = std::size_t{1} << n_qubits;
    Matrix t = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t b = 0; b < dim; ++b)
        t(static_cast<Eigen::Index>(rotate_index_left(b, n_qubits)), static_cast<Eigen::Index>(b)) = 1.0;
    return t;
}

double translation_invariance_defect(const Matrix& op, int n_qubits) {
    const Matrix t = translation_matrix(n_qubits);
    return max_abs(op * t - t * op);
}

double translation_invariance_defect(const GlobalOperator& g) {
    return translation_invariance_defect(g.matrix(), g.n_qubits());
}

// ---------------------------------------------------------------------------
// Teleportation variant
// ---------------------------------------------------------------------------

char teleport_gate_name(TeleportGate g) {
    switch (g) {
    case TeleportGate::H: return 'H';
    case TeleportGate::X: return 'X';
    case TeleportGate::Y: return 'Y';
    case TeleportGate::Z: return 'Z';
    }
    return '?';
}

std::vector<Vector> factor_product_state(const StateVector& state) {
    const int n = state.n_qubits();
    const DensityMatrix rho = DensityMatrix::pure(state);

    std::vector<Vector> cells;
    cells.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        const DensityMatrix marginal = partial_trace(rho, {q});
        const double purity = (marginal.entries() * marginal.entries()).trace().real();
        if (purity < 1.0 - 1e-9)
            throw ContractError("factor_product_state: initial state is not a product state");
        const HermitianEig eig = eig_hermitian(marginal.entries());
        cells.push_back(eig.eigenvectors.col(eig.eigenvectors.cols() - 1)); // eigenvalue ~1
    }
    return cells;
}

StateVector product_state(const std::vector<Vector>& cells) {
    if (cells.empty()) throw InputError("product_state: no cells");
    Vector acc = Vector::Ones(1);
    for (const Vector& cell : cells) {
        if (cell.size() != 2) throw InputError("product_state: cell is not a single qubit");
        Vector next(acc.size() * 2);
        for (Eigen::Index i = 0; i < acc.size(); ++i) {
            next[2 * i] = acc[i] * cell[0];
            next[2 * i + 1] = acc[i] * cell[1];
        }
        acc = std::move(next);
    }
    return StateVector::normalized(static_cast<int>(cells.size()), std::move(acc));
}

namespace {

// Born-rule measurement of one qubit of a small register; collapses and
// renormalizes the amplitudes in place.
int measure_qubit(Vector& amps, int n_qubits, int qubit, double draw) {
    const int shift = qubit_bit_shift(n_qubits, qubit);
    double p1 = 0.0;
    for (Eigen::Index b = 0; b < amps.size(); ++b)
        if ((static_cast<std::size_t>(b) >> shift) & 1) p1 += std::norm(amps[b]);

    const int outcome = draw < p1 ? 1 : 0;
    for (Eigen::Index b = 0; b < amps.size(); ++b)
        if (static_cast<int>((static_cast<std::size_t>(b) >> shift) & 1) != outcome) amps[b] = 0.0;
    amps /= amps.norm();
    return outcome;
}

// Standard teleportation of a single-qubit state through a fresh Bell pair.
// Returns the two measurement bits and the exactly reconstructed state.
struct TeleportOutcome {
    int bit0, bit1;
    Vector recovered;
};

TeleportOutcome teleport_once(const Vector& chi, Xoshiro256ss& rng) {
    // Register: qubit 0 = source, qubits 1,2 = Bell pair (|00> + |11>)/sqrt(2).
    Vector bell = Vector::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);

    Vector psi(8);
    for (int s = 0; s < 2; ++s)
        for (int p = 0; p < 4; ++p) psi[s * 4 + p] = chi[s] * bell[p];

    psi = embed_two_qubit(gates::cnot(), 0, 3) * psi;
    psi = embed_one_qubit(gates::hadamard(), 0, 3) * psi;

    const int m0 = measure_qubit(psi, 3, 0, rng.uniform());
    const int m1 = measure_qubit(psi, 3, 1, rng.uniform());

    // Remaining qubit 2 amplitudes, then the X^m1 Z^m0 correction.
    const std::size_t base = (std::size_t(m0) << 2) | (std::size_t(m1) << 1);
    Vector out(2);
    out[0] = psi[static_cast<Eigen::Index>(base)];
    out[1] = psi[static_cast<Eigen::Index>(base | 1)];
    if (m1) out = gates::pauli_x() * out;
    if (m0) out = gates::pauli_z() * out;
    return {m0, m1, std::move(out)};
}

Matrix teleport_gate_matrix(TeleportGate g) {
    switch (g) {
    case TeleportGate::H: return gates::hadamard();
    case TeleportGate::X: return gates::pauli_x();
    case TeleportGate::Y: return gates::pauli_y();
    case TeleportGate::Z: return gates::pauli_z();
    }
    throw InputError("teleport_gate_matrix: bad gate");
}

} // namespace

TeleportationRun run_teleportation_qca(const StateVector& initial, int steps, RngSeed seed) {
    if (initial.n_qubits() < 2)
        throw InputError("run_teleportation_qca: needs at least 2 cells");
    if (steps < 1) throw InputError("run_teleportation_qca: needs at least 1 step");

    TeleportationRun run;
    run.n_qubits = initial.n_qubits();
    run.steps = steps;
    run.cell_states.push_back(factor_product_state(initial));

    Xoshiro256ss rng(seed);
    const int n = run.n_qubits;

    for (int t = 0; t < steps; ++t) {
        std::vector<Vector> cells = run.cell_states.back();
        std::vector<TeleportEvent> events;
        events.reserve(static_cast<std::size_t>(n));

        for (int j = 0; j < n; ++j) {
            const int neighbor = (j + 1) % n;
            TeleportOutcome outcome = teleport_once(cells[static_cast<std::size_t>(neighbor)], rng);

            // gate lookup on the measured pair: 00->H, 01->X, 10->Y, 11->Z
            const auto gate = static_cast<TeleportGate>(outcome.bit0 * 2 + outcome.bit1);
            Vector updated = teleport_gate_matrix(gate) * cells[static_cast<std::size_t>(j)];
            updated /= updated.norm();
            cells[static_cast<std::size_t>(j)] = std::move(updated);
            cells[static_cast<std::size_t>(neighbor)] = std::move(outcome.recovered);

            events.push_back({gate,
                              {static_cast<std::uint8_t>(outcome.bit0),
                               static_cast<std::uint8_t>(outcome.bit1)}});
        }
        run.gate_log.push_back(std::move(events));
        run.cell_states.push_back(std::move(cells));
    }
    return run;
}

} // namespace qta
