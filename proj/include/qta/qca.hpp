#pragma once

#include <cstdint>
#include <vector>

#include "qta/qlin.hpp"

namespace qta {

// Ordered sequence of 4x4 unitaries u^1..u^m applied to every
// (site, right-neighbor) pair.
class LocalRule {
public:
    explicit LocalRule(std::vector<Matrix> gates);

    static LocalRule identity();
    static LocalRule cnot();
    static LocalRule haar(RngSeed seed); // single Haar-random gate

    const std::vector<Matrix>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    // u^m * ... * u^1 as one 4x4. Embedding is a homomorphism on a fixed
    // qubit pair, so the per-site product collapses to a single gate.
    Matrix composed() const;

private:
    std::vector<Matrix> gates_;
};

// The assembled evolution operator U = sum_j prod_k u^k at site j, with
// periodic boundary. U commutes with the cyclic translation but is
// generally NOT unitary (it is a sum of unitaries); a step therefore
// renormalizes, see step().
class GlobalOperator {
public:
    GlobalOperator(int n_qubits, Matrix matrix, LocalRule rule)
        : n_qubits_(n_qubits), matrix_(std::move(matrix)), rule_(std::move(rule)) {}

    int n_qubits() const { return n_qubits_; }
    const Matrix& matrix() const { return matrix_; }
    const LocalRule& rule() const { return rule_; }

private:
    int n_qubits_;
    Matrix matrix_;
    LocalRule rule_;
};

GlobalOperator build_global_operator(const LocalRule& rule, int n_qubits);

// States for t = 0..T plus the per-step probability rows |amplitude|^2.
struct Trajectory {
    int n_qubits = 0;
    std::vector<StateVector> states;
    Eigen::MatrixXd probabilities; // (T+1) x 2^n, rows sum to 1

    std::size_t step_count() const { return states.empty() ? 0 : states.size() - 1; }
};

// One evolution step: apply U, renormalize. Throws AnnihilatedState when
// ||U psi|| <= 1e-12.
StateVector step(const StateVector& state, const GlobalOperator& g);

// T steps of the renormalized evolution; states[0] is the initial state.
// AnnihilatedState is rethrown with the failing step index.
Trajectory evolve(const StateVector& initial, const GlobalOperator& g, int steps);

// Cyclic shift |q0 q1 ... q_{n-1}> -> |q1 ... q_{n-1} q0>, linear extension.
StateVector translate(const StateVector& state);
Matrix translation_matrix(int n_qubits);

// ||U T - T U||_max; < 1e-9 for anything build_global_operator produces.
double translation_invariance_defect(const Matrix& op, int n_qubits);
double translation_invariance_defect(const GlobalOperator& g);

// ---------------------------------------------------------------------------
// Teleportation-based automaton variant
// ---------------------------------------------------------------------------

enum class TeleportGate : std::uint8_t { H, X, Y, Z };

char teleport_gate_name(TeleportGate g);

struct TeleportEvent {
    TeleportGate gate;
    std::uint8_t bits[2]; // the two Bell-measurement outcomes, in draw order
};

struct TeleportationRun {
    int n_qubits = 0;
    int steps = 0;
    // gate_log[t][j]: the update applied to cell j during step t.
    std::vector<std::vector<TeleportEvent>> gate_log;
    // cell_states[t][j]: cell j's single-qubit state after t steps (t = 0..T).
    std::vector<std::vector<Vector>> cell_states;
};

// Splits a product state into per-cell single-qubit states. Throws
// ContractError when a single-qubit marginal is mixed (entangled input).
std::vector<Vector> factor_product_state(const StateVector& state);

// Tensor product of single-qubit states; inverse of factor_product_state
// up to a global phase.
StateVector product_state(const std::vector<Vector>& cells);

// Per step and cell j: teleport the (j+1 mod n) neighbor through a fresh
// Bell pair, Born-sample the two measurement bits, and apply H/X/Y/Z to
// cell j for outcomes 00/01/10/11. Cell states are restored after each
// update (teleportation reconstructs the neighbor exactly).
TeleportationRun run_teleportation_qca(const StateVector& initial, int steps, RngSeed seed);

} // namespace qta
