#include <doctest.h>

#include <cmath>

#include "qta/complexity.hpp"

using namespace qta;

namespace {

// Independent oracle: eigendecompose R and sum squared moduli.
double eigenvalue_square_sum(const Matrix& r) {
    const HermitianEig eig = eig_hermitian(r);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        sum += eig.eigenvalues[i] * eig.eigenvalues[i];
    return sum;
}

} // namespace

TEST_CASE("reversal_operator: identical states collapse to the rank-1 projector") {
    const StateVector psi = random_state(3, {40, 0});
    const ReversalOperator r = reversal_operator(psi, psi);
    CHECK(r.overlap == doctest::Approx(1.0));
    CHECK(max_abs(r.matrix - psi.amplitudes() * psi.amplitudes().adjoint()) < 1e-12);
    CHECK((r.matrix * psi.amplitudes() - psi.amplitudes()).norm() < 1e-12);
}

TEST_CASE("reversal_operator: orthogonal states give the swap structure") {
    const StateVector psi0 = StateVector::basis_state(2, 0);
    const StateVector psi_t = StateVector::basis_state(2, 3);
    const ReversalOperator r = reversal_operator(psi0, psi_t);
    CHECK(r.overlap == doctest::Approx(0.0));
    const Matrix expected = psi0.amplitudes() * psi_t.amplitudes().adjoint() +
                            psi_t.amplitudes() * psi0.amplitudes().adjoint();
    CHECK(max_abs(r.matrix - expected) < 1e-14);

    // eigenvalues are +-1 on the 2-dim subspace
    const HermitianEig eig = eig_hermitian(r.matrix);
    CHECK(eig.eigenvalues.minCoeff() == doctest::Approx(-1.0));
    CHECK(eig.eigenvalues.maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("reversal_operator: s = 0.6 reproduces the frozen 2x2 subspace matrix") {
    // x = e0, b = 0.6 e0 + 0.8 e1 (real overlap, so no phase is applied)
    Vector b(4);
    b << 0.6, 0.8, 0.0, 0.0;
    const StateVector psi0(2, b);
    const StateVector psi_t = StateVector::basis_state(2, 0);
    const ReversalOperator r = reversal_operator(psi0, psi_t);

    CHECK(r.overlap == doctest::Approx(0.6));
    CHECK(r.phase == doctest::Approx(0.0));
    CHECK(r.matrix(0, 0).real() == doctest::Approx(0.6));
    CHECK(r.matrix(0, 1).real() == doctest::Approx(0.8));
    CHECK(r.matrix(1, 0).real() == doctest::Approx(0.8));
    CHECK(std::abs(r.matrix(1, 1)) == doctest::Approx(0.0));
}

TEST_CASE("reversal_operator: Hermitian and maps psi_t to e^{i phi} psi_0 on random pairs") {
    for (std::uint64_t task = 0; task < 40; ++task) {
        const int n = 2 + static_cast<int>(task % 3);
        const StateVector psi0 = random_state(n, {41, 2 * task});
        const StateVector psi_t = random_state(n, {41, 2 * task + 1});
        const ReversalOperator r = reversal_operator(psi0, psi_t);

        CHECK(hermiticity_defect(r.matrix) < 1e-10);
        const Vector mapped = r.matrix * psi_t.amplitudes();
        const Vector target = std::exp(Complex(0, r.phase)) * psi0.amplitudes();
        CHECK((mapped - target).norm() < 1e-8);
    }
}

TEST_CASE("coarse_complexity: closed form, eigenvalue oracle, frozen cases") {
    const StateVector psi = random_state(2, {42, 0});
    CHECK(coarse_complexity(reversal_operator(psi, psi)).value == doctest::Approx(1.0));

    const ReversalOperator orth =
        reversal_operator(StateVector::basis_state(2, 0), StateVector::basis_state(2, 3));
    CHECK(coarse_complexity(orth).value == doctest::Approx(2.0));

    Vector b(4);
    b << 0.6, 0.8, 0.0, 0.0;
    const ReversalOperator mid = reversal_operator(StateVector(2, b), StateVector::basis_state(2, 0));
    CHECK(coarse_complexity(mid).value == doctest::Approx(1.64).epsilon(1e-9));

    for (std::uint64_t task = 0; task < 50; ++task) {
        const int n = 2 + static_cast<int>(task % 3);
        const StateVector psi0 = random_state(n, {43, 2 * task});
        const StateVector psi_t = random_state(n, {43, 2 * task + 1});
        const ReversalOperator r = reversal_operator(psi0, psi_t);
        const double value = coarse_complexity(r).value;
        CHECK(std::abs(value - eigenvalue_square_sum(r.matrix)) < 1e-8);
        CHECK(std::abs(value - (2.0 - r.overlap * r.overlap)) < 1e-8);
        CHECK(value >= 1.0 - 1e-12);
        CHECK(value <= 2.0 + 1e-12);
    }
}

TEST_CASE("complexity_of_evolution: identity, CNOT oracle, phase invariance") {
    const GlobalOperator cnot3 = build_global_operator(LocalRule::cnot(), 3);
    CHECK(complexity_of_evolution(StateVector::basis_state(3, 4), cnot3, 0).value ==
          doctest::Approx(1.0));

    const GlobalOperator id3 = build_global_operator(LocalRule::identity(), 3);
    CHECK(complexity_of_evolution(random_state(3, {44, 0}), id3, 7).value ==
          doctest::Approx(1.0));

    // overlap <100|(2|100> + |110>)/sqrt(5)> = 2/sqrt(5), so 2 - 4/5 = 1.2
    CHECK(complexity_of_evolution(StateVector::basis_state(3, 4), cnot3, 1).value ==
          doctest::Approx(1.2).epsilon(1e-9));

    const GlobalOperator g = build_global_operator(LocalRule::haar({45, 0}), 3);
    const StateVector psi = random_state(3, {46, 0});
    const StateVector rotated(3, std::exp(Complex(0, 1.2)) * psi.amplitudes());
    CHECK(complexity_of_evolution(psi, g, 3).value ==
          doctest::Approx(complexity_of_evolution(rotated, g, 3).value).epsilon(1e-10));
}

TEST_CASE("PauliString: weights and letter validation") {
    CHECK(PauliString(3, "III").weight() == 0);
    CHECK(PauliString(3, "XIZ").weight() == 2);
    CHECK(PauliString(3, "YYY").weight() == 3);
    CHECK(pauli_weight(PauliString(2, "XY")) == 2);
    CHECK_THROWS_AS(PauliString(3, "XQZ"), InputError);
    CHECK_THROWS_AS(PauliString(3, "XX"), InputError);
}

TEST_CASE("PauliString: matrices match Kronecker assembly") {
    CHECK(max_abs(PauliString(1, "Z").to_matrix() - gates::pauli_z()) == 0.0);
    const Matrix expected = kron(gates::pauli_x(), kron(gates::identity(2), gates::pauli_y()));
    CHECK(max_abs(PauliString(3, "XIY").to_matrix() - expected) == 0.0);
}

TEST_CASE("build_k_local: term counts, Hermiticity, determinism") {
    CHECK(k_local_term_count(3, 2) == 27);
    for (int K = 1; K <= 5; ++K)
        for (int k = 1; k <= K; ++k) {
            const KLocalHamiltonian h = build_k_local(K, k, {47, static_cast<std::uint64_t>(K * 8 + k)});
            CHECK(h.terms.size() == k_local_term_count(K, k));
            CHECK(hermiticity_defect(h.matrix) < 1e-10);
            for (const PauliTerm& term : h.terms) CHECK(term.string.weight() == k);
        }

    const KLocalHamiltonian a = build_k_local(3, 2, {48, 0});
    const KLocalHamiltonian b = build_k_local(3, 2, {48, 0});
    CHECK(max_abs(a.matrix - b.matrix) == 0.0);

    CHECK_THROWS_AS(build_k_local(2, 3, {0, 0}), InputError);
}

TEST_CASE("build_k_local: explicit couplings, single-term assembly") {
    // K = 1, k = 1, couplings (0, 0, 1) on letters (X, Y, Z) -> sigma_z
    const double couplings[3] = {0.0, 0.0, 1.0};
    const KLocalHamiltonian h = build_k_local(1, 1, std::span<const double>(couplings, 3));
    CHECK(max_abs(h.matrix - gates::pauli_z()) == 0.0);

    CHECK_THROWS_AS(build_k_local(1, 1, std::span<const double>(couplings, 2)), InputError);
}

TEST_CASE("time_evolution: identity at t = 0, analytic sigma_z, group property") {
    const double couplings[3] = {0.0, 0.0, 1.0};
    const KLocalHamiltonian h = build_k_local(1, 1, std::span<const double>(couplings, 3));

    CHECK(max_abs(time_evolution(h, 0.0) - gates::identity(2)) < 1e-12);
    CHECK(max_abs(time_evolution(h, M_PI) + gates::identity(2)) < 1e-12); // diag(e^{-i pi}, e^{i pi})

    const KLocalHamiltonian generic = build_k_local(3, 2, {49, 0});
    const Matrix u1 = time_evolution(generic, 0.4);
    const Matrix u2 = time_evolution(generic, 0.9);
    const Matrix u12 = time_evolution(generic, 1.3);
    CHECK(unitarity_defect(u1) < 1e-8);
    CHECK(max_abs(u1 * u2 - u12) < 1e-8);
}

TEST_CASE("time_evolution: eigenphases match -E_n t modulo 2 pi") {
    const struct { int K, k; } cases[] = {{1, 1}, {2, 2}, {3, 2}};
    for (const auto [K, k] : cases) {
    const KLocalHamiltonian h = build_k_local(K, k, {50, static_cast<std::uint64_t>(K)});
    const double t = 0.37;
    const Matrix u = time_evolution(h, t);

    const HermitianEig he = eig_hermitian(h.matrix);
    const UnitaryEig ue = eig_unitary(u);

    auto wrap = [](double phase) {
        phase = std::fmod(phase, 2.0 * M_PI);
        if (phase < 0.0) phase += 2.0 * M_PI;
        return phase;
    };
    std::vector<double> expected, actual;
    for (Eigen::Index i = 0; i < he.eigenvalues.size(); ++i)
        expected.push_back(wrap(-he.eigenvalues[i] * t));
    for (Eigen::Index i = 0; i < ue.eigenvalues.size(); ++i)
        actual.push_back(wrap(std::arg(ue.eigenvalues[i])));
    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(actual[i] == doctest::Approx(expected[i]).epsilon(1e-6));
    }
}
