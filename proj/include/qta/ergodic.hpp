#pragma once

#include <vector>

#include "qta/qlin.hpp"

namespace qta {

struct FixedSpaceProjector {
    Matrix projector; // P = V V^dag over the eigenvalue-1 eigenvectors
    int rank = 0;     // 0 allowed (P = 0)
    double tol = 0.0; // eigenvalue-clustering tolerance used
};

// Orthogonal projection onto ker(I - U). Eigenvectors with |lambda - 1| <
// tol are collected and re-orthonormalized.
FixedSpaceProjector fixed_space_projector(const Matrix& u, double tol = tol::eig_residual);

// (1/N) sum_{n=0}^{N-1} U^n x via iterated matrix-vector products.
Vector cesaro_average(const Matrix& u, const Vector& x, long n_terms);

struct ErgodicConvergence {
    std::vector<double> errors; // e(N) for N = 1..Nmax
    double bound_constant = 0.0; // C with e(N) <= C/N pointwise
    double gap = 0.0;            // min |1 - lambda| over eigenvalues feeding x
};

// e(N) = ||A_N x - P x||_2 for N = 1..n_max, plus the geometric-sum bound
// C = 2 ||x|| / gap. gap is measured over non-unit eigenvalues whose
// eigenvector component of x is nonzero; when x lies in the fixed space the
// series is exactly zero and C = 0.
ErgodicConvergence ergodic_convergence_check(const Matrix& u, const Vector& x, long n_max);

struct EigenphaseReport {
    std::vector<double> phases; // sorted, in [0, 2*pi)
    // rational_flags[i][j]: the phase ratio min/max of pair (i, j) sits
    // within tol of some p/q with q <= q_max. Symmetric; diagonal false.
    std::vector<std::vector<bool>> rational_flags;

    int rational_pair_count() const;
};

// Eigenphase commensurability diagnostic. Only pairs with distinct phases
// are tested; a distinct pair whose smaller phase is numerically zero
// counts as rational (ratio 0). Rationality is tested via
// continued-fraction convergents with denominator at most q_max.
// Degenerate spectra (e.g. the Kramers doublets of an exactly-2-local
// Hamiltonian on an odd qubit count) therefore do not flag.
EigenphaseReport eigenphase_report(const Matrix& u, int q_max = 64, double tol = 1e-9);

} // namespace qta
