#include "qta/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qta {

FixedSpaceProjector fixed_space_projector(const Matrix& u, double tol) {
    if (tol <= 0.0) throw InputError("fixed_space_projector: tolerance must be positive");
    const UnitaryEig eig = eig_unitary(u); // rejects non-unitary input

    std::vector<Eigen::Index> fixed;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        if (std::abs(eig.eigenvalues[i] - Complex(1.0, 0.0)) < tol) fixed.push_back(i);

    FixedSpaceProjector result;
    result.tol = tol;
    result.rank = static_cast<int>(fixed.size());
    if (fixed.empty()) {
        result.projector = Matrix::Zero(u.rows(), u.cols());
        return result;
    }

    Matrix v(u.rows(), static_cast<Eigen::Index>(fixed.size()));
    for (std::size_t k = 0; k < fixed.size(); ++k)
        v.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors.col(fixed[k]);

    // Numerical eigenvectors of a degenerate unit eigenvalue need not come
    // out orthogonal; re-orthonormalize before forming P.
    Eigen::HouseholderQR<Matrix> qr(v);
    const Matrix q = qr.householderQ() * Matrix::Identity(v.rows(), v.cols());
    result.projector = q * q.adjoint();
    return result;
}

Vector cesaro_average(const Matrix& u, const Vector& x, long n_terms) {
    if (u.rows() != u.cols()) throw InputError("cesaro_average: operator not square");
    if (u.cols() != x.size()) throw InputError("cesaro_average: dimension mismatch");
    if (n_terms < 1) throw InputError("cesaro_average: averaging length must be >= 1");

    Vector acc = x;
    Vector current = x;
    for (long n = 1; n < n_terms; ++n) {
        current = u * current;
        acc += current;
    }
    return acc / static_cast<double>(n_terms);
}

ErgodicConvergence ergodic_convergence_check(const Matrix& u, const Vector& x, long n_max) {
    if (n_max < 2) throw InputError("ergodic_convergence_check: n_max must be >= 2");
    if (u.rows() != u.cols() || u.cols() != x.size())
        throw InputError("ergodic_convergence_check: dimension mismatch");

    const UnitaryEig eig = eig_unitary(u);
    const double cluster_tol = tol::eig_residual;

    // Fixed-space projection of x and the spectral gap restricted to the
    // eigenvectors that actually contribute to x.
    const Vector components = eig.eigenvectors.adjoint() * x;
    Vector px = Vector::Zero(x.size());
    double gap = std::numeric_limits<double>::infinity();
    const double component_floor = 1e-12 * x.norm();
    for (Eigen::Index i = 0; i < components.size(); ++i) {
        const double distance_to_one = std::abs(eig.eigenvalues[i] - Complex(1.0, 0.0));
        if (distance_to_one < cluster_tol) {
            px += components[i] * eig.eigenvectors.col(i);
        } else if (std::abs(components[i]) > component_floor) {
            gap = std::min(gap, distance_to_one);
        }
    }

    ErgodicConvergence result;
    if (std::isinf(gap)) {
        result.gap = 0.0;
        result.bound_constant = 0.0;
    } else {
        result.gap = gap;
        result.bound_constant = 2.0 * x.norm() / gap;
    }

    result.errors.resize(static_cast<std::size_t>(n_max));
    Vector acc = Vector::Zero(x.size());
    Vector current = x;
    for (long n = 1; n <= n_max; ++n) {
        if (n > 1) current = u * current;
        acc += current;
        result.errors[static_cast<std::size_t>(n - 1)] =
            (acc / static_cast<double>(n) - px).norm();
    }
    return result;
}

namespace {

constexpr double kPhaseZero = 1e-12;

// Whether ratio (in (0,1)) lies within tol of a rational p/q with q <= q_max.
// Any rational that close to ratio is a continued-fraction convergent, so
// scanning convergents suffices.
bool near_rational(double ratio, int q_max, double tol) {
    double remainder = ratio;
    long p_prev = 1, q_prev = 0;
    long p_curr = 0, q_curr = 1; // starts from a0 = floor(ratio) = 0
    for (int iterations = 0; iterations < 64; ++iterations) {
        if (std::abs(ratio - static_cast<double>(p_curr) / static_cast<double>(q_curr)) < tol)
            return true;
        if (remainder <= 0.0) break;
        remainder = 1.0 / remainder;
        const double integral = std::floor(remainder);
        if (integral > 1e18) break;
        const long a = static_cast<long>(integral);
        const long p_next = a * p_curr + p_prev;
        const long q_next = a * q_curr + q_prev;
        if (q_next > q_max) break;
        p_prev = p_curr;
        q_prev = q_curr;
        p_curr = p_next;
        q_curr = q_next;
        remainder -= integral;
    }
    return false;
}

} // namespace

int EigenphaseReport::rational_pair_count() const {
    int count = 0;
    for (std::size_t i = 0; i < rational_flags.size(); ++i)
        for (std::size_t j = i + 1; j < rational_flags[i].size(); ++j)
            if (rational_flags[i][j]) ++count;
    return count;
}

EigenphaseReport eigenphase_report(const Matrix& u, int q_max, double tol) {
    if (q_max < 1) throw InputError("eigenphase_report: q_max must be >= 1");
    if (tol <= 0.0) throw InputError("eigenphase_report: tolerance must be positive");

    const UnitaryEig eig = eig_unitary(u);

    EigenphaseReport report;
    report.phases.reserve(static_cast<std::size_t>(eig.eigenvalues.size()));
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double phase = std::arg(eig.eigenvalues[i]);
        if (phase < 0.0) phase += 2.0 * M_PI;
        if (phase >= 2.0 * M_PI - kPhaseZero) phase = 0.0; // fold 2*pi-eps noise onto 0
        report.phases.push_back(phase);
    }
    std::sort(report.phases.begin(), report.phases.end());

    const std::size_t count = report.phases.size();
    report.rational_flags.assign(count, std::vector<bool>(count, false));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            const double lo = report.phases[i];
            const double hi = report.phases[j];
            bool flagged;
            if (hi - lo <= kPhaseZero) {
                flagged = false; // only distinct phases are tested
            } else if (lo <= kPhaseZero) {
                flagged = true; // zero phase: ratio 0
            } else {
                flagged = near_rational(lo / hi, q_max, tol);
            }
            report.rational_flags[i][j] = flagged;
            report.rational_flags[j][i] = flagged;
        }
    }
    return report;
}

} // namespace qta
