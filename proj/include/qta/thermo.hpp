#pragma once

#include <optional>
#include <vector>

#include "qta/qca.hpp"
#include "qta/qlin.hpp"

namespace qta {

struct AnalysisConfig {
    double epsilon = 1e-3; // absolute probability-change threshold
    int window = 5;        // consecutive quiet transitions required
    int horizon = 500;     // latest admissible equilibration step

    void validate() const;
};

struct EquilibrationReport {
    bool equilibrated = false;
    std::optional<int> t_eq;
    // Mean probability row over the detection window when equilibrated,
    // over the trajectory tail otherwise (used for entropy of censored runs).
    RealVector equilibrium_probabilities;
    double epsilon_used = 0.0;
    int window_used = 0;
};

// Smallest t whose next `window` transitions all change every basis-state
// probability by less than epsilon. Rows of `probabilities` are time steps.
EquilibrationReport equilibration_time(const Eigen::MatrixXd& probabilities,
                                       const AnalysisConfig& cfg);
EquilibrationReport equilibration_time(const Trajectory& traj, const AnalysisConfig& cfg);

// d(t) = || p(t) - p_bar ||_2 against the tail-window mean row (window
// matches the equilibration default).
std::vector<double> l2_convergence(const Eigen::MatrixXd& probabilities, int window = 5);
std::vector<double> l2_convergence(const Trajectory& traj, int window = 5);

struct SpectrumReport {
    std::vector<int> frequencies; // bin indices 0..floor(L/2)
    std::vector<double> power;    // per-bin, summed across basis states
    std::vector<int> dominant;    // DC excluded
};

// Mean-subtracted DFT of every basis-state probability series, squared
// moduli folded one-sided and summed across basis states. Normalized so
// that sum(power) equals the time-domain energy (Parseval). Dominant bins
// exceed `dominance` times the max non-DC power; trajectories with
// essentially no oscillation (total non-DC energy below 1e-15) report none.
SpectrumReport fourier_spectrum(const Eigen::MatrixXd& probabilities, double dominance = 0.1);
SpectrumReport fourier_spectrum(const Trajectory& traj, double dominance = 0.1);

// -sum p_i log2 p_i in bits; 0 log 0 = 0. Input is renormalized; entries
// below -1e-12 are an error.
double shannon_entropy(const RealVector& probabilities);

} // namespace qta
