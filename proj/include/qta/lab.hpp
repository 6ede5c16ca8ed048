#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qta/complexity.hpp"
#include "qta/qca.hpp"
#include "qta/thermo.hpp"

namespace qta {

// Full description of an ensemble run. Everything downstream (rows, CSVs,
// fits) is a pure function of this struct.
struct ExperimentConfig {
    int n_qubits = 3;
    int num_operators = 50;
    int num_initial_conditions = 100;
    std::uint64_t master_seed = 2019; // shipped canonical seed
    AnalysisConfig analysis;
    int horizon = 500; // evolution steps per cell
    // Tables the sweep command writes; subset of {rows, byOperator, byIc, fits}.
    std::vector<std::string> outputs = {"rows", "byOperator", "byIc", "fits"};

    void validate() const;
};

// Task-seed derivation: operator o draws from task o; initial condition i
// under operator o draws from task numOperators + o * numInitialConditions + i.
RngSeed operator_seed(const ExperimentConfig& cfg, int operator_index);
RngSeed initial_condition_seed(const ExperimentConfig& cfg, int operator_index, int ic_index);

struct SweepRow {
    int operator_index = 0;
    int ic_index = 0;
    bool annihilated = false;  // evolution hit a numerical zero
    bool equilibrated = false; // censored at the horizon when false
    int t_eq = -1;             // meaningful only when equilibrated
    double complexity = 0.0;   // at t_eq, or at the horizon when censored
    double entropy = 0.0;      // of the equilibrium (tail) distribution
};

// One sweep cell; exposed so tests can pin specific operators and states.
SweepRow sweep_cell(const GlobalOperator& g, const StateVector& initial,
                    const ExperimentConfig& cfg, int operator_index, int ic_index);

// Runs the full grid. Rows come back in canonical (operator, ic) order
// regardless of thread scheduling; parallelism is capped by the QTA_THREADS
// environment variable when set.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

enum class GroupBy { operator_index, initial_condition };

struct GroupSummary {
    int key = 0;
    int count = 0;      // equilibrated rows feeding the statistics
    int censored = 0;   // excluded rows, counted separately
    int annihilated = 0;
    double mean_t_eq = 0.0, std_t_eq = 0.0;
    double mean_complexity = 0.0, std_complexity = 0.0;
    double mean_entropy = 0.0, std_entropy = 0.0;
};

// Population mean/std per group key. Censored and annihilated rows are
// excluded from the statistics and only counted.
std::vector<GroupSummary> summarize(const std::vector<SweepRow>& rows, GroupBy group_by);

struct FitReport {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::string x_label, y_label;
    int point_count = 0;
};

// Ordinary least squares on (ln x, ln y). Degenerate variance on either
// axis is an error, never a fake perfect fit.
FitReport loglog_fit(std::span<const double> xs, std::span<const double> ys,
                     std::string x_label = "x", std::string y_label = "y");

struct SweepFits {
    FitReport t_eq_vs_complexity;
    FitReport t_eq_vs_entropy;
    int operators_used = 0;   // operators with at least one equilibrated row
    int zero_t_eq_shifted = 0; // rows with t_eq = 0 shifted to 1 before logs
};

// Per-operator means of the equilibrated rows, log-log fitted. Zero
// equilibration times are shifted to one step so the log is defined.
SweepFits fit_sweep(const std::vector<SweepRow>& rows);

} // namespace qta
