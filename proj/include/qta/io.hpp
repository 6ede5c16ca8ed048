#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qta/complexity.hpp"
#include "qta/ergodic.hpp"
#include "qta/lab.hpp"
#include "qta/qca.hpp"
#include "qta/thermo.hpp"

namespace qta::io {

using nlohmann::json;

// Shortest round-trip decimal form; identical bytes on every rerun.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Complex scalars are [re, im]; vectors are arrays of pairs; matrices are
// row-major nested arrays of pairs.
json complex_to_json(Complex z);
Complex complex_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// Rule files: JSON list of 4x4 matrices.
json rule_to_json(const LocalRule& rule);
LocalRule rule_from_json(const json& j);
LocalRule load_rule(const std::string& path);

json trajectory_to_json(const Trajectory& traj);
std::string trajectory_to_csv(const Trajectory& traj);

json equilibration_to_json(const EquilibrationReport& report);
json spectrum_to_json(const SpectrumReport& report);
std::string spectrum_to_csv(const SpectrumReport& report);

json reversal_to_json(const ReversalOperator& r, const ComplexityReport& c);

// Hamiltonian term lists: {"K": ..., "k": ..., "terms": [{"letters", "J"}]}.
json hamiltonian_to_json(const KLocalHamiltonian& h);
KLocalHamiltonian hamiltonian_from_json(const json& j);

json eigenphase_to_json(const EigenphaseReport& report);
std::string l2_series_to_csv(const std::vector<double>& distances);
std::string convergence_to_csv(const ErgodicConvergence& result);

json fit_to_json(const FitReport& fit);
json sweep_fits_to_json(const SweepFits& fits);

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);
std::string summaries_to_csv(const std::vector<GroupSummary>& summaries, GroupBy group_by);

json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const json& j);

// Parses with InputError on malformed content rather than nlohmann's own
// exception types.
json parse_json(const std::string& text, const std::string& what);

} // namespace qta::io
