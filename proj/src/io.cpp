#include "qta/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qta::io {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    if (!out) throw InputError("write to '" + path + "' failed");
}

json parse_json(const std::string& text, const std::string& what) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) throw InputError(what + ": malformed JSON");
    return parsed;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty JSON array vector");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return v;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty JSON array matrix");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw InputError("expected nested arrays for matrix rows");
    const std::size_t cols = j[0].size();

    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw InputError("ragged matrix rows in JSON");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c]);
    }
    return m;
}

json rule_to_json(const LocalRule& rule) {
    json out = json::array();
    for (const Matrix& gate : rule.gates()) out.push_back(matrix_to_json(gate));
    return out;
}

LocalRule rule_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("rule file: expected a list of matrices");
    std::vector<Matrix> gates;
    gates.reserve(j.size());
    for (const json& gate : j) gates.push_back(matrix_from_json(gate));
    return LocalRule(std::move(gates));
}

LocalRule load_rule(const std::string& path) {
    return rule_from_json(parse_json(read_text_file(path), "rule file '" + path + "'"));
}

namespace {

std::string basis_label(int n_qubits, std::size_t index) {
    std::string label(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if ((index >> qubit_bit_shift(n_qubits, q)) & 1) label[static_cast<std::size_t>(q)] = '1';
    return label;
}

} // namespace

json trajectory_to_json(const Trajectory& traj) {
    json states = json::array();
    for (const StateVector& s : traj.states) states.push_back(vector_to_json(s.amplitudes()));

    json probabilities = json::array();
    for (Eigen::Index t = 0; t < traj.probabilities.rows(); ++t) {
        json row = json::array();
        for (Eigen::Index i = 0; i < traj.probabilities.cols(); ++i)
            row.push_back(traj.probabilities(t, i));
        probabilities.push_back(std::move(row));
    }

    return json{{"nQubits", traj.n_qubits},
                {"states", std::move(states)},
                {"probabilities", std::move(probabilities)}};
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "step";
    const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().dim();
    for (std::size_t i = 0; i < dim; ++i) out += ",p" + basis_label(traj.n_qubits, i);
    out += "\n";

    for (Eigen::Index t = 0; t < traj.probabilities.rows(); ++t) {
        out += std::to_string(t);
        for (Eigen::Index i = 0; i < traj.probabilities.cols(); ++i)
            out += "," + format_double(traj.probabilities(t, i));
        out += "\n";
    }
    return out;
}

json equilibration_to_json(const EquilibrationReport& report) {
    json probabilities = json::array();
    for (Eigen::Index i = 0; i < report.equilibrium_probabilities.size(); ++i)
        probabilities.push_back(report.equilibrium_probabilities[i]);

    json out{{"equilibrated", report.equilibrated},
             {"equilibriumProbabilities", std::move(probabilities)},
             {"epsilonUsed", report.epsilon_used},
             {"windowUsed", report.window_used}};
    if (report.t_eq) out["tEq"] = *report.t_eq;
    return out;
}

json spectrum_to_json(const SpectrumReport& report) {
    return json{{"frequencies", report.frequencies},
                {"power", report.power},
                {"dominant", report.dominant}};
}

std::string spectrum_to_csv(const SpectrumReport& report) {
    std::string out = "bin,power\n";
    for (std::size_t f = 0; f < report.power.size(); ++f)
        out += std::to_string(report.frequencies[f]) + "," + format_double(report.power[f]) + "\n";
    return out;
}

json reversal_to_json(const ReversalOperator& r, const ComplexityReport& c) {
    return json{{"phase", r.phase},
                {"overlap", r.overlap},
                {"complexity", c.value},
                {"matrix", matrix_to_json(r.matrix)}};
}

json hamiltonian_to_json(const KLocalHamiltonian& h) {
    json terms = json::array();
    for (const PauliTerm& term : h.terms)
        terms.push_back(json{{"letters", term.string.letters()}, {"J", term.coupling}});
    return json{{"K", h.n_qubits}, {"k", h.locality}, {"terms", std::move(terms)}};
}

KLocalHamiltonian hamiltonian_from_json(const json& j) {
    if (!j.is_object() || !j.contains("K") || !j.contains("k") || !j.contains("terms"))
        throw InputError("hamiltonian: expected {K, k, terms}");
    const int n_qubits = j["K"].get<int>();
    const int locality = j["k"].get<int>();

    std::vector<PauliTerm> terms;
    for (const json& term : j["terms"]) {
        if (!term.contains("letters") || !term.contains("J"))
            throw InputError("hamiltonian term: expected {letters, J}");
        terms.push_back(
            {PauliString(n_qubits, term["letters"].get<std::string>()), term["J"].get<double>()});
    }
    return assemble_hamiltonian(n_qubits, locality, std::move(terms));
}

json eigenphase_to_json(const EigenphaseReport& report) {
    json flags = json::array();
    for (const auto& row : report.rational_flags) {
        json jrow = json::array();
        for (bool f : row) jrow.push_back(f);
        flags.push_back(std::move(jrow));
    }
    return json{{"phases", report.phases},
                {"rationalFlags", std::move(flags)},
                {"rationalPairCount", report.rational_pair_count()}};
}

std::string l2_series_to_csv(const std::vector<double>& distances) {
    std::string out = "step,distance\n";
    for (std::size_t t = 0; t < distances.size(); ++t)
        out += std::to_string(t) + "," + format_double(distances[t]) + "\n";
    return out;
}

std::string convergence_to_csv(const ErgodicConvergence& result) {
    std::string out = "N,error,bound\n";
    for (std::size_t i = 0; i < result.errors.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        out += std::to_string(i + 1) + "," + format_double(result.errors[i]) + "," +
               format_double(result.bound_constant / n) + "\n";
    }
    return out;
}

json fit_to_json(const FitReport& fit) {
    return json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"rSquared", fit.r_squared},
                {"xLabel", fit.x_label},
                {"yLabel", fit.y_label},
                {"pointCount", fit.point_count}};
}

json sweep_fits_to_json(const SweepFits& fits) {
    return json{{"tEqVsComplexity", fit_to_json(fits.t_eq_vs_complexity)},
                {"tEqVsEntropy", fit_to_json(fits.t_eq_vs_entropy)},
                {"operatorsUsed", fits.operators_used},
                {"zeroTEqShifted", fits.zero_t_eq_shifted}};
}

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "operator,ic,equilibrated,annihilated,tEq,complexity,entropy\n";
    for (const SweepRow& row : rows) {
        out += std::to_string(row.operator_index) + "," + std::to_string(row.ic_index) + "," +
               (row.equilibrated ? "1" : "0") + "," + (row.annihilated ? "1" : "0") + ",";
        out += row.equilibrated ? std::to_string(row.t_eq) : std::string("");
        if (row.annihilated)
            out += ",,";
        else
            out += "," + format_double(row.complexity) + "," + format_double(row.entropy);
        out += "\n";
    }
    return out;
}

std::string summaries_to_csv(const std::vector<GroupSummary>& summaries, GroupBy group_by) {
    std::string out = group_by == GroupBy::operator_index ? "operator" : "ic";
    out += ",count,censored,annihilated,meanTEq,stdTEq,meanComplexity,stdComplexity,"
           "meanEntropy,stdEntropy\n";
    for (const GroupSummary& s : summaries) {
        out += std::to_string(s.key) + "," + std::to_string(s.count) + "," +
               std::to_string(s.censored) + "," + std::to_string(s.annihilated);
        if (s.count == 0) {
            out += ",,,,,,\n"; // no equilibrated rows: statistics undefined
            continue;
        }
        out += "," + format_double(s.mean_t_eq) + "," + format_double(s.std_t_eq) + "," +
               format_double(s.mean_complexity) + "," + format_double(s.std_complexity) + "," +
               format_double(s.mean_entropy) + "," + format_double(s.std_entropy) + "\n";
    }
    return out;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    return json{{"nQubits", cfg.n_qubits},
                {"numOperators", cfg.num_operators},
                {"numInitialConditions", cfg.num_initial_conditions},
                {"masterSeed", cfg.master_seed},
                {"analysis", json{{"epsilon", cfg.analysis.epsilon},
                                  {"window", cfg.analysis.window},
                                  {"horizon", cfg.analysis.horizon}}},
                {"horizon", cfg.horizon},
                {"outputs", cfg.outputs}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
    if (!j.is_object()) throw InputError("experiment config: expected a JSON object");

    ExperimentConfig cfg;
    if (j.contains("nQubits")) cfg.n_qubits = j["nQubits"].get<int>();
    if (j.contains("numOperators")) cfg.num_operators = j["numOperators"].get<int>();
    if (j.contains("numInitialConditions"))
        cfg.num_initial_conditions = j["numInitialConditions"].get<int>();
    if (j.contains("masterSeed")) cfg.master_seed = j["masterSeed"].get<std::uint64_t>();
    if (j.contains("horizon")) cfg.horizon = j["horizon"].get<int>();
    if (j.contains("outputs")) cfg.outputs = j["outputs"].get<std::vector<std::string>>();
    cfg.analysis.horizon = cfg.horizon;
    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        if (a.contains("epsilon")) cfg.analysis.epsilon = a["epsilon"].get<double>();
        if (a.contains("window")) cfg.analysis.window = a["window"].get<int>();
        if (a.contains("horizon")) cfg.analysis.horizon = a["horizon"].get<int>();
    }
    cfg.validate();
    return cfg;
}

} // namespace qta::io
