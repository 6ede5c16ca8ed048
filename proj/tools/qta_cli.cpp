#include <algorithm>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qta/io.hpp"
#include "qta/render.hpp"

using namespace qta;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Shared evolution source: a rule (builtin or file), a register size, a seed,
// and an initial state. Seed tasks: 0 = haar builtin gate, 1 = random state.
// ---------------------------------------------------------------------------

struct EvolutionSource {
    std::string builtin;
    std::string rule_path;
    int n_qubits = 3;
    std::uint64_t seed = 0;
    std::string state = "zero"; // zero | random | basis index
};

void add_evolution_options(CLI::App* cmd, EvolutionSource& src) {
    cmd->add_option("--builtin", src.builtin, "Builtin rule: cnot, identity, haar")
        ->check(CLI::IsMember({"cnot", "identity", "haar"}));
    cmd->add_option("--rule", src.rule_path, "Rule file: JSON list of 4x4 matrices");
    cmd->add_option("--n", src.n_qubits, "Qubit count")->check(CLI::Range(2, 12));
    cmd->add_option("--seed", src.seed, "Master seed for haar rules and random states");
    cmd->add_option("--state", src.state, "Initial state: zero, random, or a basis index");
}

LocalRule make_rule(const EvolutionSource& src) {
    if (!src.rule_path.empty() && !src.builtin.empty())
        throw InputError("give either --rule or --builtin, not both");
    if (!src.rule_path.empty()) return io::load_rule(src.rule_path);
    if (src.builtin == "cnot") return LocalRule::cnot();
    if (src.builtin == "identity") return LocalRule::identity();
    if (src.builtin == "haar") return LocalRule::haar({src.seed, 0});
    throw InputError("no rule: pass --builtin {cnot, identity, haar} or --rule FILE");
}

StateVector make_initial(const EvolutionSource& src) {
    if (src.state == "zero") return StateVector::basis_state(src.n_qubits, 0);
    if (src.state == "random") return random_state(src.n_qubits, {src.seed, 1});
    std::size_t index = 0;
    try {
        index = std::stoull(src.state);
    } catch (const std::exception&) {
        throw InputError("--state must be zero, random, or a basis index");
    }
    return StateVector::basis_state(src.n_qubits, index);
}

Trajectory evolve_source(const EvolutionSource& src, int steps) {
    const GlobalOperator g = build_global_operator(make_rule(src), src.n_qubits);
    return evolve(make_initial(src), g, steps);
}

void emit(const json& data, const std::string& path) {
    if (path.empty())
        std::cout << data.dump(2) << "\n";
    else
        io::write_text_file(path, data.dump(2) + "\n");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void cmd_evolve(const EvolutionSource& src, int steps, const std::string& out,
                const std::string& render, const std::string& legend) {
    const Trajectory traj = evolve_source(src, steps);

    if (out.empty() && render.empty() && legend.empty()) {
        std::cout << io::trajectory_to_csv(traj);
        return;
    }
    if (!out.empty()) {
        if (ends_with(out, ".json"))
            io::write_text_file(out, io::trajectory_to_json(traj).dump(2) + "\n");
        else if (ends_with(out, ".csv"))
            io::write_text_file(out, io::trajectory_to_csv(traj));
        else
            throw InputError("--out must end in .csv or .json");
    }
    if (!render.empty()) render_amplitude_grid(traj, render);
    if (!legend.empty()) render_color_legend(legend);
}

void cmd_equilibrate(const EvolutionSource& src, const AnalysisConfig& cfg,
                     const std::string& out, const std::string& l2_out) {
    cfg.validate();
    const Trajectory traj = evolve_source(src, cfg.horizon);
    if (!l2_out.empty())
        io::write_text_file(l2_out, io::l2_series_to_csv(l2_convergence(traj, cfg.window)));
    emit(io::equilibration_to_json(equilibration_time(traj, cfg)), out);
}

void cmd_spectrum(const EvolutionSource& src, int steps, double threshold,
                  const std::string& out, const std::string& json_out) {
    const Trajectory traj = evolve_source(src, steps);
    const SpectrumReport report = fourier_spectrum(traj, threshold);
    if (!out.empty()) io::write_text_file(out, io::spectrum_to_csv(report));
    emit(io::spectrum_to_json(report), json_out);
}

void cmd_reverse(const EvolutionSource& src, int steps, const std::string& matrix_out,
                 const std::string& out) {
    const GlobalOperator g = build_global_operator(make_rule(src), src.n_qubits);
    const StateVector initial = make_initial(src);
    const Trajectory traj = evolve(initial, g, steps);
    const ReversalOperator r = reversal_operator(initial, traj.states.back());
    const ComplexityReport report = coarse_complexity(r);

    if (!matrix_out.empty())
        io::write_text_file(matrix_out, io::matrix_to_json(r.matrix).dump() + "\n");
    json summary = io::reversal_to_json(r, report);
    summary.erase("matrix"); // the full matrix goes to --out-matrix only
    summary["steps"] = steps;
    emit(summary, out);
}

void cmd_entropy(const EvolutionSource& src, const AnalysisConfig& cfg, const std::string& out) {
    cfg.validate();
    const Trajectory traj = evolve_source(src, cfg.horizon);
    const EquilibrationReport report = equilibration_time(traj, cfg);

    json summary{{"entropy", shannon_entropy(report.equilibrium_probabilities)},
                 {"equilibrated", report.equilibrated}};
    if (report.t_eq) summary["tEq"] = *report.t_eq;
    emit(summary, out);
}

struct ErgodicSource {
    int haar_dim = 0;
    std::string op_path;
    bool klocal = false;
    int K = 3, k = 2;
    double t = 1.0;
    std::uint64_t seed = 0;
};

Matrix make_unitary(const ErgodicSource& src) {
    const int given = (src.haar_dim > 0) + !src.op_path.empty() + src.klocal;
    if (given != 1) throw InputError("pass exactly one of --haar, --op, --klocal");
    if (src.haar_dim > 0) return haar_unitary(src.haar_dim, {src.seed, 0});
    if (!src.op_path.empty())
        return io::matrix_from_json(io::parse_json(io::read_text_file(src.op_path), "operator file"));
    return time_evolution(build_k_local(src.K, src.k, {src.seed, 0}), src.t);
}

void cmd_ergodic(const ErgodicSource& src, long cesaro_n, int q_max, double tol,
                 const std::string& out, const std::string& json_out) {
    const Matrix u = make_unitary(src);

    Xoshiro256ss rng(RngSeed{src.seed, 1});
    Vector x(u.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.complex_normal();
    x /= x.norm();

    const FixedSpaceProjector projector = fixed_space_projector(u);
    const ErgodicConvergence convergence = ergodic_convergence_check(u, x, cesaro_n);
    const EigenphaseReport phases = eigenphase_report(u, q_max, tol);

    if (!out.empty()) io::write_text_file(out, io::convergence_to_csv(convergence));
    emit(json{{"dim", u.rows()},
              {"projectorRank", projector.rank},
              {"gap", convergence.gap},
              {"boundConstant", convergence.bound_constant},
              {"finalError", convergence.errors.back()},
              {"cesaroN", cesaro_n},
              {"rationalPairCount", phases.rational_pair_count()},
              {"qMax", q_max}},
         json_out);
}

void cmd_klocal(int K, int k, double t, std::uint64_t seed, const std::string& couplings_path,
                const std::string& out, const std::string& evolution_out,
                const std::string& json_out) {
    KLocalHamiltonian h = [&] {
        if (couplings_path.empty()) return build_k_local(K, k, RngSeed{seed, 0});
        const json j = io::parse_json(io::read_text_file(couplings_path), "couplings file");
        if (!j.is_array()) throw InputError("couplings file: expected a JSON array of reals");
        const std::vector<double> couplings = j.get<std::vector<double>>();
        return build_k_local(K, k, std::span<const double>(couplings));
    }();

    if (!out.empty()) io::write_text_file(out, io::hamiltonian_to_json(h).dump(2) + "\n");

    const Matrix u = time_evolution(h, t);
    if (!evolution_out.empty())
        io::write_text_file(evolution_out, io::matrix_to_json(u).dump() + "\n");

    emit(json{{"K", K},
              {"k", k},
              {"t", t},
              {"termCount", h.terms.size()},
              {"hermiticityDefect", hermiticity_defect(h.matrix)},
              {"unitarityDefect", unitarity_defect(u)}},
         json_out);
}

void cmd_sweep(const std::string& config_path, std::optional<ExperimentConfig> flag_cfg,
               const std::string& prefix) {
    ExperimentConfig cfg;
    if (!config_path.empty())
        cfg = io::experiment_config_from_json(
            io::parse_json(io::read_text_file(config_path), "config file"));
    else if (flag_cfg)
        cfg = *flag_cfg;
    cfg.validate();

    const auto wanted = [&](const std::string& table) {
        return std::find(cfg.outputs.begin(), cfg.outputs.end(), table) != cfg.outputs.end();
    };

    const std::vector<SweepRow> rows = run_sweep(cfg);
    if (wanted("rows")) io::write_text_file(prefix + "_rows.csv", io::sweep_rows_to_csv(rows));
    if (wanted("byOperator"))
        io::write_text_file(prefix + "_by_operator.csv",
                            io::summaries_to_csv(summarize(rows, GroupBy::operator_index),
                                                 GroupBy::operator_index));
    if (wanted("byIc"))
        io::write_text_file(prefix + "_by_ic.csv",
                            io::summaries_to_csv(summarize(rows, GroupBy::initial_condition),
                                                 GroupBy::initial_condition));

    int equilibrated = 0, censored = 0, annihilated = 0;
    for (const SweepRow& row : rows) {
        if (row.annihilated)
            ++annihilated;
        else if (row.equilibrated)
            ++equilibrated;
        else
            ++censored;
    }

    json summary{{"config", io::experiment_config_to_json(cfg)},
                 {"cells", rows.size()},
                 {"equilibrated", equilibrated},
                 {"censored", censored},
                 {"annihilated", annihilated}};
    try {
        summary["fits"] = io::sweep_fits_to_json(fit_sweep(rows));
    } catch (const std::exception& e) {
        summary["fits"] = json{{"error", e.what()}};
    }
    if (wanted("fits")) io::write_text_file(prefix + "_fits.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
}

void cmd_fit(const std::string& in_path, const std::string& x_col, const std::string& y_col,
             const std::string& out) {
    const std::string text = io::read_text_file(in_path);
    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line)) throw InputError("fit: empty table");

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream stream(s);
        while (std::getline(stream, cell, ',')) cells.push_back(cell);
        return cells;
    };

    const std::vector<std::string> header = split(line);
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InputError("fit: no column named '" + name + "'");
    };
    const std::size_t xi = column(x_col), yi = column(y_col);

    std::vector<double> xs, ys;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() <= std::max(xi, yi)) continue;
        if (cells[xi].empty() || cells[yi].empty()) continue; // censored rows
        xs.push_back(std::stod(cells[xi]));
        ys.push_back(std::stod(cells[yi]));
    }
    emit(io::fit_to_json(loglog_fit(xs, ys, x_col, y_col)), out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum tensor automaton toolkit"};
    app.require_subcommand(1);
    std::function<void()> run;

    // evolve
    EvolutionSource evolve_src;
    int evolve_steps = 10;
    std::string evolve_out, evolve_render, evolve_legend;
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "Evolve a register and export the trajectory");
    add_evolution_options(evolve_cmd, evolve_src);
    evolve_cmd->add_option("--steps", evolve_steps, "Step count")->check(CLI::NonNegativeNumber);
    evolve_cmd->add_option("--out", evolve_out, "Trajectory file (.csv or .json)");
    evolve_cmd->add_option("--render", evolve_render, "Amplitude grid PPM path");
    evolve_cmd->add_option("--legend", evolve_legend, "Color legend PPM path");
    evolve_cmd->callback([&] {
        run = [&] { cmd_evolve(evolve_src, evolve_steps, evolve_out, evolve_render, evolve_legend); };
    });

    // equilibrate
    EvolutionSource eq_src;
    AnalysisConfig eq_cfg;
    std::string eq_out, eq_l2;
    CLI::App* eq_cmd = app.add_subcommand("equilibrate", "Detect the equilibration time");
    add_evolution_options(eq_cmd, eq_src);
    eq_cmd->add_option("--epsilon", eq_cfg.epsilon, "Probability-change threshold");
    eq_cmd->add_option("--window", eq_cfg.window, "Quiet transitions required");
    eq_cmd->add_option("--horizon", eq_cfg.horizon, "Evolution steps / latest admissible time");
    eq_cmd->add_option("--out", eq_out, "Report JSON path (default stdout)");
    eq_cmd->add_option("--l2-out", eq_l2, "L2 convergence series CSV path (step,distance)");
    eq_cmd->callback([&] { run = [&] { cmd_equilibrate(eq_src, eq_cfg, eq_out, eq_l2); }; });

    // spectrum
    EvolutionSource sp_src;
    int sp_steps = 256;
    double sp_threshold = 0.1;
    std::string sp_out, sp_json;
    CLI::App* sp_cmd = app.add_subcommand("spectrum", "Fourier power spectrum of a trajectory");
    add_evolution_options(sp_cmd, sp_src);
    sp_cmd->add_option("--steps", sp_steps, "Step count");
    sp_cmd->add_option("--threshold", sp_threshold, "Dominance threshold relative to max non-DC power");
    sp_cmd->add_option("--out", sp_out, "Spectrum CSV path (bin,power)");
    sp_cmd->add_option("--json", sp_json, "Report JSON path (default stdout)");
    sp_cmd->callback([&] { run = [&] { cmd_spectrum(sp_src, sp_steps, sp_threshold, sp_out, sp_json); }; });

    // reverse
    EvolutionSource rv_src;
    int rv_steps = 10;
    std::string rv_matrix, rv_out;
    CLI::App* rv_cmd = app.add_subcommand("reverse", "Reversal operator and coarse complexity");
    add_evolution_options(rv_cmd, rv_src);
    rv_cmd->add_option("--steps", rv_steps, "Step count")->check(CLI::NonNegativeNumber);
    rv_cmd->add_option("--out-matrix", rv_matrix, "Reversal operator matrix JSON path");
    rv_cmd->add_option("--out", rv_out, "Report JSON path (default stdout)");
    rv_cmd->callback([&] { run = [&] { cmd_reverse(rv_src, rv_steps, rv_matrix, rv_out); }; });

    // entropy
    EvolutionSource en_src;
    AnalysisConfig en_cfg;
    std::string en_out;
    CLI::App* en_cmd = app.add_subcommand("entropy", "Shannon entropy of the equilibrium distribution");
    add_evolution_options(en_cmd, en_src);
    en_cmd->add_option("--epsilon", en_cfg.epsilon, "Probability-change threshold");
    en_cmd->add_option("--window", en_cfg.window, "Quiet transitions required");
    en_cmd->add_option("--horizon", en_cfg.horizon, "Evolution steps");
    en_cmd->add_option("--out", en_out, "Report JSON path (default stdout)");
    en_cmd->callback([&] { run = [&] { cmd_entropy(en_src, en_cfg, en_out); }; });

    // ergodic
    ErgodicSource er_src;
    long er_n = 10000;
    int er_qmax = 64;
    double er_tol = 1e-9;
    std::string er_out, er_json;
    CLI::App* er_cmd = app.add_subcommand("ergodic", "Cesaro convergence and eigenphase diagnostics");
    er_cmd->add_option("--haar", er_src.haar_dim, "Haar-random unitary of this dimension");
    er_cmd->add_option("--op", er_src.op_path, "Unitary matrix JSON file");
    er_cmd->add_flag("--klocal", er_src.klocal, "Use e^{-iHt} of a seeded k-local Hamiltonian");
    er_cmd->add_option("--K", er_src.K, "k-local qubit count");
    er_cmd->add_option("--k", er_src.k, "k-local locality");
    er_cmd->add_option("--t", er_src.t, "k-local evolution time");
    er_cmd->add_option("--seed", er_src.seed, "Master seed (operator task 0, vector task 1)");
    er_cmd->add_option("--cesaro-N", er_n, "Averaging length")->check(CLI::Range(2L, 100000000L));
    er_cmd->add_option("--qmax", er_qmax, "Rationality denominator bound");
    er_cmd->add_option("--tol", er_tol, "Rationality tolerance");
    er_cmd->add_option("--out", er_out, "Convergence CSV path (N,error,bound)");
    er_cmd->add_option("--json", er_json, "Report JSON path (default stdout)");
    er_cmd->callback([&] { run = [&] { cmd_ergodic(er_src, er_n, er_qmax, er_tol, er_out, er_json); }; });

    // klocal
    int kl_K = 3, kl_k = 2;
    double kl_t = 1.0;
    std::uint64_t kl_seed = 0;
    std::string kl_couplings, kl_out, kl_evolution, kl_json;
    CLI::App* kl_cmd = app.add_subcommand("klocal", "Build a k-local Hamiltonian and its evolution");
    kl_cmd->add_option("--K", kl_K, "Qubit count")->required();
    kl_cmd->add_option("--k", kl_k, "Locality")->required();
    kl_cmd->add_option("--t", kl_t, "Evolution time");
    kl_cmd->add_option("--seed", kl_seed, "Coupling seed");
    kl_cmd->add_option("--couplings", kl_couplings, "JSON array of explicit couplings");
    kl_cmd->add_option("--out", kl_out, "Hamiltonian JSON path");
    kl_cmd->add_option("--evolution", kl_evolution, "U(t) matrix JSON path");
    kl_cmd->add_option("--json", kl_json, "Report JSON path (default stdout)");
    kl_cmd->callback([&] {
        run = [&] { cmd_klocal(kl_K, kl_k, kl_t, kl_seed, kl_couplings, kl_out, kl_evolution, kl_json); };
    });

    // sweep
    std::string sw_config, sw_prefix;
    ExperimentConfig sw_cfg;
    CLI::App* sw_cmd = app.add_subcommand("sweep", "Seeded operator x initial-condition ensemble");
    sw_cmd->add_option("--config", sw_config, "ExperimentConfig JSON file");
    sw_cmd->add_option("--n", sw_cfg.n_qubits, "Qubit count");
    sw_cmd->add_option("--operators", sw_cfg.num_operators, "Operator count");
    sw_cmd->add_option("--ics", sw_cfg.num_initial_conditions, "Initial conditions per operator");
    sw_cmd->add_option("--master-seed", sw_cfg.master_seed, "Master seed");
    sw_cmd->add_option("--epsilon", sw_cfg.analysis.epsilon, "Equilibration threshold");
    sw_cmd->add_option("--window", sw_cfg.analysis.window, "Equilibration window");
    sw_cmd->add_option("--horizon", sw_cfg.horizon, "Evolution steps");
    sw_cmd->add_option("--out-prefix", sw_prefix, "Output file prefix")->required();
    sw_cmd->callback([&] {
        run = [&] {
            sw_cfg.analysis.horizon = sw_cfg.horizon;
            cmd_sweep(sw_config,
                      sw_config.empty() ? std::optional<ExperimentConfig>(sw_cfg) : std::nullopt,
                      sw_prefix);
        };
    });

    // fit
    std::string ft_in, ft_x, ft_y, ft_out;
    CLI::App* ft_cmd = app.add_subcommand("fit", "Log-log least squares on two table columns");
    ft_cmd->add_option("--in", ft_in, "CSV table with a header row")->required();
    ft_cmd->add_option("--x", ft_x, "x column name")->required();
    ft_cmd->add_option("--y", ft_y, "y column name")->required();
    ft_cmd->add_option("--out", ft_out, "Report JSON path (default stdout)");
    ft_cmd->callback([&] { run = [&] { cmd_fit(ft_in, ft_x, ft_y, ft_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        run();
    } catch (const ContractError& e) {
        std::cerr << "numerical contract violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
