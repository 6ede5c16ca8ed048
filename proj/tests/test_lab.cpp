#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "qta/io.hpp"
#include "qta/lab.hpp"
#include "qta/render.hpp"

using namespace qta;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.n_qubits = 3;
    cfg.num_operators = 3;
    cfg.num_initial_conditions = 4;
    cfg.master_seed = 7;
    cfg.horizon = 60;
    cfg.analysis.horizon = 60;
    return cfg;
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("QTA_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "QTA_CLI not set; run through ctest");
    const int status = std::system((std::string(cli) + " " + args).c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("seed derivation: task indices follow the documented layout") {
    ExperimentConfig cfg = tiny_config();
    CHECK(operator_seed(cfg, 2).task_index == 2);
    CHECK(operator_seed(cfg, 0).master == 7);
    // numOperators + o*numICs + i
    CHECK(initial_condition_seed(cfg, 1, 3).task_index == 3 + 1 * 4 + 3);
}

TEST_CASE("sweep_cell: CNOT on |000> pins the fixed-point row") {
    const ExperimentConfig cfg = tiny_config();
    const GlobalOperator cnot3 = build_global_operator(LocalRule::cnot(), 3);
    const SweepRow row = sweep_cell(cnot3, StateVector::basis_state(3, 0), cfg, 0, 0);
    CHECK(row.equilibrated);
    CHECK(row.t_eq == 0);
    CHECK(row.complexity == doctest::Approx(1.0));
    CHECK(row.entropy == doctest::Approx(0.0));
}

TEST_CASE("run_sweep: canonical ordering, determinism, single-cell config") {
    ExperimentConfig one = tiny_config();
    one.num_operators = 1;
    one.num_initial_conditions = 1;
    CHECK(run_sweep(one).size() == 1);

    const ExperimentConfig cfg = tiny_config();
    const std::vector<SweepRow> a = run_sweep(cfg);
    CHECK(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].operator_index == static_cast<int>(i) / 4);
        CHECK(a[i].ic_index == static_cast<int>(i) % 4);
        if (a[i].annihilated) continue;
        CHECK(a[i].complexity >= 1.0 - 1e-12);
        CHECK(a[i].complexity <= 2.0 + 1e-12);
        CHECK(a[i].entropy >= 0.0);
        CHECK(a[i].entropy <= 3.0 + 1e-12);
    }

    setenv("QTA_THREADS", "1", 1);
    const std::vector<SweepRow> serial = run_sweep(cfg);
    setenv("QTA_THREADS", "4", 1);
    const std::vector<SweepRow> parallel = run_sweep(cfg);
    unsetenv("QTA_THREADS");
    CHECK(io::sweep_rows_to_csv(serial) == io::sweep_rows_to_csv(a));
    CHECK(io::sweep_rows_to_csv(parallel) == io::sweep_rows_to_csv(a));
}

TEST_CASE("summarize: arithmetic, grouping, permutation invariance") {
    std::vector<SweepRow> rows;
    SweepRow r;
    r.equilibrated = true;

    r.operator_index = 0;
    r.ic_index = 0;
    r.t_eq = 4;
    r.complexity = 1.5;
    r.entropy = 2.0;
    rows.push_back(r);
    r.ic_index = 1;
    r.t_eq = 6;
    rows.push_back(r);
    r.operator_index = 1;
    r.ic_index = 0;
    r.t_eq = 10;
    rows.push_back(r);

    const std::vector<GroupSummary> by_op = summarize(rows, GroupBy::operator_index);
    REQUIRE(by_op.size() == 2);
    CHECK(by_op[0].mean_t_eq == doctest::Approx(5.0));
    CHECK(by_op[0].std_t_eq == doctest::Approx(1.0));
    CHECK(by_op[1].count == 1);
    CHECK(by_op[1].std_t_eq == doctest::Approx(0.0));

    std::swap(rows[0], rows[2]);
    const std::vector<GroupSummary> shuffled = summarize(rows, GroupBy::operator_index);
    CHECK(shuffled[0].mean_t_eq == doctest::Approx(5.0));

    // censored rows are counted, not averaged
    SweepRow censored;
    censored.operator_index = 0;
    censored.ic_index = 2;
    censored.equilibrated = false;
    censored.complexity = 99.0;
    rows.push_back(censored);
    const std::vector<GroupSummary> with_censored = summarize(rows, GroupBy::operator_index);
    CHECK(with_censored[0].censored == 1);
    CHECK(with_censored[0].mean_t_eq == doctest::Approx(5.0));

    CHECK_THROWS_AS(summarize({}, GroupBy::operator_index), InputError);
}

TEST_CASE("loglog_fit: exact line, degenerate inputs, rescale invariance") {
    std::vector<double> xs, ys;
    for (double x : {1.0, 2.0, 5.0, 11.0}) {
        xs.push_back(x);
        ys.push_back(std::exp(2.0) * std::pow(x, -3.0)); // ln y = 2 - 3 ln x
    }
    const FitReport fit = loglog_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.point_count == 4);

    const std::vector<double> flat_x = {3.0, 3.0, 3.0};
    const std::vector<double> wild_y = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(loglog_fit(flat_x, wild_y), ContractError);
    CHECK_THROWS_AS(loglog_fit(wild_y, flat_x), ContractError); // zero y variance
    const std::vector<double> with_zero = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(loglog_fit(with_zero, wild_y), InputError);
    CHECK_THROWS_AS(loglog_fit(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
                    InputError);

    std::vector<double> scaled = xs;
    for (double& x : scaled) x *= 7.0;
    const FitReport rescaled = loglog_fit(scaled, ys);
    CHECK(rescaled.r_squared == doctest::Approx(fit.r_squared).epsilon(1e-12));
    CHECK(rescaled.slope == doctest::Approx(fit.slope).epsilon(1e-12));
}

TEST_CASE("fit_sweep: produces both fits on a real ensemble") {
    ExperimentConfig cfg = tiny_config();
    cfg.num_operators = 5;
    cfg.num_initial_conditions = 6;
    const std::vector<SweepRow> rows = run_sweep(cfg);
    const SweepFits fits = fit_sweep(rows);
    CHECK(fits.operators_used >= 3);
    CHECK(fits.t_eq_vs_complexity.r_squared >= 0.0);
    CHECK(fits.t_eq_vs_complexity.r_squared <= 1.0);
    CHECK(fits.t_eq_vs_entropy.point_count >= 3);
}

TEST_CASE("amplitude_color: the five anchors and the magnitude ramp") {
    CHECK((amplitude_color(Complex(0, 0)) == Rgb{0, 0, 0}));
    CHECK((amplitude_color(Complex(1, 0)) == Rgb{255, 0, 0}));
    CHECK((amplitude_color(Complex(0, 1)) == Rgb{128, 255, 0}));
    CHECK((amplitude_color(Complex(-1, 0)) == Rgb{0, 255, 255}));
    CHECK((amplitude_color(Complex(0, -1)) == Rgb{128, 0, 255}));
    CHECK((amplitude_color(Complex(0.5, 0)) == Rgb{128, 0, 0})); // brightness scales
}

TEST_CASE("render_amplitude_grid: header and pixel layout") {
    const GlobalOperator cnot3 = build_global_operator(LocalRule::cnot(), 3);
    const Trajectory traj = evolve(StateVector::basis_state(3, 0), cnot3, 10);

    const std::string path = (std::filesystem::temp_directory_path() / "qta_grid_test.ppm").string();
    render_amplitude_grid(traj, path);
    const std::string bytes = io::read_text_file(path);
    CHECK(bytes.rfind("P6\n8 11\n255\n", 0) == 0);
    CHECK(bytes.size() == 12 + 3 * 8 * 11); // 12 header bytes + pixels
    // first pixel is the |000> amplitude 1 -> red
    CHECK(static_cast<unsigned char>(bytes[12]) == 255);
    CHECK(static_cast<unsigned char>(bytes[13]) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("io: matrix and vector JSON round trips exactly") {
    const Matrix u = haar_unitary(4, {70, 0});
    const Matrix u2 = io::matrix_from_json(io::parse_json(io::matrix_to_json(u).dump(), "m"));
    CHECK(max_abs(u - u2) == 0.0); // shortest round-trip decimals are exact

    const Vector v = random_state(3, {70, 1}).amplitudes();
    const Vector v2 = io::vector_from_json(io::parse_json(io::vector_to_json(v).dump(), "v"));
    CHECK(max_abs(v - v2) == 0.0);

    CHECK_THROWS_AS(io::matrix_from_json(io::parse_json("[[1, 2], [3]]", "bad")), InputError);
    CHECK_THROWS_AS(io::parse_json("{oops", "bad"), InputError);
}

TEST_CASE("io: sweep row CSV freezes the equilibrated/censored/annihilated forms") {
    SweepRow equilibrated;
    equilibrated.operator_index = 0;
    equilibrated.ic_index = 1;
    equilibrated.equilibrated = true;
    equilibrated.t_eq = 5;
    equilibrated.complexity = 1.5;
    equilibrated.entropy = 0.25;

    SweepRow censored;
    censored.operator_index = 0;
    censored.ic_index = 2;
    censored.complexity = 1.75;
    censored.entropy = 2.0;

    SweepRow annihilated;
    annihilated.operator_index = 1;
    annihilated.ic_index = 0;
    annihilated.annihilated = true;

    CHECK(io::sweep_rows_to_csv({equilibrated, censored, annihilated}) ==
          "operator,ic,equilibrated,annihilated,tEq,complexity,entropy\n"
          "0,1,1,0,5,1.5,0.25\n"
          "0,2,0,0,,1.75,2\n"
          "1,0,0,1,,,\n");
}

TEST_CASE("io: series CSV exports carry headers and exact decimals") {
    CHECK(io::l2_series_to_csv({0.5, 0.25}) == "step,distance\n0,0.5\n1,0.25\n");

    SpectrumReport spectrum;
    spectrum.frequencies = {0, 1};
    spectrum.power = {0.0, 0.125};
    CHECK(io::spectrum_to_csv(spectrum) == "bin,power\n0,0\n1,0.125\n");
}

TEST_CASE("io: rule and hamiltonian files round trip") {
    const LocalRule rule({haar_unitary(4, {71, 0}), haar_unitary(4, {71, 1})});
    const LocalRule parsed = io::rule_from_json(io::parse_json(io::rule_to_json(rule).dump(), "r"));
    CHECK(parsed.size() == 2);
    CHECK(max_abs(parsed.gates()[0] - rule.gates()[0]) == 0.0);

    const KLocalHamiltonian h = build_k_local(3, 2, {72, 0});
    const KLocalHamiltonian h2 =
        io::hamiltonian_from_json(io::parse_json(io::hamiltonian_to_json(h).dump(), "h"));
    CHECK(max_abs(h.matrix - h2.matrix) == 0.0);
    CHECK(h2.locality == 2);
}

TEST_CASE("io: experiment config JSON honors field names and defaults") {
    const auto j = io::parse_json(
        R"({"nQubits": 3, "numOperators": 4, "numInitialConditions": 5,
            "masterSeed": 99, "horizon": 80,
            "analysis": {"epsilon": 0.01, "window": 3, "horizon": 70}})",
        "config");
    const ExperimentConfig cfg = io::experiment_config_from_json(j);
    CHECK(cfg.num_operators == 4);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.analysis.epsilon == doctest::Approx(0.01));
    CHECK(cfg.analysis.horizon == 70);

    const ExperimentConfig trimmed = io::experiment_config_from_json(
        io::parse_json(R"({"masterSeed": 1, "outputs": ["rows"]})", "config"));
    CHECK(trimmed.outputs == std::vector<std::string>{"rows"});
    CHECK_THROWS_AS(io::experiment_config_from_json(
                        io::parse_json(R"({"outputs": ["bogus"]})", "config")),
                    InputError);

    const ExperimentConfig defaults =
        io::experiment_config_from_json(io::parse_json(R"({"masterSeed": 1})", "config"));
    CHECK(defaults.num_operators == 50);
    CHECK(defaults.num_initial_conditions == 100);
    CHECK(defaults.analysis.epsilon == doctest::Approx(1e-3));
    CHECK(defaults.analysis.window == 5);
    CHECK(defaults.horizon == 500);
}

TEST_CASE("cli: exit codes for usage errors and numerical contract violations") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "qta_cli_test";
    std::filesystem::create_directories(dir);

    CHECK(run_cli("--definitely-not-a-flag > /dev/null 2>&1") == 1);
    CHECK(run_cli("evolve --builtin cnot --n 3 --steps 2 --out " + (dir / "t.csv").string() +
                  " > /dev/null 2>&1") == 0);

    // non-unitary rule file -> numerical contract violation
    io::write_text_file((dir / "bad_rule.json").string(),
                        "[[[ [2,0],[0,0],[0,0],[0,0] ], [ [0,0],[1,0],[0,0],[0,0] ], "
                        "[ [0,0],[0,0],[1,0],[0,0] ], [ [0,0],[0,0],[0,0],[1,0] ]]]");
    CHECK(run_cli("evolve --rule " + (dir / "bad_rule.json").string() + " --n 3 --steps 2 --out " +
                  (dir / "t2.csv").string() + " > /dev/null 2>&1") == 2);

    std::filesystem::remove_all(dir);
}
