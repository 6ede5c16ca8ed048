#include "qta/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace qta {

void ExperimentConfig::validate() const {
    if (n_qubits < 2 || n_qubits > max_qubits)
        throw InputError("ExperimentConfig: qubit count out of range [2, 12]");
    if (num_operators < 1 || num_initial_conditions < 1)
        throw InputError("ExperimentConfig: counts must be >= 1");
    if (horizon < 1) throw InputError("ExperimentConfig: horizon must be >= 1");
    for (const std::string& table : outputs)
        if (table != "rows" && table != "byOperator" && table != "byIc" && table != "fits")
            throw InputError("ExperimentConfig: unknown output table '" + table + "'");
    analysis.validate();
}

RngSeed operator_seed(const ExperimentConfig& cfg, int operator_index) {
    return {cfg.master_seed, static_cast<std::uint64_t>(operator_index)};
}

RngSeed initial_condition_seed(const ExperimentConfig& cfg, int operator_index, int ic_index) {
    return {cfg.master_seed,
            static_cast<std::uint64_t>(cfg.num_operators) +
                static_cast<std::uint64_t>(operator_index) *
                    static_cast<std::uint64_t>(cfg.num_initial_conditions) +
                static_cast<std::uint64_t>(ic_index)};
}

SweepRow sweep_cell(const GlobalOperator& g, const StateVector& initial,
                    const ExperimentConfig& cfg, int operator_index, int ic_index) {
    SweepRow row;
    row.operator_index = operator_index;
    row.ic_index = ic_index;

    Trajectory traj;
    try {
        traj = evolve(initial, g, cfg.horizon);
    } catch (const AnnihilatedState&) {
        row.annihilated = true;
        return row;
    }

    const EquilibrationReport report = equilibration_time(traj, cfg.analysis);
    row.equilibrated = report.equilibrated;
    row.t_eq = report.t_eq.value_or(-1);

    const std::size_t scored_step =
        report.equilibrated ? static_cast<std::size_t>(*report.t_eq)
                            : static_cast<std::size_t>(cfg.horizon);
    row.complexity =
        coarse_complexity(reversal_operator(initial, traj.states[scored_step])).value;
    row.entropy = shannon_entropy(report.equilibrium_probabilities);
    return row;
}

namespace {

int sweep_thread_count(int num_operators) {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char* cap = std::getenv("QTA_THREADS")) {
        const int requested = std::atoi(cap);
        if (requested >= 1) threads = std::min(threads, requested);
    }
    return std::min(threads, num_operators);
}

} // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();

    const std::size_t total =
        static_cast<std::size_t>(cfg.num_operators) * cfg.num_initial_conditions;
    std::vector<SweepRow> rows(total);

    // Operators are independent tasks; each writes a disjoint row range, so
    // canonical ordering never depends on scheduling.
    std::atomic<int> next_operator{0};
    auto worker = [&]() {
        while (true) {
            const int o = next_operator.fetch_add(1);
            if (o >= cfg.num_operators) return;
            const GlobalOperator g =
                build_global_operator(LocalRule::haar(operator_seed(cfg, o)), cfg.n_qubits);
            for (int i = 0; i < cfg.num_initial_conditions; ++i) {
                const StateVector initial =
                    random_state(cfg.n_qubits, initial_condition_seed(cfg, o, i));
                rows[static_cast<std::size_t>(o) * cfg.num_initial_conditions + i] =
                    sweep_cell(g, initial, cfg, o, i);
            }
        }
    };

    const int thread_count = sweep_thread_count(cfg.num_operators);
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return rows;
}

namespace {

struct Accumulator {
    std::vector<double> t_eq, complexity, entropy;
    int censored = 0;
    int annihilated = 0;
};

void mean_std(const std::vector<double>& values, double& mean, double& std_dev) {
    if (values.empty()) {
        mean = std_dev = 0.0;
        return;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    std_dev = std::sqrt(sq / static_cast<double>(values.size())); // population
}

} // namespace

std::vector<GroupSummary> summarize(const std::vector<SweepRow>& rows, GroupBy group_by) {
    if (rows.empty()) throw InputError("summarize: no rows");

    std::map<int, Accumulator> groups;
    for (const SweepRow& row : rows) {
        const int key = group_by == GroupBy::operator_index ? row.operator_index : row.ic_index;
        Accumulator& acc = groups[key];
        if (row.annihilated) {
            ++acc.annihilated;
        } else if (!row.equilibrated) {
            ++acc.censored;
        } else {
            acc.t_eq.push_back(static_cast<double>(row.t_eq));
            acc.complexity.push_back(row.complexity);
            acc.entropy.push_back(row.entropy);
        }
    }

    std::vector<GroupSummary> summaries;
    summaries.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        GroupSummary s;
        s.key = key;
        s.count = static_cast<int>(acc.t_eq.size());
        s.censored = acc.censored;
        s.annihilated = acc.annihilated;
        mean_std(acc.t_eq, s.mean_t_eq, s.std_t_eq);
        mean_std(acc.complexity, s.mean_complexity, s.std_complexity);
        mean_std(acc.entropy, s.mean_entropy, s.std_entropy);
        summaries.push_back(s);
    }
    return summaries;
}

FitReport loglog_fit(std::span<const double> xs, std::span<const double> ys,
                     std::string x_label, std::string y_label) {
    if (xs.size() != ys.size()) throw InputError("loglog_fit: length mismatch");
    if (xs.size() < 3) throw InputError("loglog_fit: needs at least 3 points");

    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0)
            throw InputError("loglog_fit: nonpositive entry");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }

    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += lx[i];
        mean_y += ly[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
        sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
        syy += (ly[i] - mean_y) * (ly[i] - mean_y);
    }
    if (sxx == 0.0) throw ContractError("loglog_fit: zero variance in x");
    if (syy == 0.0) throw ContractError("loglog_fit: zero variance in y");

    FitReport fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r_squared = std::clamp(1.0 - (syy - fit.slope * sxy) / syy, 0.0, 1.0);
    fit.x_label = std::move(x_label);
    fit.y_label = std::move(y_label);
    fit.point_count = static_cast<int>(xs.size());
    return fit;
}

SweepFits fit_sweep(const std::vector<SweepRow>& rows) {
    SweepFits fits;

    // Per-operator means over equilibrated rows, zero t_eq shifted to 1 step.
    std::map<int, Accumulator> groups;
    for (const SweepRow& row : rows) {
        if (row.annihilated || !row.equilibrated) continue;
        Accumulator& acc = groups[row.operator_index];
        if (row.t_eq == 0) ++fits.zero_t_eq_shifted;
        acc.t_eq.push_back(static_cast<double>(std::max(row.t_eq, 1)));
        acc.complexity.push_back(row.complexity);
        acc.entropy.push_back(row.entropy);
    }

    std::vector<double> mean_t_eq, mean_complexity, mean_entropy;
    for (const auto& [key, acc] : groups) {
        double mean, ignored;
        mean_std(acc.t_eq, mean, ignored);
        mean_t_eq.push_back(mean);
        mean_std(acc.complexity, mean, ignored);
        mean_complexity.push_back(mean);
        mean_std(acc.entropy, mean, ignored);
        mean_entropy.push_back(mean);
    }
    fits.operators_used = static_cast<int>(mean_t_eq.size());

    fits.t_eq_vs_complexity =
        loglog_fit(mean_t_eq, mean_complexity, "ln mean equilibration time", "ln mean complexity");

    // Entropy means can be zero for pathological operators; keep the fit
    // defined by dropping those points.
    std::vector<double> ex, ey;
    for (std::size_t i = 0; i < mean_t_eq.size(); ++i) {
        if (mean_entropy[i] > 0.0) {
            ex.push_back(mean_t_eq[i]);
            ey.push_back(mean_entropy[i]);
        }
    }
    fits.t_eq_vs_entropy =
        loglog_fit(ex, ey, "ln mean equilibration time", "ln mean entropy");
    return fits;
}

} // namespace qta
