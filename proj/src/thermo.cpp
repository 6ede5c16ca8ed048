#include "qta/thermo.hpp"

#include <cmath>

namespace qta {

void AnalysisConfig::validate() const {
    if (epsilon <= 0.0) throw InputError("AnalysisConfig: epsilon must be positive");
    if (window < 1) throw InputError("AnalysisConfig: window must be >= 1");
    if (horizon < window) throw InputError("AnalysisConfig: horizon must be >= window");
}

EquilibrationReport equilibration_time(const Eigen::MatrixXd& probabilities,
                                       const AnalysisConfig& cfg) {
    cfg.validate();
    const Eigen::Index rows = probabilities.rows();
    if (rows < cfg.window + 1)
        throw InputError("equilibration_time: trajectory shorter than the persistence window");

    const Eigen::Index transitions = rows - 1;
    Eigen::VectorXd change(transitions);
    for (Eigen::Index t = 0; t < transitions; ++t)
        change[t] = (probabilities.row(t + 1) - probabilities.row(t)).cwiseAbs().maxCoeff();

    EquilibrationReport report;
    report.epsilon_used = cfg.epsilon;
    report.window_used = cfg.window;

    const Eigen::Index last_start = std::min<Eigen::Index>(transitions - cfg.window,
                                                           cfg.horizon);
    for (Eigen::Index t = 0; t <= last_start; ++t) {
        bool quiet = true;
        for (Eigen::Index w = 0; w < cfg.window; ++w) {
            if (change[t + w] >= cfg.epsilon) {
                quiet = false;
                break;
            }
        }
        if (quiet) {
            report.equilibrated = true;
            report.t_eq = static_cast<int>(t);
            report.equilibrium_probabilities =
                probabilities.middleRows(t, cfg.window + 1).colwise().mean();
            return report;
        }
    }

    // Censored: keep the tail average anyway so downstream entropy is defined.
    const Eigen::Index tail = std::min<Eigen::Index>(cfg.window + 1, rows);
    report.equilibrium_probabilities =
        probabilities.bottomRows(tail).colwise().mean();
    return report;
}

EquilibrationReport equilibration_time(const Trajectory& traj, const AnalysisConfig& cfg) {
    return equilibration_time(traj.probabilities, cfg);
}

std::vector<double> l2_convergence(const Eigen::MatrixXd& probabilities, int window) {
    const Eigen::Index rows = probabilities.rows();
    if (rows == 0) throw InputError("l2_convergence: empty trajectory");
    if (window < 1) throw InputError("l2_convergence: window must be >= 1");

    const Eigen::Index tail = std::min<Eigen::Index>(window + 1, rows);
    const Eigen::RowVectorXd mean = probabilities.bottomRows(tail).colwise().mean();

    std::vector<double> distance(static_cast<std::size_t>(rows));
    for (Eigen::Index t = 0; t < rows; ++t)
        distance[static_cast<std::size_t>(t)] = (probabilities.row(t) - mean).norm();
    return distance;
}

std::vector<double> l2_convergence(const Trajectory& traj, int window) {
    return l2_convergence(traj.probabilities, window);
}

SpectrumReport fourier_spectrum(const Eigen::MatrixXd& probabilities, double dominance) {
    const Eigen::Index length = probabilities.rows();
    if (length < 8) throw InputError("fourier_spectrum: trajectory too short (needs >= 8 rows)");

    const Eigen::Index bins = length / 2 + 1;
    SpectrumReport report;
    report.frequencies.resize(static_cast<std::size_t>(bins));
    report.power.assign(static_cast<std::size_t>(bins), 0.0);

    Eigen::MatrixXd centered = probabilities;
    centered.rowwise() -= probabilities.colwise().mean();

    // Plain one-sided DFT; fold weights keep Parseval exact:
    // sum over bins of power == time-domain energy of the mean-subtracted rows.
    for (Eigen::Index f = 0; f < bins; ++f) {
        report.frequencies[static_cast<std::size_t>(f)] = static_cast<int>(f);
        const bool folded = f != 0 && !(length % 2 == 0 && f == length / 2);
        const double weight = folded ? 2.0 : 1.0;

        double bin_power = 0.0;
        for (Eigen::Index i = 0; i < centered.cols(); ++i) {
            Complex coeff = 0.0;
            for (Eigen::Index t = 0; t < length; ++t) {
                const double angle = -2.0 * M_PI * static_cast<double>(f) *
                                     static_cast<double>(t) / static_cast<double>(length);
                coeff += centered(t, i) * Complex(std::cos(angle), std::sin(angle));
            }
            bin_power += std::norm(coeff);
        }
        report.power[static_cast<std::size_t>(f)] =
            weight * bin_power / static_cast<double>(length);
    }

    double total_ac = 0.0;
    double max_ac = 0.0;
    for (std::size_t f = 1; f < report.power.size(); ++f) {
        total_ac += report.power[f];
        max_ac = std::max(max_ac, report.power[f]);
    }
    if (total_ac > 1e-15) {
        for (std::size_t f = 1; f < report.power.size(); ++f)
            if (report.power[f] > dominance * max_ac)
                report.dominant.push_back(static_cast<int>(f));
    }
    return report;
}

SpectrumReport fourier_spectrum(const Trajectory& traj, double dominance) {
    return fourier_spectrum(traj.probabilities, dominance);
}

double shannon_entropy(const RealVector& probabilities) {
    if (probabilities.size() == 0) throw InputError("shannon_entropy: empty distribution");

    double sum = 0.0;
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] < -1e-12)
            throw ContractError("shannon_entropy: negative probability entry");
        sum += std::max(probabilities[i], 0.0);
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw InputError("shannon_entropy: probabilities do not sum to 1");

    double entropy = 0.0;
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
        const double p = std::max(probabilities[i], 0.0) / sum;
        if (p > 0.0) entropy -= p * std::log2(p);
    }
    return entropy;
}

} // namespace qta
