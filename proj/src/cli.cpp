#include "qubus/cli.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qubus/csv.hpp"

namespace qubus {

namespace {

// Runs a command body, mapping exception classes onto the exit-code
// contract: bad parameters -> 2, numeric trouble -> 1.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        body();
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

// Collects constraint violations so one error message names all of them.
struct Violations {
    std::ostringstream msg;
    bool any = false;

    void add(const std::string& text) {
        if (any) msg << "; ";
        msg << text;
        any = true;
    }
    void require(bool ok, const std::string& text) {
        if (!ok) add(text);
    }
    void check() const {
        if (any) throw std::invalid_argument(msg.str());
    }
};

void check_precision(Violations& v, int precision) {
    v.require(precision >= 1 && precision <= 17, "precision must lie in [1, 17]");
}

void check_gate_config(Violations& v, const GateConfig& gc) {
    try {
        gc.validate();
    } catch (const std::invalid_argument& e) {
        v.add(e.what());
    }
}

const std::vector<std::int64_t> kDefaultGrowthLengths = {2,   3,   5,   9,   10,  17,  33,
                                                         50,  65,  100, 129, 250, 257, 513};

std::size_t center_peak_index(const PeakSpectrum& spectrum) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < spectrum.peaks().size(); ++i) {
        if (std::abs(spectrum.peaks()[i].bus_phase) < std::abs(spectrum.peaks()[best].bus_phase)) {
            best = i;
        }
    }
    return best;
}

}  // namespace

int cmd_gate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Violations v;
        check_precision(v, config.precision);
        const GateConfig gc{config.alpha, config.theta, std::nullopt};
        check_gate_config(v, gc);
        v.check();

        const int n = config.gate_kind == GateKind::Parity2Q ? 2 : 3;
        const PreparedGate gate = prepare_gate(config.gate_kind, gc, QubitState::uniform_plus(n));

        std::array<double, kNumLabels> analytic_prob{};
        for (const auto& peak : gate.spectrum.peaks()) {
            analytic_prob[label_index(peak.label)] += peak.prob;
        }
        const double misclass = gate.spectrum.exact_misclassification();

        TrialStats stats;
        if (config.trials > 0) {
            stats = run_gate_trials(gate, config.trials, config.seed, config.threads);
        }

        std::ostringstream buf;
        CsvWriter csv(buf, config.precision);
        csv.cell("label")
            .cell("empirical_freq")
            .cell("analytic_prob")
            .cell("mean_fidelity")
            .cell("exact_misclassification");
        csv.end_row();
        for (OutcomeLabel label : {OutcomeLabel::GHZ, OutcomeLabel::BELL, OutcomeLabel::PRODUCT}) {
            const std::size_t l = label_index(label);
            if (analytic_prob[l] == 0.0) continue;  // label absent from this spectrum
            csv.cell(to_string(label));
            if (config.trials > 0) {
                csv.cell(static_cast<double>(stats.label_counts[l]) /
                         static_cast<double>(stats.trials));
            } else {
                csv.blank();
            }
            csv.cell(analytic_prob[l]);
            if (config.trials > 0 && stats.label_counts[l] > 0) {
                csv.cell(stats.fidelity_sums[l] / static_cast<double>(stats.label_counts[l]));
            } else {
                csv.blank();
            }
            csv.cell(misclass);
            csv.end_row();
        }
        out << buf.str();
    });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<double> alphas = config.sweep_alphas;
        std::vector<double> thetas = config.sweep_thetas;
        if (alphas.empty()) {
            alphas = {10.0 * std::numbers::pi, 50.0 * std::numbers::pi, 100.0 * std::numbers::pi,
                      200.0 * std::numbers::pi};
        }
        if (thetas.empty()) thetas = {0.0, 0.005, 0.01, 0.02};

        Violations v;
        check_precision(v, config.precision);
        for (double a : alphas) {
            v.require(a >= 0.0 && std::isfinite(a), "alpha grid values must be finite and >= 0");
        }
        for (double th : thetas) {
            v.require(th >= 0.0 && th <= std::numbers::pi / 4.0,
                      "theta grid values must lie in [0, pi/4]");
        }
        v.check();

        std::ostringstream buf;
        CsvWriter csv(buf, config.precision);
        csv.cell("alpha")
            .cell("theta")
            .cell("p_err_paper")
            .cell("exact_misclassification")
            .cell("fidelity_center");
        csv.end_row();
        for (double alpha : alphas) {
            for (double theta : thetas) {
                const GateConfig gc{alpha, theta, std::nullopt};
                const PreparedGate gate =
                    prepare_gate(GateKind::Parity2Q, gc, QubitState::uniform_plus(2));
                const ConditionalFidelityReport fid =
                    expected_conditional_fidelity(gc, GateKind::Parity2Q);
                csv.cell(alpha)
                    .cell(theta)
                    .cell(p_err(alpha, theta))
                    .cell(gate.spectrum.exact_misclassification())
                    .cell(fid.per_peak[center_peak_index(gate.spectrum)]);
                csv.end_row();
            }
        }
        out << buf.str();
    });
}

int cmd_growth(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::vector<std::int64_t>& lengths =
            config.lengths.empty() ? kDefaultGrowthLengths : config.lengths;

        Violations v;
        check_precision(v, config.precision);
        v.require(config.p > 0.0 && config.p <= 1.0, "p must lie in (0, 1]");
        v.require(config.t > 0.0 && std::isfinite(config.t), "t must be positive");
        for (std::int64_t L : lengths) v.require(L >= 2, "every L must be >= 2");
        if (config.L0) v.require(*config.L0 >= 2, "L0 must be >= 2");
        v.check();

        const auto baselines = literature_baselines();
        const auto rows = compare_strategies(config.p, config.t, lengths, baselines, config.L0);

        std::ostringstream buf;
        CsvWriter csv(buf, config.precision);
        csv.cell("L").cell("N_seq").cell("N_dc").cell("N_initial").cell("T_seq").cell("T_dc").cell(
            "T_initial");
        for (const auto& b : baselines) csv.cell(b.name);
        csv.cell("note");
        csv.end_row();
        for (const auto& row : rows) {
            csv.cell(row.L)
                .cell(row.n_seq)
                .cell(row.n_dc)
                .cell(row.n_initial)
                .cell(row.t_seq)
                .cell(row.t_dc)
                .cell(row.t_initial);
            for (double b : row.baselines) csv.cell(b);
            csv.cell(row.note);
            csv.end_row();
        }
        out << buf.str();
    });
}

int cmd_mc(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Violations v;
        check_precision(v, config.precision);
        if (config.strategy == Strategy::INITIAL) {
            v.add("INITIAL is an analytic-only strategy; use the growth command");
        }
        v.check();

        std::vector<std::int64_t> lengths = config.lengths;
        if (lengths.empty()) {
            lengths = config.strategy == Strategy::DIVIDE_CONQUER
                          ? std::vector<std::int64_t>{5, 17, 65}
                          : std::vector<std::int64_t>{100};
        }

        std::vector<StrategyConfig> row_configs;
        row_configs.reserve(lengths.size());
        for (std::int64_t L : lengths) {
            StrategyConfig sc;
            sc.strategy = config.strategy;
            sc.p = config.p;
            sc.t = config.t;
            sc.L = L;
            sc.L0 = config.L0;
            sc.trials = config.trials;
            sc.seed = config.seed;
            sc.threads = config.threads;
            try {
                sc.validate();
            } catch (const std::invalid_argument& e) {
                v.add("L=" + std::to_string(L) + ": " + e.what());
            }
            row_configs.push_back(sc);
        }
        v.check();

        std::ostringstream buf;
        CsvWriter csv(buf, config.precision);
        csv.cell("L")
            .cell("strategy")
            .cell("trials")
            .cell("mean_ops")
            .cell("ci95_ops")
            .cell("mean_time")
            .cell("ci95_time")
            .cell("analytic_ops")
            .cell("analytic_time");
        csv.end_row();
        for (const auto& sc : row_configs) {
            const CostReport report = sc.strategy == Strategy::SEQUENTIAL ? mc_sequential(sc)
                                                                          : mc_divide_conquer(sc);
            csv.cell(sc.L)
                .cell(to_string(sc.strategy))
                .cell(report.trials)
                .cell(report.mean_ops)
                .cell(report.ci95_ops)
                .cell(report.mean_time)
                .cell(report.ci95_time)
                .cell(report.analytic_ops)
                .cell(report.analytic_time);
            csv.end_row();
        }
        out << buf.str();
    });
}

}  // namespace qubus
