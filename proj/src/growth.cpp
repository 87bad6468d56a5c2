#include "qubus/growth.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qubus/parallel.hpp"
#include "qubus/rng.hpp"

namespace qubus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(std::int64_t v) { return v >= 1 && (v & (v - 1)) == 0; }

int log2_exact(std::int64_t v) {
    int k = 0;
    while ((std::int64_t{1} << k) < v) ++k;
    return k;
}

// Integer accumulators keep the fold exactly associative, so parallel runs
// are trivially bit-identical; ops per trial stay far below 2^32, so the
// squared sums fit comfortably in 64 bits at any supported trial count.
struct OpsAccumulator {
    std::uint64_t trials = 0;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
};

void fold_ops(OpsAccumulator& total, const OpsAccumulator& blk) {
    total.trials += blk.trials;
    total.sum += blk.sum;
    total.sum_sq += blk.sum_sq;
}

// Mean and half-width of the 95% normal-approximation confidence interval.
std::pair<double, double> mean_ci(const OpsAccumulator& acc) {
    const double n = static_cast<double>(acc.trials);
    const double mean = static_cast<double>(acc.sum) / n;
    double ci = 0.0;
    if (acc.trials > 1) {
        const double sum = static_cast<double>(acc.sum);
        const double var = (static_cast<double>(acc.sum_sq) - sum * sum / n) / (n - 1.0);
        ci = 1.96 * std::sqrt(std::max(0.0, var) / n);
    }
    return {mean, ci};
}

// Ops to assemble one level-k chain, restarting from fresh halves on failure.
std::uint64_t build_level(int k, double p, RngStream& rng) {
    if (k == 0) return 0;
    std::uint64_t ops = 0;
    for (;;) {
        ops += build_level(k - 1, p, rng) + build_level(k - 1, p, rng) + 1;
        if (rng.uniform() < p) return ops;
    }
}

}  // namespace

const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::SEQUENTIAL: return "SEQUENTIAL";
        case Strategy::DIVIDE_CONQUER: return "DIVIDE_CONQUER";
        case Strategy::INITIAL: return "INITIAL";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
    if (name == "SEQUENTIAL" || name == "sequential" || name == "seq") return Strategy::SEQUENTIAL;
    if (name == "DIVIDE_CONQUER" || name == "divide_conquer" || name == "dc") {
        return Strategy::DIVIDE_CONQUER;
    }
    if (name == "INITIAL" || name == "initial") return Strategy::INITIAL;
    return std::nullopt;
}

void StrategyConfig::validate() const {
    std::ostringstream err;
    auto fail = [&err](const std::string& msg) {
        if (err.tellp() > 0) err << "; ";
        err << msg;
    };

    if (!(p > 0.0 && p <= 1.0)) fail("p must lie in (0, 1]");
    if (!(t > 0.0) || !std::isfinite(t)) fail("t must be positive");
    if (L < 2) fail("L must be >= 2");
    if (trials < 1) fail("trials must be >= 1");
    switch (strategy) {
        case Strategy::SEQUENTIAL:
            if (!(p > 0.5)) fail("SEQUENTIAL requires p > 1/2");
            break;
        case Strategy::DIVIDE_CONQUER:
            if (!is_power_of_two(L - 1)) fail("DIVIDE_CONQUER requires L - 1 to be a power of two");
            break;
        case Strategy::INITIAL:
            if (!L0) {
                fail("INITIAL requires L0");
            } else {
                if (p > 0.0 && p <= 1.0 && !(static_cast<double>(*L0) > critical_length(p))) {
                    fail("INITIAL requires L0 > critical length 1 + 2(1-p)/p");
                }
                if (*L0 > L) fail("INITIAL requires L0 <= L");
            }
            break;
    }
    if (err.tellp() > 0) throw std::invalid_argument(err.str());
}

std::span<const LiteratureBaseline> literature_baselines() {
    // Quoted operation-count scalings from prior single-photon (repeat-
    // until-success) and bus-gate chain-growth analyses.
    static constexpr LiteratureBaseline kBaselines[] = {
        {"RUS(Pf=0.6)", 185.0, -1115.0},
        {"RUS(Pf=0.4)", 16.6, -47.7},
        {"twoQubitDC", 12.0, -38.0},
        {"threeQubit", 8.0, -44.0 / 3.0},
    };
    return kBaselines;
}

double critical_length(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    return 1.0 + 2.0 * (1.0 - p) / p;
}

double analytic_ops(Strategy strategy, double p, std::int64_t L, std::optional<std::int64_t>) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    if (L < 2) throw std::invalid_argument("L must be >= 2");
    const double Ld = static_cast<double>(L);
    switch (strategy) {
        case Strategy::SEQUENTIAL:
            if (!(p > 0.5)) throw std::invalid_argument("SEQUENTIAL requires p > 1/2");
            return (Ld - 1.0) / (2.0 * p - 1.0);
        case Strategy::DIVIDE_CONQUER: {
            if (!is_power_of_two(L - 1)) {
                throw std::invalid_argument("DIVIDE_CONQUER requires L - 1 to be a power of two");
            }
            const int k = log2_exact(L - 1);
            return (std::pow(2.0 / p, k) - 1.0) / (2.0 - p);
        }
        case Strategy::INITIAL: {
            const double overhead = 2.0 * (1.0 - p) / p;  // L_c - 1
            if (!(1.0 - overhead > 0.0)) {
                throw std::invalid_argument("INITIAL requires p > 2/3 (1 - 2(1-p)/p must be positive)");
            }
            return (2.0 / p) * (Ld - 1.0 - overhead) / (1.0 - overhead) - 1.0 / p;
        }
    }
    throw std::invalid_argument("unknown strategy");
}

double analytic_time(Strategy strategy, double p, double t, std::int64_t L,
                     std::optional<std::int64_t> L0) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
    if (L < 2) throw std::invalid_argument("L must be >= 2");
    const double Ld = static_cast<double>(L);
    switch (strategy) {
        case Strategy::SEQUENTIAL:
            if (!(p > 0.5)) throw std::invalid_argument("SEQUENTIAL requires p > 1/2");
            return t * (Ld - 1.0) / p;
        case Strategy::DIVIDE_CONQUER:
            if (!is_power_of_two(L - 1)) {
                throw std::invalid_argument("DIVIDE_CONQUER requires L - 1 to be a power of two");
            }
            return t * (1.0 + log2_exact(L - 1));
        case Strategy::INITIAL: {
            if (!L0) throw std::invalid_argument("INITIAL time requires L0");
            const double Lc = critical_length(p);
            if (!(static_cast<double>(*L0) > Lc)) {
                throw std::invalid_argument("INITIAL requires L0 > critical length 1 + 2(1-p)/p");
            }
            if (*L0 > L) throw std::invalid_argument("INITIAL requires L0 <= L");
            const double ratio = (Ld - Lc) / (static_cast<double>(*L0) - Lc);
            return (t / p) * (1.0 + std::log2(ratio));
        }
    }
    throw std::invalid_argument("unknown strategy");
}

CostReport mc_sequential(const StrategyConfig& config) {
    StrategyConfig cfg = config;
    cfg.strategy = Strategy::SEQUENTIAL;
    cfg.validate();

    auto body = [&cfg](OpsAccumulator& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream rng = RngStream::substream(cfg.seed, i);
            std::int64_t len = 1;
            std::uint64_t ops = 0;
            while (len < cfg.L) {
                ++ops;
                if (rng.uniform() < cfg.p) {
                    ++len;
                } else if (len > 1) {
                    --len;
                }
            }
            ++acc.trials;
            acc.sum += ops;
            acc.sum_sq += ops * ops;
        }
    };
    const OpsAccumulator acc =
        parallel_trials(cfg.trials, cfg.threads, OpsAccumulator{}, body, fold_ops);

    const auto [mean, ci] = mean_ci(acc);
    CostReport report;
    report.mean_ops = mean;
    report.mean_time = mean * cfg.t;
    report.ci95_ops = ci;
    report.ci95_time = ci * cfg.t;
    report.trials = acc.trials;
    report.analytic_ops = analytic_ops(Strategy::SEQUENTIAL, cfg.p, cfg.L);
    report.analytic_time = analytic_time(Strategy::SEQUENTIAL, cfg.p, cfg.t, cfg.L);
    return report;
}

CostReport mc_divide_conquer(const StrategyConfig& config) {
    StrategyConfig cfg = config;
    cfg.strategy = Strategy::DIVIDE_CONQUER;
    cfg.validate();
    const int k = log2_exact(cfg.L - 1);

    auto body = [&cfg, k](OpsAccumulator& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream rng = RngStream::substream(cfg.seed, i);
            const std::uint64_t ops = build_level(k, cfg.p, rng);
            ++acc.trials;
            acc.sum += ops;
            acc.sum_sq += ops * ops;
        }
    };
    const OpsAccumulator acc =
        parallel_trials(cfg.trials, cfg.threads, OpsAccumulator{}, body, fold_ops);

    const auto [mean, ci] = mean_ci(acc);
    CostReport report;
    report.mean_ops = mean;
    report.mean_time = kNaN;  // no wall-time model under unbounded parallelism
    report.ci95_ops = ci;
    report.ci95_time = kNaN;
    report.trials = acc.trials;
    report.analytic_ops = analytic_ops(Strategy::DIVIDE_CONQUER, cfg.p, cfg.L);
    report.analytic_time = analytic_time(Strategy::DIVIDE_CONQUER, cfg.p, cfg.t, cfg.L);
    return report;
}

std::vector<StrategyRow> compare_strategies(double p, double t, std::span<const std::int64_t> Ls,
                                            std::span<const LiteratureBaseline> baselines,
                                            std::optional<std::int64_t> L0) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");

    std::optional<std::int64_t> start = L0;
    if (!start) {
        // smallest integer chain length strictly above L_c, but at least 2
        std::int64_t candidate = static_cast<std::int64_t>(std::floor(critical_length(p))) + 1;
        start = std::max<std::int64_t>(2, candidate);
    }

    std::vector<StrategyRow> rows;
    rows.reserve(Ls.size());
    for (std::int64_t L : Ls) {
        StrategyRow row;
        row.L = L;
        auto cell = [&row](double& slot, auto&& compute) {
            try {
                slot = compute();
            } catch (const std::invalid_argument& e) {
                slot = kNaN;
                if (row.note.find(e.what()) == std::string::npos) {
                    if (!row.note.empty()) row.note += "; ";
                    row.note += e.what();
                }
            }
        };
        cell(row.n_seq, [&] { return analytic_ops(Strategy::SEQUENTIAL, p, L); });
        cell(row.n_dc, [&] { return analytic_ops(Strategy::DIVIDE_CONQUER, p, L); });
        cell(row.n_initial, [&] { return analytic_ops(Strategy::INITIAL, p, L); });
        cell(row.t_seq, [&] { return analytic_time(Strategy::SEQUENTIAL, p, t, L); });
        cell(row.t_dc, [&] { return analytic_time(Strategy::DIVIDE_CONQUER, p, t, L); });
        cell(row.t_initial, [&] { return analytic_time(Strategy::INITIAL, p, t, L, start); });
        row.baselines.reserve(baselines.size());
        for (const auto& b : baselines) row.baselines.push_back(b.eval(L));
        rows.push_back(std::move(row));
    }
    return rows;
}

GrowthEventProbs heralded_join_model(const std::array<double, kNumLabels>& label_probs) {
    double total = 0.0;
    for (double q : label_probs) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw std::invalid_argument("label probabilities must lie in [0, 1]");
        }
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("label probabilities must sum to 1, got " + std::to_string(total));
    }
    GrowthEventProbs events;
    events.two_bonds = label_probs[label_index(OutcomeLabel::GHZ)];
    events.one_bond = label_probs[label_index(OutcomeLabel::BELL)];
    events.fail = label_probs[label_index(OutcomeLabel::PRODUCT)];
    return events;
}

}  // namespace qubus
