#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qubus/gates.hpp"

namespace qubus {

enum class Strategy { SEQUENTIAL, DIVIDE_CONQUER, INITIAL };

const char* to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(std::string_view name);

// Parameters of one chain-growth experiment. p is the per-join success
// probability, t the time of one bus interaction + measurement, L the target
// chain length, L0 the starting length (INITIAL strategy only).
struct StrategyConfig {
    Strategy strategy = Strategy::SEQUENTIAL;
    double p = 0.75;
    double t = 1.0;
    std::int64_t L = 2;
    std::optional<std::int64_t> L0;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    int threads = 0;  // <= 0: hardware concurrency

    // Throws std::invalid_argument naming every violated constraint.
    void validate() const;
};

// Monte Carlo cost estimate with the matching closed-form values alongside.
// Times are in units of t. Fields may be NaN where a model defines no value
// (divide-and-conquer wall time is analytic-only).
struct CostReport {
    double mean_ops = 0.0;
    double mean_time = 0.0;
    double ci95_ops = 0.0;
    double ci95_time = 0.0;
    std::uint64_t trials = 0;
    double analytic_ops = 0.0;
    double analytic_time = 0.0;
};

// Operation-count scaling quoted from prior work for comparison tables;
// evaluated as slope * L + intercept, never re-derived.
struct LiteratureBaseline {
    const char* name;
    double slope;
    double intercept;

    double eval(std::int64_t L) const { return slope * static_cast<double>(L) + intercept; }
};

std::span<const LiteratureBaseline> literature_baselines();

// L_c = 1 + 2(1-p)/p, the chain length above which a failed join (costing
// two end qubits) still leaves positive expected growth.
double critical_length(double p);

// Expected entangling-operation counts:
//   SEQUENTIAL      (L-1)/(2p-1)                          requires p > 1/2
//   DIVIDE_CONQUER  ((2/p)^(log2(L-1)) - 1)/(2-p)         requires L-1 = 2^k
//   INITIAL         (2/p)(L-1-2(1-p)/p)/(1-2(1-p)/p)-1/p  requires p > 2/3
// L0 is accepted for signature uniformity; no ops formula uses it.
double analytic_ops(Strategy strategy, double p, std::int64_t L,
                    std::optional<std::int64_t> L0 = std::nullopt);

// Expected completion times, in the same units as t:
//   SEQUENTIAL      t(L-1)/p
//   DIVIDE_CONQUER  t(1 + log2(L-1))        (unbounded parallel factories)
//   INITIAL         (t/p)(1 + log2((L-L_c)/(L0-L_c)))  requires L0 > L_c
double analytic_time(Strategy strategy, double p, double t, std::int64_t L,
                     std::optional<std::int64_t> L0 = std::nullopt);

// Biased walk: each operation grows the chain by one with probability p,
// otherwise shrinks it by one (floored at a single qubit). Counts operations
// until length L is reached. Time is ops * t.
CostReport mc_sequential(const StrategyConfig& config);

// Restart process: a level-k chain needs two level-(k-1) chains plus one
// join; a failed join discards both halves. Level-0 chains (length 2) are
// free inputs. Wall time is not simulated (the analytic t(1+k) assumes
// unbounded parallelism); meanTime is NaN.
CostReport mc_divide_conquer(const StrategyConfig& config);

// One row of the strategy-comparison table. Cells whose strategy constraint
// fails at this L are NaN, with the reason appended to `note`.
struct StrategyRow {
    std::int64_t L = 0;
    double n_seq, n_dc, n_initial;
    double t_seq, t_dc, t_initial;
    std::vector<double> baselines;  // aligned with the baselines argument
    std::string note;
};

// Evaluates every analytic formula and baseline across the given lengths.
// L0 defaults to the smallest integer starting length above L_c.
std::vector<StrategyRow> compare_strategies(double p, double t, std::span<const std::int64_t> Ls,
                                            std::span<const LiteratureBaseline> baselines,
                                            std::optional<std::int64_t> L0 = std::nullopt);

// Growth events fed by the 3-qubit gate's heralded outcomes: BELL joins the
// chains and leaves one fresh dangling bond, GHZ leaves two, PRODUCT is a
// failed join.
struct GrowthEventProbs {
    double one_bond = 0.0;
    double two_bonds = 0.0;
    double fail = 0.0;

    double success() const { return one_bond + two_bonds; }
};

// label_probs indexed by OutcomeLabel; must sum to 1.
GrowthEventProbs heralded_join_model(const std::array<double, kNumLabels>& label_probs);

}  // namespace qubus
