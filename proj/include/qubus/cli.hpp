#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qubus/growth.hpp"

namespace qubus {

// Fully resolved parameters of one batch command (flag and config-file
// merging happens in the executable, not here). Defaults are the standard
// operating point alpha * theta = pi at theta = 0.01.
struct RunConfig {
    // gate / sweep
    GateKind gate_kind = GateKind::Parity2Q;
    double alpha = 100.0 * 3.14159265358979323846;
    double theta = 0.01;
    std::uint64_t trials = 100000;
    std::vector<double> sweep_alphas;  // sweep: grid values; empty -> default grid
    std::vector<double> sweep_thetas;

    // growth / mc
    Strategy strategy = Strategy::SEQUENTIAL;
    double p = 0.75;
    double t = 1.0;
    std::vector<std::int64_t> lengths;  // empty -> per-command default
    std::optional<std::int64_t> L0;

    // common
    std::uint64_t seed = 0;
    int threads = 0;  // <= 0: hardware concurrency
    int precision = 12;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;

// Each command validates its inputs (aggregating every violation into one
// message), computes, and writes a complete CSV to `out` in a single pass.
// Returns kExitOk, or kExitConfig / kExitNumeric after writing a diagnostic
// line to `err`. Nothing is written to `out` on failure.
int cmd_gate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_growth(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mc(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qubus
