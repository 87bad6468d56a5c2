#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qubus/cli.hpp"

namespace {

// Everything is accumulated in memory first, so a failing command never
// leaves a partial CSV behind.
int write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return qubus::kExitOk;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        std::cerr << "configuration error: cannot open output file '" << path << "'\n";
        return qubus::kExitConfig;
    }
    file << text;
    file.flush();
    if (!file) {
        std::cerr << "error: failed writing output file '" << path << "'\n";
        return qubus::kExitNumeric;
    }
    return qubus::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent-bus entangling gates and cluster-chain growth"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read option defaults from an INI/TOML file (flags win)");

    qubus::RunConfig cfg;
    std::string out_path;
    std::string gate_name = "2q";
    std::string strategy_name = "sequential";

    auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();  // lets --config (a root option) follow the subcommand
        sub->add_option("--seed", cfg.seed, "master RNG seed")->envname("QUBUS_SEED");
        sub->add_option("--out", out_path, "output CSV path (default: stdout)");
        sub->add_option("--threads", cfg.threads, "worker threads (<= 0: all cores)");
        sub->add_option("--precision", cfg.precision, "CSV significant digits (default 12)");
    };

    CLI::App* gate = app.add_subcommand("gate", "heralded outcome statistics of one gate");
    gate->add_option("--gate", gate_name, "2q (parity) or 3q (GHZ)")
        ->check(CLI::IsMember({"2q", "3q"}));
    gate->add_option("--alpha", cfg.alpha, "probe amplitude (default 100*pi)");
    gate->add_option("--theta", cfg.theta, "conditional rotation angle in rad (default 0.01)");
    gate->add_option("--trials", cfg.trials, "shots; 0 emits analytic columns only");
    add_common(gate);

    CLI::App* sweep = app.add_subcommand("sweep", "error metrics over an (alpha, theta) grid");
    sweep->add_option("--alpha", cfg.sweep_alphas, "alpha grid values");
    sweep->add_option("--theta", cfg.sweep_thetas, "theta grid values");
    add_common(sweep);

    CLI::App* growth = app.add_subcommand("growth", "analytic chain-growth strategy comparison");
    growth->add_option("--p", cfg.p, "join success probability (default 3/4)");
    growth->add_option("--t", cfg.t, "time per entangling operation (default 1)");
    growth->add_option("--L", cfg.lengths, "target chain lengths");
    growth->add_option("--L0", cfg.L0, "starting length for the INITIAL strategy time");
    add_common(growth);

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo growth cost vs analytic scaling");
    mc->add_option("--strategy", strategy_name, "sequential or dc (INITIAL is analytic-only)");
    mc->add_option("--p", cfg.p, "join success probability (default 3/4)");
    mc->add_option("--t", cfg.t, "time per entangling operation (default 1)");
    mc->add_option("--L", cfg.lengths, "target chain lengths");
    mc->add_option("--trials", cfg.trials, "Monte Carlo trials per length");
    add_common(mc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? qubus::kExitOk : qubus::kExitConfig;
    }

    std::ostringstream out;
    int code;
    if (gate->parsed()) {
        cfg.gate_kind = gate_name == "3q" ? qubus::GateKind::Ghz3Q : qubus::GateKind::Parity2Q;
        code = qubus::cmd_gate(cfg, out, std::cerr);
    } else if (sweep->parsed()) {
        code = qubus::cmd_sweep(cfg, out, std::cerr);
    } else if (growth->parsed()) {
        code = qubus::cmd_growth(cfg, out, std::cerr);
    } else {
        const auto strategy = qubus::strategy_from_string(strategy_name);
        if (!strategy) {
            std::cerr << "configuration error: unknown strategy '" << strategy_name << "'\n";
            return qubus::kExitConfig;
        }
        cfg.strategy = *strategy;
        code = qubus::cmd_mc(cfg, out, std::cerr);
    }
    if (code != qubus::kExitOk) return code;
    return write_output(out_path, out.str());
}
