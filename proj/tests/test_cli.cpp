#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

// QUBUS_BIN is injected by CMake and points at the built `qubus` executable.
// Every test here drives the real binary through the shell, captures both
// streams, and inspects the CSV exactly as a batch user would.

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path scratch_file(const char* tag) {
    static int counter = 0;
    return std::filesystem::temp_directory_path() /
           ("qubus_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" +
            tag);
}

// env_prefix is prepended verbatim, e.g. "QUBUS_SEED=7 ".
RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const auto out_path = scratch_file("out");
    const auto err_path = scratch_file("err");
    const std::string cmd = env_prefix + QUBUS_BIN + " " + args + " > " + out_path.string() +
                            " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return res;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) rows.push_back(split_row(line));
    return rows;
}

// Finds the row whose first cell equals `key`; requires it to exist.
const std::vector<std::string>& row_by_key(const std::vector<std::vector<std::string>>& rows,
                                           const std::string& key) {
    for (const auto& row : rows) {
        if (!row.empty() && row[0] == key) return row;
    }
    REQUIRE_MESSAGE(false, "no row keyed '" << key << "'");
    return rows.front();  // unreachable
}

double cell_num(const std::string& cell) { return std::stod(cell); }

}  // namespace

TEST_CASE("gate command: schema and heralded frequencies") {
    const RunResult res = run("gate --gate 3q --trials 20000 --seed 42");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 4);  // header + GHZ + BELL + PRODUCT
    const std::vector<std::string> header = {"label", "empirical_freq", "analytic_prob",
                                             "mean_fidelity", "exact_misclassification"};
    CHECK(rows[0] == header);

    const std::map<std::string, double> expected = {
        {"GHZ", 0.25}, {"BELL", 0.5}, {"PRODUCT", 0.25}};
    for (const auto& [label, prob] : expected) {
        const auto& row = row_by_key(rows, label);
        REQUIRE(row.size() == 5);
        CHECK(cell_num(row[2]) == doctest::Approx(prob).epsilon(1e-12));
        CHECK(std::abs(cell_num(row[1]) - prob) < 0.02);
        CHECK(cell_num(row[3]) > 0.99);
        CHECK(cell_num(row[4]) < 1e-6);  // alpha*theta = pi separates the peaks well
    }
}

TEST_CASE("gate command with zero trials emits analytic cells only") {
    const RunResult res = run("gate --gate 2q --trials 0");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 3);  // header + BELL + PRODUCT (no GHZ peak in a 2q gate)
    const auto& bell = row_by_key(rows, "BELL");
    const auto& product = row_by_key(rows, "PRODUCT");
    for (const auto* row : {&bell, &product}) {
        CHECK((*row)[1].empty());  // empirical_freq blank
        CHECK((*row)[3].empty());  // mean_fidelity blank
        CHECK(cell_num((*row)[2]) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(!(*row)[4].empty());
    }
}

TEST_CASE("output is byte-identical across reruns, worker counts, and seed sources") {
    const std::string base = "gate --gate 3q --trials 20000 --seed 7";
    const RunResult first = run(base);
    REQUIRE(first.code == 0);

    CHECK(run(base).out == first.out);
    CHECK(run(base + " --threads 1").out == first.out);
    CHECK(run(base + " --threads 8").out == first.out);

    // the environment variable is a fallback for --seed, and the flag wins
    CHECK(run("gate --gate 3q --trials 20000", "QUBUS_SEED=7 ").out == first.out);
    CHECK(run(base, "QUBUS_SEED=999 ").out == first.out);

    // a different seed must actually change the sampled columns
    CHECK(run("gate --gate 3q --trials 20000 --seed 8").out != first.out);
}

TEST_CASE("config file supplies defaults and flags override them") {
    const auto ini_path = scratch_file("ini");
    {
        std::ofstream ini(ini_path);
        ini << "[gate]\n"
            << "gate=3q\n"
            << "trials=20000\n"
            << "seed=7\n";
    }
    const RunResult flags = run("gate --gate 3q --trials 20000 --seed 7");
    const RunResult config = run("gate --config " + ini_path.string());
    REQUIRE(config.code == 0);
    CHECK(config.out == flags.out);

    // the command line beats the file: seed 7 on the flag overrides seed in the file
    const auto ini2_path = scratch_file("ini");
    {
        std::ofstream ini(ini2_path);
        ini << "[gate]\ngate=3q\ntrials=20000\nseed=999\n";
    }
    const RunResult overridden = run("gate --config " + ini2_path.string() + " --seed 7");
    CHECK(overridden.out == flags.out);
    std::filesystem::remove(ini_path);
    std::filesystem::remove(ini2_path);
}

TEST_CASE("sweep command: schema, limit rows, and alpha monotonicity") {
    const RunResult res = run("sweep --seed 1");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 17);  // header + default 4x4 grid
    const std::vector<std::string> header = {"alpha", "theta", "p_err_paper",
                                             "exact_misclassification", "fidelity_center"};
    CHECK(rows[0] == header);

    std::map<double, double> misclass_at_theta001;  // alpha -> misclassification
    bool saw_operating_point = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 5);
        const double alpha = cell_num(rows[i][0]);
        const double theta = cell_num(rows[i][1]);
        const double perr = cell_num(rows[i][2]);
        if (theta == 0.0) CHECK(perr == doctest::Approx(0.5).epsilon(1e-12));
        if (std::abs(alpha * theta - std::numbers::pi) < 1e-9) {
            saw_operating_point = true;
            CHECK(perr < 1e-3);
            CHECK(cell_num(rows[i][4]) > 1.0 - 1e-3);
        }
        if (theta == 0.01) misclass_at_theta001[alpha] = cell_num(rows[i][3]);
    }
    CHECK(saw_operating_point);

    REQUIRE(misclass_at_theta001.size() == 4);
    double prev = 1.0;
    for (const auto& [alpha, mis] : misclass_at_theta001) {
        CHECK(mis < prev);  // strictly better discrimination as alpha grows
        prev = mis;
    }
}

TEST_CASE("growth command: table cells match the closed forms") {
    const RunResult res = run("growth --p 0.75 --t 1");
    REQUIRE(res.code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() >= 2);
    const auto& header = rows[0];
    REQUIRE(header.size() == 12);
    CHECK(header[0] == "L");
    CHECK(header[1] == "N_seq");
    CHECK(header[2] == "N_dc");
    CHECK(header[3] == "N_initial");
    CHECK(header[4] == "T_seq");
    CHECK(header[5] == "T_dc");
    CHECK(header[6] == "T_initial");
    CHECK(header[7] == "RUS(Pf=0.6)");
    CHECK(header[8] == "RUS(Pf=0.4)");
    CHECK(header[9] == "twoQubitDC");
    CHECK(header[10] == "threeQubit");
    CHECK(header[11] == "note");

    const auto& l2 = row_by_key(rows, "2");
    CHECK(cell_num(l2[2]) == 0.0);  // a single bond is a level-0 chain
    CHECK(cell_num(l2[5]) == doctest::Approx(1.0).epsilon(1e-12));

    const auto& l100 = row_by_key(rows, "100");
    CHECK(cell_num(l100[1]) == doctest::Approx(198.0).epsilon(1e-9));
    CHECK(l100[2].empty());  // 99 is not a power of two
    CHECK(cell_num(l100[3]) == doctest::Approx(800.0 - 44.0 / 3.0).epsilon(1e-9));
    CHECK(l100[11].find("power of two") != std::string::npos);

    const auto& l10 = row_by_key(rows, "10");
    CHECK(cell_num(l10[7]) == doctest::Approx(735.0).epsilon(1e-9));
    CHECK(cell_num(l10[10]) == doctest::Approx(8.0 * 10 - 44.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("mc command: exact limits, analytic columns, strategy guard") {
    const RunResult dc = run("mc --strategy dc --p 1 --L 9 --trials 100 --seed 3");
    REQUIRE(dc.code == 0);
    const auto dc_rows = parse_csv(dc.out);
    REQUIRE(dc_rows.size() == 2);
    const std::vector<std::string> header = {"L",         "strategy",  "trials",
                                             "mean_ops",  "ci95_ops",  "mean_time",
                                             "ci95_time", "analytic_ops", "analytic_time"};
    CHECK(dc_rows[0] == header);
    const auto& row = dc_rows[1];
    CHECK(row[0] == "9");
    CHECK(row[1] == "DIVIDE_CONQUER");
    CHECK(cell_num(row[3]) == 7.0);
    CHECK(cell_num(row[4]) == 0.0);
    CHECK(row[5].empty());  // no wall-time model for the restart process
    CHECK(row[6].empty());
    CHECK(cell_num(row[7]) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(cell_num(row[8]) == doctest::Approx(4.0).epsilon(1e-12));

    const RunResult seq = run("mc --strategy sequential --p 1 --L 4 --trials 50 --seed 3");
    REQUIRE(seq.code == 0);
    const auto seq_rows = parse_csv(seq.out);
    REQUIRE(seq_rows.size() == 2);
    CHECK(cell_num(seq_rows[1][3]) == 3.0);
    CHECK(cell_num(seq_rows[1][4]) == 0.0);
    CHECK(cell_num(seq_rows[1][5]) == 3.0);

    const RunResult initial = run("mc --strategy initial --L 10");
    CHECK(initial.code == 2);
    CHECK(initial.err.find("analytic-only") != std::string::npos);

    const RunResult unknown = run("mc --strategy bogus --L 10");
    CHECK(unknown.code == 2);
}

TEST_CASE("exit codes: configuration, numeric, and help paths") {
    const RunResult bad = run("gate --alpha -5 --theta nan --trials 10");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("alpha") != std::string::npos);
    CHECK(bad.err.find("theta") != std::string::npos);

    CHECK(run("gate --no-such-flag").code == 2);
    CHECK(run("").code == 2);  // a subcommand is required
    CHECK(run("--help").code == 0);
    CHECK(run("gate --trials 0 --precision 0").code == 2);

    const RunResult unopenable = run("growth --out /nonexistent-dir/out.csv");
    CHECK(unopenable.code == 2);
    CHECK(unopenable.err.find("cannot open") != std::string::npos);

    // /dev/full accepts the open but fails the flush: a numeric (I/O) failure
    if (std::filesystem::exists("/dev/full")) {
        CHECK(run("growth --out /dev/full").code == 1);
    }
}

TEST_CASE("--out writes the same bytes that stdout would carry") {
    const auto csv_path = scratch_file("csv");
    const RunResult to_stdout = run("growth --p 0.75");
    const RunResult to_file = run("growth --p 0.75 --out " + csv_path.string());
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(csv_path) == to_stdout.out);
    std::filesystem::remove(csv_path);
}

TEST_CASE("precision flag controls significant digits") {
    const RunResult coarse = run("growth --p 0.75 --L 3 --precision 3");
    REQUIRE(coarse.code == 0);
    const auto rows = parse_csv(coarse.out);
    const auto& l3 = row_by_key(rows, "3");
    CHECK(l3[3] == "9.33");  // 8*3 - 44/3 at three significant digits

    const RunResult fine = run("growth --p 0.75 --L 3 --precision 12");
    const auto fine_rows = parse_csv(fine.out);
    CHECK(row_by_key(fine_rows, "3")[3] == "9.33333333333");
}
