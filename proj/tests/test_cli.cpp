#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

#ifndef EXITOPT_CLI_PATH
#error "EXITOPT_CLI_PATH must be defined by the build"
#endif
#ifndef EXITOPT_BASE_CONFIG
#error "EXITOPT_BASE_CONFIG must be defined by the build"
#endif

struct RunResult {
    int exitCode;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string outPath = "cli_out_" + std::to_string(counter) + ".txt";
    const std::string errPath = "cli_err_" + std::to_string(counter) + ".txt";
    ++counter;
    const std::string cmd = std::string(EXITOPT_CLI_PATH) + " " + args + " > " +
                            outPath + " 2> " + errPath;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(outPath);
    r.err = slurp(errPath);
    std::remove(outPath.c_str());
    std::remove(errPath.c_str());
    return r;
}

struct TempJson {
    std::string path;
    explicit TempJson(const std::string& contents) {
        static int counter = 0;
        path = "cli_cfg_" + std::to_string(counter++) + ".json";
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempJson() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("threshold prints all four agents at the base config") {
    const auto r = run_cli(std::string("threshold ") + EXITOPT_BASE_CONFIG);
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("4.360497189") != std::string::npos);
    CHECK(r.out.find("consistent") != std::string::npos);
    CHECK(r.out.find("critical-only") != std::string::npos);
    CHECK(r.out.find("naive") != std::string::npos);
    CHECK(r.out.find("sophisticated") != std::string::npos);
    // plain output: no ANSI escapes
    CHECK(r.out.find('\x1b') == std::string::npos);
}

TEST_CASE("invalid config exits with code 2 and names the invariant") {
    TempJson cfg(R"({"rho": 0.01, "alpha": 0.02})");
    const auto r = run_cli("threshold " + cfg.path);
    CHECK(r.exitCode == 2);
    CHECK(r.err.find("rho > alpha") != std::string::npos);
}

TEST_CASE("degenerate wedge pushes every threshold to the consistent one") {
    TempJson cfg(R"({"deltaF": 1.0, "deltaP": 1.0, "lambdaE": 1e-6})");
    const auto r = run_cli("threshold " + cfg.path);
    CHECK(r.exitCode == 0);
    // every printed threshold equals the consistent one to 1e-3
    std::istringstream is(r.out);
    std::string line;
    while (std::getline(is, line)) {
        const auto pos = line.find("\tself ");
        REQUIRE(pos != std::string::npos);
        std::istringstream fields(line);
        std::string agent, selfWord, selfIdx, value;
        std::getline(fields, agent, '\t');
        std::getline(fields, selfWord, '\t');
        std::getline(fields, value, '\t');
        const double v = std::stod(value);
        CHECK(std::abs(v - 4.360497188604209) < 1e-3 * 4.36);
    }
}

TEST_CASE("dump-config round-trips") {
    const std::string dump1 = "cli_dump_1.json";
    const std::string dump2 = "cli_dump_2.json";
    auto r = run_cli(std::string("threshold ") + EXITOPT_BASE_CONFIG +
                     " --dump-config " + dump1);
    CHECK(r.exitCode == 0);
    r = run_cli("threshold " + dump1 + " --dump-config " + dump2);
    CHECK(r.exitCode == 0);
    CHECK(slurp(dump1) == slurp(dump2));
    CHECK(!slurp(dump1).empty());
    std::remove(dump1.c_str());
    std::remove(dump2.c_str());
}

TEST_CASE("a solver failure exits with code 3") {
    // near-unit flow wedge with a tiny expiry wedge and fast turnover: the
    // flow-self condition has no root below the consistent threshold
    TempJson cfg(R"({"deltaF": 0.99, "deltaP": 0.02, "lambdaF": 3.0,
                     "lambdaPN": 3.0, "lambdaPS": 3.0, "lambdaE": 3.0})");
    const auto r = run_cli("threshold " + cfg.path);
    CHECK(r.exitCode == 3);
    CHECK(r.err.find("no root") != std::string::npos);
}

TEST_CASE("sweep without values exits with code 2") {
    TempJson cfg(R"({"parameter": "deltaP", "values": [],
                     "agents": ["consistent"], "outputPath": "never.csv"})");
    const auto r = run_cli("sweep " + cfg.path);
    CHECK(r.exitCode == 2);
}

TEST_CASE("sweep via flags writes a deterministic CSV") {
    const std::string out1 = "cli_sweep_1.csv";
    const std::string out2 = "cli_sweep_2.csv";
    const std::string flags =
        std::string("sweep ") + EXITOPT_BASE_CONFIG +
        " --param deltaP --from 0.1 --to 0.6 --points 6 "
        "--agents critical-only,naive --out ";
    auto r = run_cli(flags + out1);
    CHECK(r.exitCode == 0);
    r = run_cli(flags + out2);
    CHECK(r.exitCode == 0);
    const std::string csv = slurp(out1);
    CHECK(csv == slurp(out2));
    CHECK(csv.rfind("param,value,agent,selfIndex,threshold,residual\n", 0) == 0);
    CHECK(csv.find("critical-only") != std::string::npos);
    CHECK(csv.find("naive") != std::string::npos);
    CHECK(csv.find("\r") == std::string::npos);  // LF endings
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("figure presets write CSV files byte-deterministically") {
    auto r = run_cli("figure fig6 --out cli_fig6.csv");
    CHECK(r.exitCode == 0);
    const std::string first = slurp("cli_fig6.csv");
    CHECK(!first.empty());
    r = run_cli("figure fig6 --out cli_fig6.csv");
    CHECK(r.exitCode == 0);
    CHECK(slurp("cli_fig6.csv") == first);
    std::remove("cli_fig6.csv");

    r = run_cli("figure fig8 --out cli_fig8.csv");
    CHECK(r.exitCode == 0);
    for (const char* suffix : {"_selves4", "_selves5", "_selves6"}) {
        const std::string path = std::string("cli_fig8") + suffix + ".csv";
        CHECK(!slurp(path).empty());
        std::remove(path.c_str());
    }

    r = run_cli("figure fig12 --out nope.csv");
    CHECK(r.exitCode == 2);
}

TEST_CASE("every figure preset runs end-to-end within its budget") {
    for (const char* name :
         {"fig5", "fig7", "fig9", "fig10", "fig11"}) {  // fig6/fig8 covered above
        const auto t0 = std::chrono::steady_clock::now();
        const std::string out = std::string("cli_") + name + ".csv";
        const auto r = run_cli(std::string("figure ") + name + " --out " + out);
        const double sec = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        CHECK(r.exitCode == 0);
        CHECK(sec < 60.0);
        // remove whatever files the preset reported
        std::istringstream is(r.out);
        std::string line;
        while (std::getline(is, line)) {
            if (line.rfind("wrote ", 0) == 0) {
                std::remove(line.substr(6).c_str());
            }
        }
    }
}

TEST_CASE("quick validate passes and is seed-deterministic") {
    const std::string args = std::string("validate ") + EXITOPT_BASE_CONFIG +
                             " --quick --paths 6000 --seed 31415";
    const auto a = run_cli(args);
    CHECK(a.exitCode == 0);
    CHECK(a.out.find("PASS") != std::string::npos);
    CHECK(a.out.find("FAIL") == std::string::npos);
    const auto b = run_cli(args);
    CHECK(b.out == a.out);
}

TEST_CASE("validate fails with code 4 under an injected threshold bias") {
    const auto r = run_cli(std::string("validate ") + EXITOPT_BASE_CONFIG +
                           " --quick --paths 4000 --seed 7 "
                           "--inject-threshold-bias 1.1");
    CHECK(r.exitCode == 4);
    CHECK(r.out.find("FAIL") != std::string::npos);
}
