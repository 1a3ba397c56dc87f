// End-to-end checks of the command-line tool: output values, exit codes,
// byte-identical reruns, and the cache file lifecycle.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifndef COPERM_CLI_PATH
#error "COPERM_CLI_PATH must point at the coperm binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(COPERM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_CASE("count command prints exact values") {
    setenv("COPERM_CACHE", "cli_test.cache", 1);
    std::remove("cli_test.cache");

    CHECK(run("count --variant C --n 3").output == "3\n");
    CHECK(run("count --variant C0 --n 1").output == "1\n");
    CHECK(run("count --variant C --n 8 --method brute").output ==
          run("count --variant C --n 8 --method permanent").output);
    CHECK(run("count --variant Ck --n 4 --kparam 2").output == "4\n");

    // Values were appended to the cache and reload identically.
    CHECK(run("count --variant C --n 3").output == "3\n");
    std::remove("cli_test.cache");
}

TEST_CASE("count command rejects out-of-range sizes") {
    CHECK(run("count --variant C --n 31").exit_code == 1);
    CHECK(run("count --variant C --n 10 --method brute").exit_code == 1);
}

TEST_CASE("constant command output") {
    const RunResult res = run("constant --cutoff 1000000");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("0.37729") != std::string::npos);
    CHECK(res.output == run("constant --cutoff 1000000").output);  // bit-identical
    CHECK(run("constant --cutoff 2").exit_code == 1);
}

TEST_CASE("sample command is deterministic and validated") {
    const std::string flags = "sample --n 400 --basis-max 7 --k 2 --seed 5";
    const RunResult a = run(flags);
    const RunResult b = run(flags);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.rfind("j,f_j\n", 0) == 0);
    CHECK(a.output.find("\"attempts\"") != std::string::npos);

    const RunResult lifted = run("sample --n 200 --basis-max 7 --k 2 --seed 5 --lift");
    CHECK(lifted.exit_code == 0);
    CHECK(lifted.output.rfind("j,sigma_j\n", 0) == 0);

    // A configuration whose seed exhausts one retry: generator failure is
    // exit code 2.
    CHECK(run("sample --n 15 --basis-max 3 --k 2 --seed 1 --max-retries 1").exit_code == 2);
}

TEST_CASE("buckets command emits the line format") {
    const RunResult res = run("buckets --n 10 --basis-max 3 --k 3");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("{}: 1 5 7\n") != std::string::npos);
    CHECK(res.output.find("{2}: 2 4 8 10\n") != std::string::npos);
    CHECK(res.output.find("{2,3}: 6\n") != std::string::npos);

    const RunResult odd = run("buckets --n 5 --basis-max 3 --k 2 --odd --exclude-two");
    CHECK(odd.output.find("{}: 1 5 7\n") != std::string::npos);
    CHECK(odd.output.find("{3}: 3 9\n") != std::string::npos);
}

TEST_CASE("template command emits the weight table") {
    const RunResult res = run("template --n 300 --basis-max 5 --k 2 --seed 2");
    CHECK(res.exit_code == 0);
    CHECK(res.output.rfind("s1,s2,beta\n", 0) == 0);
    CHECK(res.output.find("*1,,") != std::string::npos);
    CHECK(res.output == run("template --n 300 --basis-max 5 --k 2 --seed 2").output);
}

TEST_CASE("table command emits CSV and JSON") {
    const RunResult csv = run("table --n-max 4");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.rfind("n,count,rate\n", 0) == 0);
    CHECK(csv.output.find("\n4,4,") != std::string::npos);
    CHECK(csv.output.find("# limit_constant_mid,0.377295") != std::string::npos);

    const RunResult js = run("table --n-max 3 --format json");
    CHECK(js.exit_code == 0);
    CHECK(js.output.find("\"constant_mid\"") != std::string::npos);
}

TEST_CASE("verify command filters and detects cache corruption") {
    const RunResult only = run("verify --only constant-bracket");
    CHECK(only.exit_code == 0);
    CHECK(only.output.find("PASS constant-bracket") != std::string::npos);
    CHECK(only.output.find("counts-oracle") == std::string::npos);

    CHECK(run("verify --only no-such-criterion").exit_code == 1);

    // Corrupted cache makes the consistency check fail loudly.
    setenv("COPERM_CACHE", "cli_verify.cache", 1);
    std::remove("cli_verify.cache");
    const RunResult fresh = run("verify --only cache-consistency");
    CHECK(fresh.exit_code == 0);
    CHECK(fresh.output.find("PASS cache-consistency") != std::string::npos);
    {
        FILE* f = fopen("cli_verify.cache", "w");
        REQUIRE(f != nullptr);
        fputs("coperm-cache 1\nC 3 0 4 deadbeef\n", f);
        fclose(f);
    }
    const RunResult bad = run("verify --only cache-consistency");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("FAIL cache-consistency") != std::string::npos);
    std::remove("cli_verify.cache");
    unsetenv("COPERM_CACHE");
}
