// CLI contract tests: exit codes, CSV round-trip at 17 significant digits,
// and byte-identical reruns under a fixed seed. Takes the CLI binary as argv[1].
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "sumhess/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli;
std::filesystem::path g_dir;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string out(const std::string& name) { return (g_dir / name).string(); }

} // namespace

TEST_CASE("asserting subcommands succeed in certified regimes") {
    CHECK(run("identities --n 5 --samples 300 --seed 42 --out-csv " +
              out("id.csv") + " --out-json " + out("id.json")) == 0);
    CHECK(run("cone-check --n 4 --k 2 --samples 400 --out-csv " + out("cc.csv") +
              " --out-json " + out("cc.json")) == 0);
    CHECK(run("lift-check --n 5 --k 3 --m 1 --samples 500 --out-csv " +
              out("lc.csv") + " --out-json " + out("lc.json")) == 0);
    CHECK(run("quotient-check --n 4 --k 3 --samples 300 --out-csv " +
              out("qc.csv") + " --out-json " + out("qc.json")) == 0);
    CHECK(run("concavity-sweep --n 3 --k 2 --gamma 0.5 --delta 1e-3 "
              "--lambda1 1e3:1e6 --samples 400 --seed 42 --out-csv " +
              out("sw.csv") + " --out-json " + out("sw.json")) == 0);
}

TEST_CASE("violating sweep exits 1 with witnesses in the CSV") {
    CHECK(run("concavity-sweep --n 5 --k 2 --gamma 0.5 --delta 0.5 "
              "--lambda1 0.2:2.0 --samples 600 --seed 42 --out-csv " +
              out("viol.csv") + " --out-json " + out("viol.json")) == 1);
    const std::string csv = slurp(out("viol.csv"));
    CHECK(csv.find(",-") != std::string::npos);  // some negative margin present
}

TEST_CASE("configuration errors exit 2") {
    CHECK(run("identities --no-such-flag 1") == 2);
    CHECK(run("lift-check --n 4 --k 2 --m 3") == 2);  // m >= k
    CHECK(run("solve --config /nonexistent/prob.cfg") == 2);
    CHECK(run("no-such-subcommand") == 2);
}

TEST_CASE("CSV fields round-trip bit-exactly at 17 digits") {
    REQUIRE(run("concavity-sweep --n 3 --k 2 --samples 50 --seed 9 --out-csv " +
                out("rt.csv") + " --out-json " + out("rt.json")) == 0);
    std::ifstream in(out("rt.csv"));
    std::string line;
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string field;
        int col = 0;
        while (std::getline(ss, field, ',')) {
            if (col >= 1 && col <= 4) {  // real-valued report columns
                const double v = std::strtod(field.c_str(), nullptr);
                CHECK(sumhess::fmt17(v) == field);
            }
            ++col;
        }
    }
    CHECK(rows == 50);
}

TEST_CASE("fixed seed reruns are byte-identical") {
    const std::string args =
        "concavity-sweep --n 4 --k 3 --samples 250 --seed 1234 ";
    REQUIRE(run(args + "--out-csv " + out("d1.csv") + " --out-json " +
                out("d1.json")) == 0);
    REQUIRE(run(args + "--threads 1 --out-csv " + out("d2.csv") +
                " --out-json " + out("d2.json")) == 0);
    CHECK(slurp(out("d1.csv")) == slurp(out("d2.csv")));

    // solver trace determinism
    const std::string cfg = out("prob.cfg");
    {
        std::ofstream f(cfg);
        f << "[problem]\nN = 8\nk = 2\nb = 1.0\npsi = manufactured\n"
             "amplitude = 0.05\n[solver]\nseed = 7\n[output]\n"
          << "trace = " << out("t1.csv") << "\nsummary = " << out("s1.json")
          << "\nfields = " << out("f1.bin") << "\n";
    }
    REQUIRE(run("solve --config " + cfg) == 0);
    {
        std::ofstream f(cfg);
        f << "[problem]\nN = 8\nk = 2\nb = 1.0\npsi = manufactured\n"
             "amplitude = 0.05\n[solver]\nseed = 7\n[output]\n"
          << "trace = " << out("t2.csv") << "\nsummary = " << out("s2.json")
          << "\nfields = " << out("f2.bin") << "\n";
    }
    REQUIRE(run("solve --config " + cfg) == 0);
    CHECK(slurp(out("t1.csv")) == slurp(out("t2.csv")));
    CHECK(slurp(out("f1.bin")) == slurp(out("f2.bin")));
}

TEST_CASE("threshold scan and claims report are observational") {
    CHECK(run("threshold-scan --n 3 --k 2 --samples-per-cell 40 --out-csv " +
              out("th.csv") + " --out-json " + out("th.json")) == 0);
    CHECK(run("claims-report --n 4 --k 2 --samples 50 --out-csv " +
              out("cl.csv") + " --out-json " + out("cl.json")) == 0);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
        return 1;
    }
    g_cli = argv[1];
    g_dir = std::filesystem::temp_directory_path() / "sumhess_cli_tests";
    std::filesystem::create_directories(g_dir);

    doctest::Context ctx;
    const int rc = ctx.run();
    std::filesystem::remove_all(g_dir);
    return rc;
}
