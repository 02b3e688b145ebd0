#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* b = std::getenv("REFLEXA_BIN");
    REQUIRE(b != nullptr);
    return b;
}

std::string golden_dir() {
    const char* g = std::getenv("REFLEXA_GOLDEN");
    REQUIRE(g != nullptr);
    return g;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = bin() + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("report over Q matches the golden text byte for byte") {
    auto r = run("report --field Q");
    CHECK(r.exit_code == 0);
    CHECK(r.out == read_file(golden_dir() + "/report_q.txt"));
    // byte-stable across runs
    CHECK(run("report --field Q").out == r.out);
}

TEST_CASE("single-check report in json matches the golden file") {
    auto r = run("report --suite module-double-dual --field GF:7 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out == read_file(golden_dir() + "/suite_module_gf7.json"));
}

TEST_CASE("check module exits 0 on a valid module") {
    std::string path = "/tmp/reflexa_test_module.json";
    write_file(path, "{\"field\":\"Q\",\"rank\":3}\n");
    auto r = run("check module " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[pass] module-double-dual") != std::string::npos);
    CHECK(r.out.find("M** = M") != std::string::npos);
}

TEST_CASE("bialg group emits the golden Z2 bialgebra") {
    auto r = run("bialg group Z2 --field Q");
    CHECK(r.exit_code == 0);
    CHECK(r.out == read_file(golden_dir() + "/group_z2.json"));
}

TEST_CASE("bialg dual round-trip: dual twice is isomorphic to the original") {
    std::string a = "/tmp/reflexa_test_z2.json";
    std::string b = "/tmp/reflexa_test_z2_dual.json";
    std::string c = "/tmp/reflexa_test_z2_dual2.json";
    write_file(a, run("bialg group Z2 --field Q").out);
    auto d1 = run("bialg dual " + a + " --field Q");
    CHECK(d1.exit_code == 0);
    write_file(b, d1.out);
    auto d2 = run("bialg dual " + b + " --field Q");
    CHECK(d2.exit_code == 0);
    write_file(c, d2.out);
    auto iso = run("bialg iso " + c + " " + a + " --field Q");
    CHECK(iso.exit_code == 0);
    CHECK(iso.out == "isomorphic\n");
}

TEST_CASE("tower decompose of the power-series tower gives 1-dim pieces") {
    auto r = run("tower decompose power-series:4 --field Q");
    CHECK(r.exit_code == 0);
    CHECK(r.out == read_file(golden_dir() + "/ps4_decompose.json"));
}

TEST_CASE("hom reports the product dimension") {
    auto r = run("hom 2 3 --field Q");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("dimension 6, expected 6") != std::string::npos);
}

TEST_CASE("findual fit recovers Fibonacci and eval extends it") {
    std::string path = "/tmp/reflexa_test_fib.json";
    auto fit = run("findual fit --prefix 0,1,1,2,3,5,8 --max-degree 4 --field Q");
    CHECK(fit.exit_code == 0);
    write_file(path, fit.out);
    auto ev = run("findual eval " + path + " --at 10 --field Q");
    CHECK(ev.exit_code == 0);
    CHECK(ev.out == "55\n");
}

TEST_CASE("malformed input exits 2") {
    std::string path = "/tmp/reflexa_test_bad.json";
    write_file(path, "{not json");
    CHECK(run("check module " + path).exit_code == 2);
    CHECK(run("check module /nonexistent.json").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("report --suite no-such-check").exit_code == 2);
}
