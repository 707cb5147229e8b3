#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pwcanard/cli.hpp"
#include "pwcanard/io.hpp"

using namespace pwc;
namespace fs = std::filesystem;

namespace {

struct Run {
    int rc;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int rc = cli::run(args, o, e);
    return {rc, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("pwcanard_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("reals print with 17 significant digits and round trip") {
    for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 6.02214076e23}) {
        const std::string s = io::real(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(io::real(0.1) == "0.10000000000000001");
    CHECK(io::real(NAN) == "nan");
    CHECK(io::real(-INFINITY) == "-inf");
}

TEST_CASE("csv rows must be complete") {
    io::Csv c({"a", "b"});
    c.cell(1.5).cell("x");
    c.end_row();
    CHECK(c.str() == "a,b\n1.5,x\n");
    c.cell(2);
    CHECK_THROWS(c.end_row());
}

TEST_CASE("atomic write leaves no temporary behind") {
    const fs::path d = scratch("atomic");
    io::write_atomic(d / "sub" / "f.txt", "hello\n");
    CHECK(slurp(d / "sub" / "f.txt") == "hello\n");
    int n = 0;
    for (const auto& e : fs::directory_iterator(d / "sub")) n += e.is_regular_file();
    CHECK(n == 1);
}

TEST_CASE("json output turns non-finite values into null") {
    const auto j = io::to_json(Vec2{NAN, 1.0});
    CHECK(j[0].is_null());
    CHECK(j[1].get<double>() == 1.0);
}

TEST_CASE("config round trip") {
    cli::RunConfig c;
    c.command = "branch";
    c.a = 0.2;
    c.k = 2.5;
    c.sign = "minus";
    c.eps = 0.1;
    c.points = 33;
    c.criteria = {1, 3};
    c.out_dir = "somewhere";
    const cli::RunConfig back = cli::apply_json(cli::RunConfig{}, cli::to_json(c));
    CHECK(back == c);
    CHECK_THROWS(cli::apply_json(c, nlohmann::json{{"no_such_key", 1}}));
}

TEST_CASE("exit codes") {
    CHECK(run({}).rc == cli::kUsage);
    CHECK(run({"model", "--a", "0", "--k", "1", "--m", "0", "--eps", "0.9"}).rc == cli::kUsage);
    CHECK(run({"connect", "--k", "2", "--m", "0.05", "--eps", "0.04"}).rc == cli::kUsage);
    CHECK(run({"model", "--bogus"}).rc == cli::kUsage);
    const Run ok = run({"model", "--a", "0.1", "--k", "2", "--m", "-0.2", "--eps", "0.04"});
    CHECK(ok.rc == cli::kOk);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j.contains("landmarks"));
    const Run bad = run({"snk", "--x0", "-0.5", "--sign", "minus", "--eps", "0.1", "--k-min", "3.9", "--k-max", "4"});
    CHECK(bad.rc == cli::kNumerical);
    const auto e = nlohmann::json::parse(bad.err);
    CHECK(e["command"] == "snk");
}

TEST_CASE("simulate prints one row per event") {
    const Run r = run({"simulate", "--a", "0.23", "--k", "2.5", "--sign", "minus", "--eps", "0.1", "--crossings", "12"});
    REQUIRE(r.rc == cli::kOk);
    int lines = 0;
    for (char ch : r.out) lines += ch == '\n';
    CHECK(lines == 13);
}

TEST_CASE("branch output is deterministic") {
    const fs::path d1 = scratch("branch1"), d2 = scratch("branch2");
    const std::vector<std::string> base = {"branch", "--k", "2.5", "--sign", "minus", "--eps", "0.1", "--points", "30"};
    auto a1 = base, a2 = base;
    a1.insert(a1.end(), {"--out-dir", d1.string()});
    a2.insert(a2.end(), {"--out-dir", d2.string()});
    setenv("PWCANARD_THREADS", "1", 1);
    const Run r1 = run(a1);
    setenv("PWCANARD_THREADS", "4", 1);
    const Run r2 = run(a2);
    unsetenv("PWCANARD_THREADS");
    REQUIRE(r1.rc == 0);
    REQUIRE(r2.rc == 0);
    CHECK(slurp(d1 / "branch.csv") == slurp(d2 / "branch.csv"));
    CHECK(slurp(d1 / "folds.csv") == slurp(d2 / "folds.csv"));
    CHECK(slurp(d1 / "branch.csv").rfind("x0,h,a,log_multiplier,", 0) == 0);
}

TEST_CASE("config file overrides flags") {
    const fs::path d = scratch("config");
    std::ofstream(d / "c.json") << R"({"k": 2.5, "eps": 0.1, "sign": "minus"})";
    const Run r = run({"connect", "--k", "1", "--sign", "plus", "--eps", "0.05", "--config", (d / "c.json").string()});
    REQUIRE(r.rc == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["connection"]["a_tilde"].get<double>() == doctest::Approx(0.23059688316110239).epsilon(1e-12));
}
