#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" + std::string(BANDGRAPH_CLI) + "' " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(BANDGRAPH_TEST_DATA) + "/" + name; }

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze a builtin") {
    const auto r = run("analyze --builtin fcc --kind laplacian --grid 12");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"flat_bands\""));
    CHECK(contains(r.out, "\"multiplicity\": 2"));
}

TEST_CASE("analyze with potentials") {
    const auto r = run("analyze --builtin hexagonal --q 1,-1 --grid 24");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"lower\": 2,"));
    CHECK(contains(r.out, "\"upper\": 4,"));
}

TEST_CASE("grid size from the environment") {
    const auto r = run("analyze --builtin 'cubic(2)'", "BANDGRAPH_GRID=10");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"per_axis\": 10"));
    CHECK(run("analyze --builtin 'cubic(2)'", "BANDGRAPH_GRID=zero").code == 1);
}

TEST_CASE("malformed files fail with the field name") {
    const auto r = run("analyze '" + data("unknown_field.json") + "'");
    CHECK(r.code == 1);
    CHECK(contains(r.out, "$.vertices[0].color"));
    const auto t = run("analyze '" + data("truncated.json") + "'");
    CHECK(t.code == 1);
    CHECK(contains(t.out, "line"));
}

TEST_CASE("usage errors") {
    CHECK(run("").code == 1);
    CHECK(run("analyze").code == 1);
    CHECK(run("analyze --builtin 'cubic(2)' --grid 1").code == 1);
    CHECK(run("analyze --builtin 'cubic(2)' --kind spectral").code == 1);
    CHECK(run("analyze --builtin 'cubic(0)'").code == 1);
}

TEST_CASE("compare") {
    const auto r = run("compare '" + data("star_q03.json") + "' '" + data("star_q0.json") + "' --grid 24");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"c\": 0.6"));
    const auto m = run("compare builtin:hexagonal builtin:fcc");
    CHECK(m.code == 1);
    CHECK(contains(m.out, "vertex counts differ"));
}

TEST_CASE("dispersion") {
    const auto r = run("dispersion --builtin hexagonal --path '0,0;2pi/3,-2pi/3' --samples 2");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("theta1\ttheta2\tlambda1\tlambda2\n", 0) == 0);
    CHECK(contains(r.out, "\t3\t3\n"));
    const auto g = run("dispersion --builtin 'cubic(1)' --grid 4");
    CHECK(g.code == 0);
    CHECK(contains(g.out, "3.1415926535897931\t4\n"));
}

TEST_CASE("builtins") {
    const auto a = run("builtins");
    CHECK(a.code == 0);
    CHECK(contains(a.out, "fcc"));
    CHECK(contains(a.out, "star(d, nu)"));
    CHECK(run("builtins").out == a.out);
}

}
