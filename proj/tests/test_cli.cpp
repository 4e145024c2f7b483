#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympsturm/cli.hpp"

#include <fstream>
#include <sstream>

using namespace sympsturm;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(SYMPSTURM_PROBLEMS) + "/" + name);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CommandResult run_text(const std::string& command, const std::string& text, RunFlags flags = {}) {
    return run_command(command, parse_problem(text, command), flags);
}

std::string error_of(const std::string& text, const std::string& command) {
    try {
        parse_problem(text, command);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("command list") {
    auto c = commands();
    for (const char* name : {"clm", "rs", "cz", "triple", "hormander", "flow", "morse", "spectral-flow", "verify", "kepler",
                             "focal"})
        CHECK(std::find(c.begin(), c.end(), name) != c.end());
    CHECK_FALSE(needs_problem("verify"));
    CHECK_FALSE(needs_problem("kepler"));
    CHECK(needs_problem("clm"));
}

TEST_CASE("sample problems") {
    auto clm = run_text("clm", slurp("rotation_clm.json"));
    CHECK(clm.exit_code == 0);
    CHECK(clm.json["value"] == 2);
    CHECK(run_text("cz", slurp("harmonic_cz.json")).json["value"] == 4);
    auto morse = run_text("morse", slurp("sturm_dirichlet.json"));
    CHECK(morse.json["left"] == 3);
    CHECK(morse.json["verdict"] == true);
    CHECK(run_text("spectral-flow", slurp("spectral_flow.json")).exit_code == 0);
    CHECK(run_text("focal", slurp("focal_sphere.json")).exit_code == 0);
    CHECK(run_text("triple", slurp("triple.json")).exit_code == 0);
    CHECK(run_text("hormander", slurp("hormander.json")).json["agree"] == true);
    auto flow = run_text("flow", slurp("flow.json"));
    CHECK(flow.exit_code == 0);
    CHECK(flow.json["max_symplectic_defect"].get<double>() < 1e-10);
}

TEST_CASE("normal form round trip") {
    for (auto [file, command] : std::vector<std::pair<std::string, std::string>>{
             {"rotation_clm.json", "clm"}, {"flow.json", "flow"}, {"sturm_dirichlet.json", "morse"},
             {"focal_sphere.json", "focal"}, {"spectral_flow.json", "spectral-flow"}}) {
        Json once = parse_problem(slurp(file), command);
        CHECK(parse_problem(once.dump(), command) == once);
        CHECK(once["schema"] == kProblemSchema);
    }
    // a bare matrix and an explicit constant coefficient normalize alike
    const std::string bare = R"({"schema": 1, "hamiltonian": {"n": 1, "T": 1.0, "B": [[1, 0], [0, 2]]}})";
    const std::string wrapped = R"({"schema": 1, "hamiltonian": {"n": 1, "T": 1.0, "B": {"constant": [[1, 0], [0, 2]]}}})";
    CHECK(parse_problem(bare, "flow") == parse_problem(wrapped, "flow"));
}

TEST_CASE("validation errors name the offending field") {
    std::string msg = error_of(slurp("bad_asymmetric.json"), "cz");
    CHECK(msg.find("flow.hamiltonian.B") != std::string::npos);
    CHECK(msg.find("symmetric") != std::string::npos);
    msg = error_of(R"({"schema": 1, "alpha": [[1], [0]], "beta": [[0], [1]], "gamma": [[1], [1]], "extra": 0})", "triple");
    CHECK(msg.find("extra") != std::string::npos);
    msg = error_of("{\"schema\": 1,\n  \"alpha\": [[1], [0]]\n  \"beta\": 2}", "triple");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(!error_of(R"({"schema": 2, "alpha": [[1], [0]], "beta": [[0], [1]], "gamma": [[1], [1]]})", "triple").empty());
    CHECK(!error_of(R"({"schema": 1, "command": "cz", "alpha": [[1], [0]], "beta": [[0], [1]], "gamma": [[1], [1]]})",
                    "triple")
               .empty());
    CHECK(!error_of(R"({"schema": 1, "alpha": [[1], [0]], "beta": [[0], [1]], "gamma": [[1], [1e999]]})", "triple")
               .empty());
    CHECK(!error_of(R"({"schema": 1, "alpha": [[1, 0], [0, 1]], "beta": [[0], [1]], "gamma": [[1], [1]]})", "triple")
               .empty());
}

TEST_CASE("deterministic emission") {
    RunFlags f;
    f.theorem = "alternation";
    f.trials = 4;
    f.seed = 11;
    auto a = run_command("verify", parse_problem("", "verify"), f);
    f.jobs = 3;
    auto b = run_command("verify", parse_problem("", "verify"), f);
    CHECK(emit(a, "json") == emit(b, "json"));
    CHECK(emit(a, "csv") == emit(b, "csv"));
    CHECK(emit(a, "csv").rfind("theorem,trials,passes,skips,errors\n", 0) == 0);
    CHECK(a.exit_code == 0);

    auto clm = run_text("clm", slurp("rotation_clm.json"));
    const std::string csv = emit(clm, "csv");
    CHECK(csv.rfind("kind,t0,mult,pos,zero,neg,contribution\n", 0) == 0);
    CHECK(csv.find("total,,,,,,2") != std::string::npos);
    CHECK_THROWS_AS(emit(clm, "xml"), InputError);
}

TEST_CASE("kepler command") {
    RunFlags f;
    f.h = -0.5;
    f.e = 0.0;
    auto r = run_command("kepler", parse_problem("", "kepler"), f);
    CHECK(r.exit_code == 0);
    CHECK(r.json["pass"] == true);
    CHECK(std::abs(r.json["s_star"].get<double>() - 3.141592653589793) < 1e-9);
    CHECK(emit(r, "csv").rfind("t,r,s,K,J\n", 0) == 0);
    f.h = 0.5;
    CHECK_THROWS_AS(run_command("kepler", parse_problem("", "kepler"), f), InputError);
}
