#include "sympsturm/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

namespace {

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sympsturm::InputError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw sympsturm::InputError("cannot write output file '" + path + "'");
        out << bytes;
        out.flush();
        if (!out) throw sympsturm::InputError("cannot write output file '" + path + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw sympsturm::InputError("cannot move output into place: " + ec.message());
    }
}

const std::map<std::string, std::string> kDescriptions{
    {"clm", "CLM index of a constant reference against a moving Lagrangian"},
    {"rs", "Robbin-Salamon index of the same pair"},
    {"cz", "Conley-Zehnder index of a symplectic path"},
    {"triple", "Triple index of three Lagrangians"},
    {"hormander", "Hormander index of four Lagrangians"},
    {"flow", "Sampled fundamental solution of a linear Hamiltonian system"},
    {"morse", "Morse index of a Morse-Sturm system and the index theorem check"},
    {"spectral-flow", "Spectral flow of the scaled operator path and its Maslov index"},
    {"verify", "Randomized checks of one theorem"},
    {"kepler", "Kepler orbit and first conjugate point along the Jacobi metric"},
    {"focal", "Conjugate and focal point comparison along a Jacobi system"},
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("sympsturm");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SYMPSTURM_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Symplectic intersection indices and Sturm-type theorem checks"};
    app.require_subcommand(1);

    sympsturm::RunFlags flags;
    std::string input, output, format = "json";
    app.add_option("--input,-i", input, "Problem file (JSON); '-' reads stdin");
    app.add_option("--output,-o", output, "Output file; stdout when omitted");
    app.add_option("--format,-f", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol", flags.tol, "Relative rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", flags.seed, "Random seed");
    app.add_option("--jobs", flags.jobs, "Parallel trials in verify")->check(CLI::Range(1, 256));
    app.add_option("--grid", flags.grid, "Crossing detection grid")->check(CLI::Range(4, 1 << 20));

    std::string chosen;
    for (const auto& name : sympsturm::commands()) {
        auto* sub = app.add_subcommand(name, kDescriptions.at(name));
        sub->fallthrough();
        sub->callback([&chosen, name]() { chosen = name; });
        if (name == "verify") {
            sub->add_option("--theorem", flags.theorem, "Theorem id")
                ->required()
                ->check(CLI::IsMember(sympsturm::theorem_ids()));
            sub->add_option("--trials", flags.trials, "Number of instances")->check(CLI::Range(0, 1000000));
            sub->add_option("--dim", flags.dim, "Half dimension n; 0 lets the generator choose")->check(CLI::Range(0, 4));
        }
        if (name == "kepler") {
            sub->set_help_flag("--help", "Print this help message and exit");
            sub->add_option("--h", flags.h, "Energy, negative");
            sub->add_option("--e", flags.e, "Eccentricity in [0, 1)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        std::string text;
        if (sympsturm::needs_problem(chosen) || !input.empty()) text = read_input(input);
        spdlog::debug("command {} with {} bytes of input", chosen, text.size());
        auto problem = sympsturm::parse_problem(text, chosen);
        auto result = sympsturm::run_command(chosen, problem, flags);
        const std::string bytes = sympsturm::emit(result, format);
        if (output.empty())
            std::cout << bytes << std::flush;
        else
            write_atomic(output, bytes);
        if (result.exit_code != 0) spdlog::warn("{}: verdict failure", chosen);
        return result.exit_code;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 2;
    }
}
