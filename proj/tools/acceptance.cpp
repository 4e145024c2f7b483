#include "sympsturm/applications.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace sympsturm;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr double kPi = std::numbers::pi;

// Pinned tolerances and time limits.
constexpr double kRotationSeconds = 1.0;
constexpr double kIndexSeconds = 120.0;
constexpr double kSpectralSeconds = 300.0;
constexpr double kKeplerSeconds = 60.0;
constexpr double kCircularTol = 1e-6;
constexpr double kEnergyDriftTol = 1e-8;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// Every non-skipped report passes, errors count as failures.
struct Tally {
    int total = 0, passes = 0, skips = 0, failures = 0;
    std::string first_failure;

    void add(const TheoremReport& r) {
        ++total;
        if (r.skipped && r.note.rfind("error: ", 0) != 0) {
            ++skips;
        } else if (r.verdict) {
            ++passes;
        } else {
            ++failures;
            if (first_failure.empty()) first_failure = r.theorem + " " + r.instance.dump();
        }
    }
    void add(const std::vector<TheoremReport>& rs) {
        for (const auto& r : rs) add(r);
    }
    std::string str() const {
        std::ostringstream s;
        s << passes << "/" << total << " pass";
        if (skips) s << ", " << skips << " skipped";
        if (failures) s << ", " << failures << " fail; first: " << first_failure.substr(0, 200);
        return s.str();
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome rotation_benchmark() {
    auto t0 = std::chrono::steady_clock::now();
    auto sp = standard_space(1);
    auto clm = [&](double b) {
        auto psi = std::make_shared<RotationPath>(sp, 0.0, b);
        LagrangianPairPath P{sp, std::make_shared<ConstantPath>(frame_LD(1)),
                             std::make_shared<MovedFramePath>(psi, frame_LD(1)), 0.0, b, 512};
        return clm_index(P).int_value();
    };
    const int half = clm(kPi), full = clm(2.0 * kPi);
    const double dt = seconds_since(t0);
    std::ostringstream s;
    s << "[0,pi] -> " << half << ", [0,2pi] -> " << full << ", " << dt << " s";
    return {half == 1 && full == 2 && dt < kRotationSeconds, s.str()};
}

Outcome index_theorem_suite() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> T(1.0, 5.0);
    Tally tally;
    int unconverged = 0;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + i % 2;
        auto ms = random_morse_sturm(n, T(rng), rng() % 1000000);
        for (const auto& Z : {BoundaryCondition::dirichlet(n), BoundaryCondition::neumann(n), BoundaryCondition::periodic(n)}) {
            TheoremReport r;
            try {
                r = index_theorem(ms, Z);
                const auto& h = r.diagnostics["morse_history"];
                if (h.size() < 2 || h[h.size() - 1] != h[h.size() - 2]) ++unconverged, r.verdict = false;
            } catch (const std::exception& e) {
                r.theorem = "index";
                r.note = std::string("error: ") + e.what();
            }
            tally.add(r);
        }
    }
    const double dt = seconds_since(t0);
    std::ostringstream s;
    s << "50 systems x {Dirichlet, Neumann, periodic}: " << tally.str() << ", unconverged " << unconverged << ", " << dt
      << " s";
    return {tally.failures == 0 && tally.skips == 0 && tally.passes == 150 && dt < kIndexSeconds, s.str()};
}

Outcome sturm_count() {
    MorseSturmSystem ms;
    ms.n = 1;
    ms.T = 3.5 * kPi;
    ms.P = [](double) { return Mat(Mat::Identity(1, 1)); };
    ms.Q = [](double) { return Mat(Mat::Zero(1, 1)); };
    ms.R = [](double) { return Mat(-Mat::Identity(1, 1)); };
    const auto Z = BoundaryCondition::dirichlet(1);
    const int morse = discrete_morse_index(ms, Z).index;
    const int maslov = maslov_index(ms, Z).int_value();
    std::ostringstream s;
    s << "Morse " << morse << ", Maslov " << maslov;
    return {morse == 3 && maslov == 4, s.str()};
}

Outcome suite(const std::string& id, int trials, const std::string& what, bool allow_skips = false,
              const std::function<bool(const TheoremReport&)>& extra = {}) {
    auto reports = verify(id, trials, kSeed, 0, jobs());
    Tally tally;
    for (auto& r : reports) {
        if (extra && !r.skipped && !extra(r)) {
            r.verdict = false;
        }
        tally.add(r);
    }
    std::string detail = what + ": " + tally.str();
    bool ok = tally.failures == 0 && tally.passes > 0 && (allow_skips || tally.skips == 0);
    return {ok, detail};
}

Outcome alternation() {
    int max_n = 0;
    auto out = suite("alternation", 200, "200 paths, n <= 3", false, [&](const TheoremReport& r) {
        max_n = std::max(max_n, r.instance["n"].get<int>());
        return r.diagnostics["hormander_identity"] == true && r.diagnostics["hormander"] == r.diagnostics["hormander_alt"];
    });
    out.detail += ", max n " + std::to_string(max_n);
    return out;
}

Outcome nonoscillation_suite() {
    return suite("nonoscillation", 50, "50 convex systems", false,
                 [](const TheoremReport& r) { return r.diagnostics["clm_LD_psiLD"] == r.instance["n"]; });
}

Outcome oscillation() {
    auto r = oscillation_bound([](double) { return Mat(Mat::Identity(1, 1)); }, 1, 1.0, 4.0 * kPi);
    std::ostringstream s;
    s << "CZ = " << r.left << ", bound " << r.right;
    return {r.verdict && r.left >= 4 && r.right == 4, s.str()};
}

Outcome iteration() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> T(0.5, 3.0);
    Tally ineq, bott;
    for (int i = 0; i < 25; ++i) {
        const int n = 1 + i % 2;
        auto H = random_hamiltonian(n, T(rng), rng() % 1000000);
        auto psi = integrate_fundamental(H, default_steps(H));
        for (int m = 2; m <= 5; ++m) {
            try {
                ineq.add(iteration_bounds(psi, m));
            } catch (const std::exception& e) {
                TheoremReport r;
                r.note = std::string("error: ") + e.what();
                ineq.add(r);
            }
        }
        try {
            bott.add(bott_identity(psi));
        } catch (const std::exception& e) {
            TheoremReport r;
            r.note = std::string("error: ") + e.what();
            bott.add(r);
        }
    }
    return {ineq.failures == 0 && bott.failures == 0 && ineq.skips == 0 && bott.skips == 0,
            "25 flows, m = 2..5: " + ineq.str() + "; Bott m = 2: " + bott.str()};
}

Outcome spectral() {
    auto t0 = std::chrono::steady_clock::now();
    auto out = suite("spectral-flow", 20, "20 families", false,
                     [](const TheoremReport& r) { return r.diagnostics["converged"] == true; });
    const double dt = seconds_since(t0);
    out.detail += ", " + std::to_string(dt) + " s";
    out.pass = out.pass && dt < kSpectralSeconds;
    return out;
}

Outcome comparison() { return suite("comparison", 20, "20 ordered pairs, CLM and Morse indices"); }

Outcome kepler() {
    auto t0 = std::chrono::steady_clock::now();
    auto circ = first_conjugate_distance(kepler_orbit(-0.5, 0.0));
    bool ok = circ.found && std::abs(circ.s_star - kPi) < kCircularTol &&
              std::abs(circ.bound - 2.0 * std::sqrt(2.0) * kPi) < 1e-12;
    int bad = 0;
    double worst_ratio = 0.0, worst_drift = 0.0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            const double h = -2.0 + 1.9 * a / 9.0, e = 0.9 * b / 9.0;
            auto orbit = kepler_orbit(h, e);
            auto c = first_conjugate_distance(orbit);
            worst_drift = std::max(worst_drift, orbit.energy_drift);
            if (c.found) worst_ratio = std::max(worst_ratio, c.s_star / c.bound);
            bad += !(c.found && c.s_star < c.bound) || !(orbit.energy_drift < kEnergyDriftTol);
        }
    const double dt = seconds_since(t0);
    std::ostringstream s;
    s.precision(3);
    s << "circular s* - pi = " << circ.s_star - kPi << "; sweep 10x10: " << bad << " failures, max s*/bound "
      << worst_ratio << ", max drift " << worst_drift << ", " << dt << " s";
    return {ok && bad == 0 && dt < kKeplerSeconds, s.str()};
}

Outcome clm_axioms_suite() { return suite("clm-axioms", 100, "100 instances, four properties each"); }

Outcome cz_gap() {
    auto gap = suite("l-maslov-gap", 100, "gap, 100 instances");
    std::map<std::string, int> families;
    auto it = suite("l-maslov-iteration", 30, "invariant iteration, 30 instances", true, [&](const TheoremReport& r) {
        ++families[r.instance.value("family", "?")];
        return true;
    });
    std::string fam;
    for (const auto& [k, v] : families) fam += (fam.empty() ? "" : ", ") + k + " " + std::to_string(v);
    return {gap.pass && it.pass && families.size() == 3, gap.detail + "; " + it.detail + " (" + fam + ")"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rotation benchmark", rotation_benchmark},
        {"index theorem", index_theorem_suite},
        {"Sturm explicit count", sturm_count},
        {"alternation bound", alternation},
        {"non-oscillation", nonoscillation_suite},
        {"oscillation lower bound", oscillation},
        {"iteration inequality", iteration},
        {"spectral-flow formula", spectral},
        {"comparison", comparison},
        {"Kepler conjugate points", kepler},
        {"CLM axioms", clm_axioms_suite},
        {"CZ-Maslov gap", cz_gap},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
