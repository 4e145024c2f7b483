#pragma once

#include "sympsturm/io.hpp"
#include "sympsturm/spectral_flow.hpp"

#include <string>
#include <vector>

namespace sympsturm {

// One checked instance of a theorem: left relation right, integer exact.
struct TheoremReport {
    std::string theorem;
    Json instance = Json::object();
    long left = 0;
    long right = 0;
    std::string relation;  // "<=", ">=", "==", "=>"
    bool verdict = false;
    bool skipped = false;
    std::string note;
    Json diagnostics = Json::object();

    Json to_json() const;
};

struct TheoremOptions {
    int grid = 512;
    EngineOptions engine;
};

// |CLM(mu2, lambda) - CLM(mu1, lambda)| <= n - k, plus the two Hormander
// expressions of the difference.
TheoremReport alternation_bound(const SymplecticSpace& space, PathPtr lambda, double a, double b, const Mat& mu1,
                                const Mat& mu2, const TheoremOptions& opt = {});

// Plus curve against mu1 and mu2: nu(mu2, [alpha, beta]) > n - k implies a
// crossing with mu1 in [alpha, beta], and symmetrically. Also records the
// bound |nu(mu2) - nu(mu1)| <= n - k on the subinterval.
TheoremReport zeros_theorem(const SymplecticSpace& space, PathPtr lambda, double a, double b, const Mat& mu1,
                            const Mat& mu2, double alpha, double beta, const TheoremOptions& opt = {});

// H = 1/2 (<b(t) p, p> + <a(t) q, q>), b > 0, a <= 0; psi(t) L0 meets L_D with
// total multiplicity at most n.
TheoremReport nonoscillation(const MatFn& b, const MatFn& a, int n, double T, const Mat& L0,
                             const TheoremOptions& opt = {});

// Positive definite B(t): psi(t) L is a plus curve against Lref.
TheoremReport optical_check(const HamiltonianCoefficientPath& B, const Mat& L, const Mat& Lref,
                            const TheoremOptions& opt = {});

TheoremReport comparison_principle(const Mat& L1, const Mat& L2, const Mat& L3, SymplecticPathPtr psi,
                                   const TheoremOptions& opt = {});

TheoremReport iteration_bounds(SymplecticPathPtr psi, int m, const TheoremOptions& opt = {});

// m = 2: CZ(psi^2) - n = (CZ(psi) - n) + CLM(Gr(-Id), Gr psi).
TheoremReport bott_identity(SymplecticPathPtr psi, const TheoremOptions& opt = {});

TheoremReport cz_maslov_bound(const Mat& L0, const Mat& L, SymplecticPathPtr psi, const TheoremOptions& opt = {});

// i_L(psi^m) = m i_L(psi) for a P-invariant L.
TheoremReport l_maslov_iteration(const Mat& L, SymplecticPathPtr psi, int m, const TheoremOptions& opt = {});

// H = 1/2 |p|^2 + 1/2 <a(t) q, q>, a(t) <= omega^2 Id, a(0) = omega^2 Id:
// the literal lower bound CZ >= 2 floor(T omega / 2 pi).
TheoremReport oscillation_bound(const MatFn& a, int n, double omega, double T, const TheoremOptions& opt = {});

// Morse index = CLM(L_Z, Gr psi) - c(Z).
TheoremReport index_theorem(const MorseSturmSystem& ms, const BoundaryCondition& Z, const TheoremOptions& opt = {});

// -spfl = CLM(L, Gr psi) for A_s = -J0 d/dt - s E(t) on D(T, L).
TheoremReport spectral_flow_formula(const HamiltonianCoefficientPath& E, const Mat& L,
                                    const SpectralFlowOptions& sopt = {}, const TheoremOptions& opt = {});

// B1 <= B2 gives CLM(L_Z, Gr psi1) <= CLM(L_Z, Gr psi2) and ordered Morse
// indices for Morse-Sturm pairs.
TheoremReport comparison_theorem(const MorseSturmSystem& ms1, const MorseSturmSystem& ms2,
                                 const BoundaryCondition& Z, const SpectralFlowOptions& sopt = {},
                                 const TheoremOptions& opt = {});

// Reparametrization, additivity, symplectic invariance and loop independence
// of CLM on one random instance.
TheoremReport clm_axioms(int n, std::uint64_t seed, const TheoremOptions& opt = {});

struct VerifySummary {
    std::string theorem;
    int trials = 0;
    int passes = 0;
    int skips = 0;
    int errors = 0;
};

// Seeded random instances for a theorem id; reports come back in trial order.
std::vector<TheoremReport> verify(const std::string& theorem, int trials, std::uint64_t seed, int dim = 0,
                                  int jobs = 1, const TheoremOptions& opt = {});
VerifySummary summarize(const std::string& theorem, const std::vector<TheoremReport>& reports);
std::vector<std::string> theorem_ids();

}  // namespace sympsturm
