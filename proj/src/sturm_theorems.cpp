#include "sympsturm/sturm_theorems.hpp"

#include <cmath>

namespace sympsturm {

Json TheoremReport::to_json() const {
    return Json{{"theorem", theorem}, {"instance", instance}, {"left", left},       {"right", right},
                {"relation", relation}, {"verdict", verdict}, {"skipped", skipped}, {"note", note},
                {"diagnostics", diagnostics}};
}

namespace {

Mat block_diag(const Mat& A, const Mat& B) {
    Mat M = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
    M.topLeftCorner(A.rows(), A.cols()) = A;
    M.bottomRightCorner(B.rows(), B.cols()) = B;
    return M;
}

int dim_cap(const Mat& A, const Mat& B, double tol) { return subspace_dim(subspace_intersection(A, B, tol), tol); }

Mat cap(const Mat& A, const Mat& B, double tol) { return subspace_intersection(A, B, tol); }

int dim_sum(const Mat& A, const Mat& B, double tol) { return subspace_dim(subspace_sum(A, B, tol), tol); }

IndexReport clm_against(const SymplecticSpace& space, const Mat& ref, PathPtr path, double a, double b,
                        const TheoremOptions& opt) {
    LagrangianPairPath P{space, std::make_shared<ConstantPath>(ref), std::move(path), a, b, opt.grid};
    return clm_index(P, opt.engine);
}

PathPtr moved(SymplecticPathPtr psi, const Mat& L) { return std::make_shared<MovedFramePath>(std::move(psi), L); }

SymplecticSpace space_of(const SymplecticPathPtr& psi) { return standard_space(psi->dim() / 2); }

void check_samples(const MatFn& f, double T, const std::function<bool(const Mat&)>& ok, const std::string& what) {
    for (int i = 0; i <= 16; ++i) {
        double t = T * i / 16.0;
        if (!ok(f(t))) throw PreconditionError(what + " fails at t = " + std::to_string(t));
    }
}

double min_eig(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double max_eig(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Json crossings_json(const std::vector<CrossingRecord>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) a.push_back(crossing_to_json(c));
    return a;
}

int fixed_dim(const SymplecticSpace& space, const Mat& P, double tol) {
    return intersection(double_space(space), graph_lagrangian(space, P, 1e-7), diagonal_frame(space.dim()), tol).dim;
}

}  // namespace

TheoremReport alternation_bound(const SymplecticSpace& space, PathPtr lambda, double a, double b, const Mat& mu1,
                                const Mat& mu2, const TheoremOptions& opt) {
    require_lagrangian(space, mu1, "mu1");
    require_lagrangian(space, mu2, "mu2");
    const double tol = opt.engine.tol;
    const int n = space.n();
    TheoremReport r;
    r.theorem = "alternation";
    r.instance = {{"n", n}, {"interval", {a, b}}, {"mu1", mat_to_json(mu1)}, {"mu2", mat_to_json(mu2)}};
    auto i1 = clm_against(space, mu1, lambda, a, b, opt);
    auto i2 = clm_against(space, mu2, lambda, a, b, opt);
    const int c1 = i1.int_value(), c2 = i2.int_value();
    Mat la = lambda->frame(a), lb = lambda->frame(b);
    Mat ab = cap(la, lb, tol);
    const int e1 = dim_sum(ab, cap(lb, mu1, tol), tol);
    const int e2 = dim_sum(ab, cap(lb, mu2, tol), tol);
    Mat m12 = cap(mu1, mu2, tol);
    const int d1 = dim_sum(cap(la, mu1, tol), m12, tol);
    const int d2 = dim_sum(cap(lb, mu1, tol), m12, tol);
    const int k1 = std::min(e1, e2), k2 = std::min(d1, d2), k = std::max(k1, k2);
    auto h = hormander_index(space, la, lb, mu1, mu2, tol);
    r.left = std::abs(c2 - c1);
    r.right = n - k;
    r.relation = "<=";
    const bool identity = (c2 - c1 == h.value) && h.agree;
    r.verdict = r.left <= r.right && identity;
    r.diagnostics = {{"clm_mu1", c1},        {"clm_mu2", c2},        {"dim_eps1", e1}, {"dim_eps2", e2},
                     {"dim_delta1", d1},     {"dim_delta2", d2},     {"k1", k1},       {"k2", k2},
                     {"k", k},               {"hormander", h.value}, {"hormander_alt", h.value_alt},
                     {"hormander_identity", identity}};
    if (!identity) r.note = "Hormander identity violated";
    return r;
}

TheoremReport zeros_theorem(const SymplecticSpace& space, PathPtr lambda, double a, double b, const Mat& mu1,
                            const Mat& mu2, double alpha, double beta, const TheoremOptions& opt) {
    if (!(a <= alpha && alpha < beta && beta <= b)) throw InputError("zeros_theorem: subinterval outside [a, b]");
    const double tol = opt.engine.tol;
    const int n = space.n();
    auto full1 = plus_curve_report(space, mu1, lambda, a, b, opt.grid, opt.engine);
    auto full2 = plus_curve_report(space, mu2, lambda, a, b, opt.grid, opt.engine);
    if (!full1.is_plus || !full2.is_plus) throw PreconditionError("zeros_theorem: path is not a plus curve for mu1 and mu2");
    auto sub1 = plus_curve_report(space, mu1, lambda, alpha, beta, opt.grid, opt.engine);
    auto sub2 = plus_curve_report(space, mu2, lambda, alpha, beta, opt.grid, opt.engine);
    const int nu1 = sub1.total_multiplicity, nu2 = sub2.total_multiplicity;
    Mat L = lambda->frame(alpha), lT = lambda->frame(beta);
    Mat LlT = cap(L, lT, tol);
    const int dLlT = subspace_dim(LlT, tol);
    const int q1 = dLlT - dim_cap(LlT, mu1, tol);
    const int q2 = dLlT - dim_cap(LlT, mu2, tol);
    Mat m12 = cap(mu1, mu2, tol);
    const int d1 = dim_sum(cap(L, mu1, tol), m12, tol);
    const int d2 = dim_sum(cap(lT, mu2, tol), m12, tol);
    const int k1 = std::min(q1, q2), k2 = std::min(d1, d2), k = std::max(k1, k2);
    const int s1 = dim_sum(LlT, cap(lT, mu1, tol), tol), s2 = dim_sum(LlT, cap(lT, mu2, tol), tol);
    const int k_sum = std::max(std::min(s1, s2), k2);
    const bool imp12 = !(nu2 > n - k) || nu1 >= 1;
    const bool imp21 = !(nu1 > n - k) || nu2 >= 1;
    TheoremReport r;
    r.theorem = "zeros";
    r.instance = {{"n", n}, {"interval", {a, b}}, {"subinterval", {alpha, beta}},
                  {"mu1", mat_to_json(mu1)}, {"mu2", mat_to_json(mu2)}};
    r.left = std::abs(nu2 - nu1);
    r.right = n - k;
    r.relation = "<=";
    r.verdict = imp12 && imp21 && r.left <= r.right;
    r.diagnostics = {{"nu1", nu1},          {"nu2", nu2},          {"dim_eps1", q1},   {"dim_eps2", q2},
                     {"dim_delta1", d1},    {"dim_delta2", d2},    {"k1", k1},         {"k2", k2},
                     {"k", k},              {"k_sum_form", k_sum}, {"implication_12", imp12},
                     {"implication_21", imp21}, {"nu1_full", full1.total_multiplicity},
                     {"nu2_full", full2.total_multiplicity}};
    return r;
}

TheoremReport nonoscillation(const MatFn& b, const MatFn& a, int n, double T, const Mat& L0, const TheoremOptions& opt) {
    check_samples(b, T, [](const Mat& m) { return min_eig(m) > 0.0; }, "B(t) positive definite");
    check_samples(a, T, [](const Mat& m) { return max_eig(m) <= 1e-12; }, "A(t) negative semidefinite");
    auto space = standard_space(n);
    require_lagrangian(space, L0, "L0");
    auto H = natural_hamiltonian(b, a, n, T);
    auto psi = integrate_fundamental(H, default_steps(H));
    const Mat LD = frame_LD(n);
    auto plus = plus_curve_report(space, LD, moved(psi, L0), 0.0, T, opt.grid, opt.engine);
    const int clm_DD = clm_against(space, LD, moved(psi, LD), 0.0, T, opt).int_value();
    const int clm_D0 = clm_against(space, LD, moved(psi, L0), 0.0, T, opt).int_value();
    const int end_cap = intersection(space, LD, psi->value(T) * LD, opt.engine.tol).dim;
    const int mul0 = intersection(space, L0, LD, opt.engine.tol).dim;
    TheoremReport r;
    r.theorem = "nonoscillation";
    r.instance = {{"n", n}, {"T", T}, {"L0", mat_to_json(L0)}};
    r.left = plus.total_multiplicity;
    r.right = n;
    r.relation = "<=";
    const bool ultima = clm_DD == n;
    const bool transversal = end_cap == 0;
    const bool sandwich = mul0 <= clm_D0 && clm_D0 <= n;
    r.verdict = r.left <= r.right && ultima && transversal && sandwich && plus.is_plus;
    r.diagnostics = {{"is_plus", plus.is_plus},   {"clm_LD_psiLD", clm_DD}, {"clm_LD_psiL0", clm_D0},
                     {"dim_LD_cap_psiT_LD", end_cap}, {"mul0", mul0},    {"crossings", crossings_json(plus.crossings)}};
    return r;
}

TheoremReport optical_check(const HamiltonianCoefficientPath& B, const Mat& L, const Mat& Lref, const TheoremOptions& opt) {
    check_samples(B.B, B.T, [](const Mat& m) { return min_eig(m) > 0.0; }, "B(t) positive definite");
    auto space = standard_space(B.n);
    auto psi = integrate_fundamental(B, default_steps(B));
    auto plus = plus_curve_report(space, Lref, moved(psi, L), 0.0, B.T, opt.grid, opt.engine);
    int bad = 0;
    for (const auto& c : plus.crossings) bad += c.inertia.pos != c.mult;
    TheoremReport r;
    r.theorem = "optical";
    r.instance = {{"n", B.n}, {"T", B.T}, {"L", mat_to_json(L)}, {"Lref", mat_to_json(Lref)}};
    r.left = bad;
    r.right = 0;
    r.relation = "==";
    r.verdict = bad == 0;
    r.diagnostics = {{"total_multiplicity", plus.total_multiplicity}, {"crossings", crossings_json(plus.crossings)}};
    return r;
}

TheoremReport comparison_principle(const Mat& L1, const Mat& L2, const Mat& L3, SymplecticPathPtr psi,
                                   const TheoremOptions& opt) {
    auto space = space_of(psi);
    const int n = space.n();
    const double tol = opt.engine.tol;
    for (const auto* L : {&L1, &L2, &L3}) require_lagrangian(space, *L, "L");
    const double a = psi->t_begin(), b = psi->t_end();
    TheoremReport r;
    r.theorem = "comparison-principle";
    r.instance = {{"n", n}, {"interval", {a, b}}, {"L1", mat_to_json(L1)}, {"L2", mat_to_json(L2)},
                  {"L3", mat_to_json(L3)}};
    r.relation = "==";
    auto plus2 = plus_curve_report(space, L3, moved(psi, L2), a, b, opt.grid, opt.engine);
    auto tri = triple_index(space, L1, L2, L3, tol);
    const int d12 = intersection(space, L1, L2, tol).dim;
    const bool h1 = plus2.is_plus;
    const bool h2 = tri.value == n - d12;
    LagrangianPairPath P1{space, std::make_shared<ConstantPath>(L3), moved(psi, L1), a, b, opt.grid};
    auto cross1 = detect_crossings(P1, opt.engine);
    const int clm1 = clm_index(P1, opt.engine).int_value();
    const int k = intersection(space, L3, L2, tol).dim;
    r.diagnostics = {{"h1_plus", h1}, {"triple", tri.value}, {"n_minus_dim_L1L2", n - d12}, {"h2", h2},
                     {"clm_L3_l1", clm1}, {"k", k}};
    if (!h1 || !h2 || clm1 != k) {
        r.skipped = true;
        r.note = !h1 ? "hypothesis 1 fails" : !h2 ? "hypothesis 2 fails" : "hypothesis 3 fails";
        return r;
    }
    const int clm2 = plus2.clm;
    r.left = clm2;
    r.right = k;
    bool ok = clm2 == k;
    r.diagnostics["variant"] = k == 0 ? "plain" : "k";
    if (cross1.empty()) {
        const bool none2 = plus2.crossings.empty();
        const int end_cap = intersection(space, psi->value(b) * L2, L3, tol).dim;
        r.diagnostics["nondegenerate"] = {{"l2_crossings", plus2.crossings.size()}, {"dim_l2T_cap_L3", end_cap}};
        ok = ok && none2 && end_cap == 0;
    }
    r.verdict = ok;
    return r;
}

TheoremReport iteration_bounds(SymplecticPathPtr psi, int m, const TheoremOptions& opt) {
    if (m < 2) throw InputError("iteration_bounds: m must be at least 2");
    auto space = space_of(psi);
    const int n = space.n();
    const int cz1 = cz_index(space, psi, opt.grid, opt.engine).int_value();
    const int czm = cz_index(space, iterate_path(psi, m), opt.grid * m, opt.engine).int_value();
    const Mat P = psi->value(psi->t_end());
    Mat Pm = Mat::Identity(2 * n, 2 * n);
    for (int i = 0; i < m; ++i) Pm = P * Pm;
    const int k1 = fixed_dim(space, P, opt.engine.tol), km = fixed_dim(space, Pm, opt.engine.tol);
    const long mid = czm - static_cast<long>(m) * cz1;
    const long lower = -static_cast<long>(m - 1) * (2 * n - k1);
    TheoremReport r;
    r.theorem = "iteration";
    r.instance = {{"n", n}, {"m", m}, {"interval", {psi->t_begin(), psi->t_end()}}};
    r.left = mid;
    r.right = k1 - km;
    r.relation = "<=";
    r.verdict = lower <= mid && mid <= r.right;
    r.diagnostics = {{"cz", cz1}, {"cz_m", czm}, {"k1", k1}, {"k_m", km}, {"lower", lower}, {"upper", k1 - km}};
    return r;
}

TheoremReport bott_identity(SymplecticPathPtr psi, const TheoremOptions& opt) {
    auto space = space_of(psi);
    const int n = space.n();
    const int cz1 = cz_index(space, psi, opt.grid, opt.engine).int_value();
    const int cz2 = cz_index(space, iterate_path(psi, 2), 2 * opt.grid, opt.engine).int_value();
    const int im1 = graph_index(space, antidiagonal_frame(space.dim()), psi, opt.grid, opt.engine).int_value();
    TheoremReport r;
    r.theorem = "bott";
    r.instance = {{"n", n}, {"interval", {psi->t_begin(), psi->t_end()}}};
    r.left = cz2 - n;
    r.right = (cz1 - n) + im1;
    r.relation = "==";
    r.verdict = r.left == r.right;
    r.diagnostics = {{"cz", cz1}, {"cz_2", cz2}, {"iota_minus1", im1}};
    return r;
}

TheoremReport cz_maslov_bound(const Mat& L0, const Mat& L, SymplecticPathPtr psi, const TheoremOptions& opt) {
    auto space = space_of(psi);
    const int n = space.n();
    const double tol = opt.engine.tol;
    require_lagrangian(space, L0, "L0");
    require_lagrangian(space, L, "L");
    const double a = psi->t_begin(), b = psi->t_end();
    const int clm = clm_against(space, L0, moved(psi, L), a, b, opt).int_value();
    const Mat LL0 = block_diag(L, L0);
    const int pair = graph_index(space, LL0, psi, opt.grid, opt.engine).int_value();
    const int cz = cz_index(space, psi, opt.grid, opt.engine).int_value();
    auto dspace = double_space(space);
    const Mat Delta = diagonal_frame(space.dim());
    const Mat GrP = graph_lagrangian(space, psi->value(b), 1e-7);
    const int eps = dim_sum(cap(GrP, Delta, tol), cap(Delta, LL0, tol), tol);
    auto tri = triple_index(dspace, GrP, Delta, LL0, tol);
    const bool same = intersection(space, L0, L, tol).dim == n;
    TheoremReport r;
    r.theorem = "cz-maslov";
    r.instance = {{"n", n}, {"interval", {a, b}}, {"L0", mat_to_json(L0)}, {"L", mat_to_json(L)}};
    r.left = std::abs(clm - cz);
    r.right = 2 * n - eps;
    r.relation = "<=";
    const bool pairs = clm == pair;
    const bool identity = clm - cz == -tri.value;
    bool ok = r.left <= r.right && pairs && identity;
    if (same) ok = ok && r.left <= n;
    r.verdict = ok;
    r.diagnostics = {{"clm", clm},          {"clm_pair", pair}, {"cz", cz},   {"dim_eps", eps},
                     {"triple", tri.value}, {"L_equals_L0", same}, {"pairs_identity", pairs},
                     {"triple_identity", identity}};
    return r;
}

TheoremReport l_maslov_iteration(const Mat& L, SymplecticPathPtr psi, int m, const TheoremOptions& opt) {
    auto space = space_of(psi);
    const int n = space.n();
    const Mat P = psi->value(psi->t_end());
    if (intersection(space, P * L, L, 1e-7).dim != n) throw PreconditionError("l_maslov_iteration: L is not P-invariant");
    const int i1 = l_maslov_index(space, L, psi, opt.grid, opt.engine).int_value();
    // the iterate has corners at t = kT, so it is summed period by period
    const double a = psi->t_begin(), T = psi->t_end() - a;
    int im = 0, direct = 0;
    Mat Pk = Mat::Identity(2 * n, 2 * n);
    for (int k = 0; k < m; ++k) {
        FunctionSymplecticPath::Fn f = [psi, Pk, a, k, T](double t) { return Mat(psi->value(t - k * T) * Pk); };
        FunctionSymplecticPath::Fn df;
        if (psi->has_derivative()) df = [psi, Pk, k, T](double t) { return Mat(psi->derivative(t - k * T) * Pk); };
        auto piece = std::make_shared<FunctionSymplecticPath>(2 * n, a + k * T, a + (k + 1) * T, f, df);
        im += l_maslov_index(space, L, piece, opt.grid, opt.engine).int_value();
        direct += clm_against(space, L, moved(piece, L), piece->t_begin(), piece->t_end(), opt).int_value();
        Pk = P * Pk;
    }
    TheoremReport r;
    r.theorem = "l-maslov-iteration";
    r.instance = {{"n", n}, {"m", m}, {"L", mat_to_json(L)}};
    r.left = im;
    r.right = static_cast<long>(m) * i1;
    r.relation = "==";
    r.verdict = im == r.right && direct == im;
    r.diagnostics = {{"i_L", i1}, {"i_L_m", im}, {"clm_L_lm", direct}};
    return r;
}

TheoremReport oscillation_bound(const MatFn& a, int n, double omega, double T, const TheoremOptions& opt) {
    if (!(omega > 0.0) || !(T > 0.0)) throw InputError("oscillation_bound: omega and T must be positive");
    const Mat W = omega * omega * Mat::Identity(n, n);
    check_samples(a, T, [&](const Mat& m) { return max_eig(m - W) <= 1e-9; }, "V(t, q) <= omega^2 |q|^2 / 2");
    if ((a(0.0) - W).norm() > 1e-9) throw PreconditionError("oscillation_bound: V(0, q) must equal omega^2 |q|^2 / 2");
    auto space = standard_space(n);
    auto id = [n](double) { return Mat(Mat::Identity(n, n)); };
    auto H = natural_hamiltonian(id, a, n, T);
    auto psi = integrate_fundamental(H, default_steps(H));
    const int cz = cz_index(space, psi, opt.grid, opt.engine).int_value();
    auto Hh = natural_hamiltonian(id, [W](double) { return W; }, n, T);
    const int cz_h = cz_index(space, integrate_fundamental(Hh, default_steps(Hh)), opt.grid, opt.engine).int_value();
    TheoremReport r;
    r.theorem = "oscillation";
    r.instance = {{"n", n}, {"omega", omega}, {"T", T}};
    r.left = cz;
    r.right = 2 * static_cast<long>(std::floor(T * omega / (2.0 * M_PI)));
    r.relation = ">=";
    r.verdict = r.left >= r.right;
    r.diagnostics = {{"cz_harmonic", cz_h}, {"ordered_by_comparison", cz <= cz_h}};
    if (!r.verdict) r.note = "lower bound fails; comparison gives CZ <= CZ(harmonic)";
    return r;
}

TheoremReport index_theorem(const MorseSturmSystem& ms, const BoundaryCondition& Z, const TheoremOptions& opt) {
    auto morse = discrete_morse_index(ms, Z);
    auto maslov = maslov_index(ms, Z, 0, 0, opt.engine);
    const int c = c_of_Z(Z);
    TheoremReport r;
    r.theorem = "index";
    r.instance = {{"n", ms.n}, {"T", ms.T}, {"Z", to_string(Z.kind)}};
    r.left = morse.index;
    r.right = maslov.int_value() - c;
    r.relation = "==";
    r.verdict = r.left == r.right;
    r.diagnostics = {{"morse_N", morse.N}, {"morse_history", morse.history}, {"maslov", maslov.int_value()}, {"c", c}};
    return r;
}

TheoremReport spectral_flow_formula(const HamiltonianCoefficientPath& E, const Mat& L, const SpectralFlowOptions& sopt,
                                    const TheoremOptions& opt) {
    auto space = standard_space(E.n);
    auto f = spectral_flow(scaled_path(E, L), sopt);
    const int clm = graph_index(space, L, integrate_fundamental(E, default_steps(E)), opt.grid, opt.engine).int_value();
    TheoremReport r;
    r.theorem = "spectral-flow";
    r.instance = {{"n", E.n}, {"T", E.T}, {"L", mat_to_json(L)}};
    r.left = -f.value;
    r.right = clm;
    r.relation = "==";
    r.verdict = f.converged && r.left == r.right;
    r.diagnostics = {{"spfl", f.value},          {"spfl_refined", f.value_refined}, {"converged", f.converged},
                     {"delta", f.delta},         {"negative_start", f.negative_start},
                     {"negative_end", f.negative_end}};
    if (!f.converged) r.note = "spectral flow not grid converged";
    return r;
}

TheoremReport comparison_theorem(const MorseSturmSystem& ms1, const MorseSturmSystem& ms2, const BoundaryCondition& Z,
                                 const SpectralFlowOptions& sopt, const TheoremOptions& opt) {
    auto B1 = morse_sturm_to_hamiltonian(ms1), B2 = morse_sturm_to_hamiltonian(ms2);
    auto cf = comparison_flow(B1, B2, boundary_lagrangian(Z), sopt);
    const int m1 = discrete_morse_index(ms1, Z).index, m2 = discrete_morse_index(ms2, Z).index;
    TheoremReport r;
    r.theorem = "comparison";
    r.instance = {{"n", ms1.n}, {"T", ms1.T}, {"Z", to_string(Z.kind)}};
    r.left = cf.clm1;
    r.right = cf.clm2;
    r.relation = "<=";
    r.verdict = cf.ordered_clm && cf.ordered_flows && cf.additive && cf.converged && m1 <= m2;
    r.diagnostics = {{"spfl1", cf.spfl1}, {"spfl2", cf.spfl2}, {"spfl_top", cf.spfl_top}, {"additive", cf.additive},
                     {"converged", cf.converged}, {"morse1", m1}, {"morse2", m2}};
    return r;
}

TheoremReport clm_axioms(int n, std::uint64_t seed, const TheoremOptions& opt) {
    auto space = standard_space(n);
    const double T = 1.0 + static_cast<double>(seed % 7) / 3.0;
    auto H = random_hamiltonian(n, T, seed, 1.0);
    auto psi = integrate_fundamental(H, default_steps(H));
    const Mat L = random_lagrangian(space, 4 * seed + 1), mu = random_lagrangian(space, 4 * seed + 2);
    auto lam = moved(psi, L);
    const int base = clm_against(space, mu, lam, 0.0, T, opt).int_value();

    // t -> lambda(phi(t)) with phi an increasing diffeomorphism of [0, T]
    auto phi = [T](double t) { return t + 0.25 * T / M_PI * std::sin(2.0 * M_PI * t / T); };
    auto dphi = [T](double t) { return 1.0 + 0.5 * std::cos(2.0 * M_PI * t / T); };
    auto rep = std::make_shared<FunctionPath>([psi, L, phi](double t) { return Mat(psi->value(phi(t)) * L); },
                                              [psi, L, phi, dphi](double t) {
                                                  return Mat(dphi(t) * psi->derivative(phi(t)) * L);
                                              });
    const int reparam = clm_against(space, mu, rep, 0.0, T, opt).int_value();

    const double c = T * (0.3 + 0.4 * static_cast<double>(seed % 5) / 5.0);
    const int left = clm_against(space, mu, lam, 0.0, c, opt).int_value();
    const int right = clm_against(space, mu, lam, c, T, opt).int_value();

    const Mat M = random_symplectic(n, 4 * seed + 3, 0.5);
    auto lamM = std::make_shared<FunctionPath>([psi, L, M](double t) { return Mat(M * psi->value(t) * L); },
                                               [psi, L, M](double t) { return Mat(M * psi->derivative(t) * L); });
    const int invariant = clm_against(space, M * mu, lamM, 0.0, T, opt).int_value();

    // loop t -> S exp(theta(t) J) S^{-1} L on [0, pi], closed since exp(pi J) = -Id
    const Mat S = random_symplectic(n, 4 * seed + 4, 0.5);
    const Mat Si = symplectic_inverse(space, S);
    const Mat J = J0(n);
    auto rot = [J](double th) { return Mat(std::cos(th) * Mat::Identity(J.rows(), J.cols()) + std::sin(th) * J); };
    auto loop = std::make_shared<FunctionPath>(
        [=](double t) { return Mat(S * rot(t + 0.3 * std::sin(2.0 * t)) * Si * L); },
        [=](double t) { return Mat((1.0 + 0.6 * std::cos(2.0 * t)) * S * J * rot(t + 0.3 * std::sin(2.0 * t)) * Si * L); });
    const int loop1 = clm_against(space, mu, loop, 0.0, M_PI, opt).int_value();
    const int loop2 = clm_against(space, frame_LD(n), loop, 0.0, M_PI, opt).int_value();

    int failures = 0;
    failures += reparam != base;
    failures += left + right != base;
    failures += invariant != base;
    failures += loop1 != loop2;
    TheoremReport r;
    r.theorem = "clm-axioms";
    r.instance = {{"n", n}, {"seed", seed}, {"T", T}};
    r.left = failures;
    r.right = 0;
    r.relation = "==";
    r.verdict = failures == 0;
    r.diagnostics = {{"clm", base},           {"reparametrized", reparam}, {"split_at", c},
                     {"left_piece", left},    {"right_piece", right},      {"symplectic_image", invariant},
                     {"loop_mu", loop1},      {"loop_LD", loop2}};
    return r;
}

}  // namespace sympsturm
