#include "sympsturm/applications.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <thread>

namespace sympsturm {

namespace {

struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::uint64_t next() { return rng(); }
    Mat gaussian(int r, int c) {
        std::normal_distribution<double> N(0.0, 1.0);
        Mat A(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) A(i, j) = N(rng);
        return A;
    }
    Mat symmetric(int k, double scale = 1.0) {
        Mat A = gaussian(k, k);
        return Mat(0.5 * scale * (A + A.transpose()));
    }
};

// B(t) = M(t) M(t)^T + c Id, strictly convex.
HamiltonianCoefficientPath convex_hamiltonian(int n, double T, Draw& d) {
    Mat A0 = 0.7 * d.gaussian(2 * n, 2 * n), A1 = 0.4 * d.gaussian(2 * n, 2 * n);
    HamiltonianCoefficientPath H;
    H.n = n;
    H.T = T;
    H.B = [A0, A1, n](double t) {
        Mat M = A0 + std::sin(t) * A1;
        return Mat(M * M.transpose() + 0.3 * Mat::Identity(2 * n, 2 * n));
    };
    return H;
}

MatFn positive_path(int n, Draw& d, double scale, double shift) {
    Mat C0 = scale * d.gaussian(n, n), C1 = scale * d.gaussian(n, n);
    return [C0, C1, n, shift](double t) {
        Mat C = C0 + std::sin(t) * C1;
        return Mat(C * C.transpose() + shift * Mat::Identity(n, n));
    };
}

// n = 2 frame LD_1 + span{(w e2, v e2)}: a product of the momentum axis in
// the first plane and a line in the second.
Mat product_with_LD_line(Draw& d) {
    const double th = d.uniform(0.0, M_PI);
    Mat F = Mat::Zero(4, 2);
    F(0, 0) = 1.0;
    F(1, 1) = std::cos(th);
    F(3, 1) = std::sin(th);
    return F;
}

Mat unstable_subspace(const Mat& P) {
    Eigen::EigenSolver<Mat> es(P);
    const int d = static_cast<int>(P.rows());
    Mat V(d, 0);
    for (int i = 0; i < d; ++i) {
        if (std::abs(es.eigenvalues()(i)) <= 1.0) continue;
        Vec re = es.eigenvectors().col(i).real(), im = es.eigenvectors().col(i).imag();
        Mat W(d, V.cols() + 2);
        W << V, re, im;
        V = orthonormalize(W, 1e-9);
    }
    return V;
}

bool hyperbolic(const Mat& P, double gap) {
    Eigen::EigenSolver<Mat> es(P, false);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < gap) return false;
    return true;
}

BoundaryCondition cycle_bc(int n, int i) {
    switch (i % 3) {
        case 0: return BoundaryCondition::dirichlet(n);
        case 1: return BoundaryCondition::neumann(n);
        default: return BoundaryCondition::periodic(n);
    }
}

FocalSetup random_setup(int n, int p, const Mat& G, Draw& d) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        FocalSetup s;
        s.G = G;
        s.tangent = p == 0 ? Mat(n, 0) : orthonormalize(d.gaussian(n, p));
        if (p > 0) {
            Mat GP = s.tangent.transpose() * G * s.tangent;
            Eigen::JacobiSVD<Mat> svd(GP);
            if (svd.singularValues()(p - 1) < 0.1) continue;
            s.S = GP.inverse() * d.symmetric(p);
        } else {
            s.S = Mat(0, 0);
        }
        return s;
    }
    throw RefinementError("could not draw a nondegenerate submanifold");
}

Mat metric_of(int n, int kind, Draw& d) {
    if (kind == 0) return Mat::Identity(n, n);
    if (kind == 1) {
        Mat G = Mat::Identity(n, n);
        G(n - 1, n - 1) = -1.0;
        return G;
    }
    Mat A = d.gaussian(n, n);
    return Mat(A * A.transpose() + Mat::Identity(n, n));
}

MatFn curvature_of(const Mat& G, Draw& d) {
    const int n = static_cast<int>(G.rows());
    Mat Gi = G.inverse();
    Mat Y0 = d.symmetric(n), Y1 = d.symmetric(n, 0.5);
    return [Gi, Y0, Y1](double t) { return Mat(Gi * (Y0 + std::sin(t) * Y1)); };
}

using Trial = std::function<TheoremReport(int, std::uint64_t, int, const TheoremOptions&)>;

TheoremReport run_alternation(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 3;
    const double T = d.uniform(0.5, 3.0);
    auto H = random_hamiltonian(n, T, d.next() % 1000000, 1.0);
    auto psi = integrate_fundamental(H, default_steps(H));
    auto space = standard_space(n);
    Mat L = random_lagrangian(space, d.next());
    Mat mu1 = random_lagrangian(space, d.next()), mu2 = random_lagrangian(space, d.next());
    switch (i % 6) {
        case 1: mu1 = frame_LD(n), mu2 = frame_LN(n); break;
        case 2: mu1 = L; break;
        case 3: mu2 = psi->value(T) * L; break;
        case 4: mu2 = mu1; break;
        default: break;
    }
    return alternation_bound(space, std::make_shared<MovedFramePath>(psi, L), 0.0, T, mu1, mu2, opt);
}

TheoremReport run_zeros(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 2;
    const double T = d.uniform(1.0, 6.0);
    auto H = convex_hamiltonian(n, T, d);
    auto psi = integrate_fundamental(H, default_steps(H));
    auto space = standard_space(n);
    Mat L = i % 4 == 0 ? frame_LD(n) : random_lagrangian(space, d.next());
    Mat mu1 = frame_LD(n), mu2 = i % 2 ? frame_LN(n) : random_lagrangian(space, d.next());
    const double alpha = d.uniform(0.0, 0.5) * T;
    const double beta = alpha + d.uniform(0.2, 1.0) * (T - alpha);
    return zeros_theorem(space, std::make_shared<MovedFramePath>(psi, L), 0.0, T, mu1, mu2, alpha, beta, opt);
}

TheoremReport run_nonoscillation(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 3;
    const double T = d.uniform(0.5, 5.0);
    MatFn b = positive_path(n, d, 0.5, 0.5);
    MatFn a;
    if (i % 5 == 0) {
        a = [n](double) { return Mat(Mat::Zero(n, n)); };
    } else {
        MatFn c = positive_path(n, d, 0.5, 0.0);
        a = [c](double t) { return Mat(-c(t)); };
    }
    Mat L0 = i % 7 == 0 ? frame_LD(n) : random_lagrangian(standard_space(n), d.next());
    return nonoscillation(b, a, n, T, L0, opt);
}

TheoremReport run_optical(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 3;
    auto H = convex_hamiltonian(n, d.uniform(1.0, 5.0), d);
    auto space = standard_space(n);
    return optical_check(H, random_lagrangian(space, d.next()), random_lagrangian(space, d.next()), opt);
}

TheoremReport run_comparison_principle(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    const bool k_variant = n == 2 && i % 3 == 2;
    auto space = standard_space(n);
    const int budget = 200;
    TheoremReport last;
    for (int draw = 0; draw < budget; ++draw) {
        const double T = d.uniform(0.3, 3.0);
        MatFn b, a;
        if (k_variant) {
            // decoupled planes: a free particle in the first, a convex oscillator in the second
            const double b1 = d.uniform(0.5, 2.0), b2 = d.uniform(0.5, 2.0), a2 = d.uniform(-1.0, 1.0);
            b = [b1, b2](double t) { return Mat(Vec((Vec(2) << b1, b2 + 0.3 * std::sin(t)).finished()).asDiagonal()); };
            a = [a2](double t) { return Mat(Vec((Vec(2) << 0.0, a2 * std::cos(t)).finished()).asDiagonal()); };
        } else {
            b = positive_path(n, d, 0.5, 0.3);
            Mat A0 = d.symmetric(n, 0.5);
            a = [A0](double t) { return Mat(std::cos(t) * A0); };
        }
        auto psi = integrate_fundamental(natural_hamiltonian(b, a, n, T), 400);
        Mat L1 = k_variant ? product_with_LD_line(d) : random_lagrangian(space, d.next());
        Mat L2 = k_variant ? product_with_LD_line(d) : random_lagrangian(space, d.next());
        last = comparison_principle(L1, L2, frame_LD(n), psi, opt);
        last.instance["draws"] = draw + 1;
        if (!last.skipped) return last;
    }
    last.note = "draw budget exhausted: " + last.note;
    return last;
}

SymplecticPathPtr iteration_flow(int i, Draw& d, int n) {
    if (i % 10 == 0) {
        auto H = constant_hamiltonian(Mat::Identity(2 * n, 2 * n), M_PI / 2.0);
        return integrate_fundamental(H, default_steps(H));
    }
    auto H = random_hamiltonian(n, d.uniform(0.5, 3.0), d.next() % 1000000, 1.0);
    return integrate_fundamental(H, default_steps(H));
}

TheoremReport run_iteration(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    auto psi = iteration_flow(i, d, n);
    return iteration_bounds(psi, 2 + i % 4, opt);
}

TheoremReport run_bott(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    return bott_identity(iteration_flow(i, d, n), opt);
}

TheoremReport run_cz_maslov(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    auto space = standard_space(n);
    auto H = random_hamiltonian(n, d.uniform(0.5, 3.0), d.next() % 1000000, 1.0);
    auto psi = integrate_fundamental(H, default_steps(H));
    Mat L0 = random_lagrangian(space, d.next()), L = random_lagrangian(space, d.next());
    if (i % 4 == 0) L0 = L = frame_LD(n);
    if (i % 4 == 1) L = L0;
    return cz_maslov_bound(L0, L, psi, opt);
}

TheoremReport run_l_maslov_gap(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    auto space = standard_space(n);
    auto H = random_hamiltonian(n, d.uniform(0.5, 3.0), d.next() % 1000000, 1.0);
    auto psi = integrate_fundamental(H, default_steps(H));
    Mat L = i % 3 == 0 ? frame_LD(n) : i % 3 == 1 ? frame_LN(n) : random_lagrangian(space, d.next());
    auto r = cz_maslov_bound(L, L, psi, opt);
    r.theorem = "l-maslov-gap";
    return r;
}

TheoremReport run_l_maslov_iteration(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    auto space = standard_space(n);
    const int m = 2 + i % 3;
    if (i % 3 == 0) {
        // closed loop M exp(t J) M^{-1}, every L is invariant
        Mat M = random_symplectic(n, d.next(), 0.5);
        Mat B = M.transpose().inverse() * M.inverse();
        auto H = constant_hamiltonian(Mat(0.5 * (B + B.transpose())), 2.0 * M_PI);
        auto r = l_maslov_iteration(random_lagrangian(space, d.next()), integrate_fundamental(H, default_steps(H)), m, opt);
        r.instance["family"] = "loop";
        return r;
    }
    if (i % 3 == 1) {
        // M exp(tJ) D(t) M^{-1} on [0, pi], D(t) = diag(exp(-tS/pi), exp(tS/pi)); P = -M D(pi) M^{-1} fixes M L_D
        Mat X = 0.4 * d.gaussian(n, n);
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (X + X.transpose())));
        const Mat U = es.eigenvectors();
        const Vec lam = es.eigenvalues() / M_PI;
        const Mat M = random_symplectic(n, d.next(), 0.3);
        const Mat Mi = symplectic_inverse(space, M);
        const Mat J = J0(n);
        auto D = [U, lam, n](double t, bool deriv) {
            Vec e = (t * lam).array().exp();
            Vec s = deriv ? Vec(lam.cwiseProduct(e)) : e;
            Vec ei = (-t * lam).array().exp();
            Vec si = deriv ? Vec(-lam.cwiseProduct(ei)) : ei;
            Mat out = Mat::Zero(2 * n, 2 * n);
            out.topLeftCorner(n, n) = U * si.asDiagonal() * U.transpose();
            out.bottomRightCorner(n, n) = U * s.asDiagonal() * U.transpose();
            return out;
        };
        auto rot = [J, n](double t) { return Mat(std::cos(t) * Mat::Identity(2 * n, 2 * n) + std::sin(t) * J); };
        FunctionSymplecticPath::Fn f = [M, Mi, D, rot](double t) { return Mat(M * rot(t) * D(t, false) * Mi); };
        FunctionSymplecticPath::Fn df = [M, Mi, D, rot, J](double t) {
            return Mat(M * (J * rot(t) * D(t, false) + rot(t) * D(t, true)) * Mi);
        };
        auto psi = std::make_shared<FunctionSymplecticPath>(2 * n, 0.0, M_PI, f, df);
        auto r = l_maslov_iteration(Mat(M * frame_LD(n)), psi, m, opt);
        r.instance["family"] = "rotation-hyperbolic";
        return r;
    }
    for (int draw = 0; draw < 100; ++draw) {
        auto H = random_hamiltonian(n, d.uniform(0.5, 2.0), d.next() % 1000000, 1.0);
        auto psi = integrate_fundamental(H, default_steps(H));
        Mat P = psi->value(H.T);
        if (!hyperbolic(P, 0.05) || std::pow(P.norm(), m) > 1e3) continue;
        Mat L = unstable_subspace(P);
        if (L.cols() != n || !is_lagrangian(space, L, 1e-10).ok) continue;
        auto r = l_maslov_iteration(L, psi, m, opt);
        r.instance["family"] = "unstable";
        r.instance["draws"] = draw + 1;
        return r;
    }
    TheoremReport r;
    r.theorem = "l-maslov-iteration";
    r.skipped = true;
    r.note = "no hyperbolic monodromy within the draw budget";
    return r;
}

TheoremReport run_oscillation(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1;
    if (i == 0) return oscillation_bound([n](double) { return Mat(Mat::Identity(n, n)); }, n, 1.0, 4.0 * M_PI, opt);
    const double omega = d.uniform(0.5, 1.5);
    const double T = 2.0 * M_PI / omega * d.uniform(1.0, 3.0);
    const double eps = d.uniform(0.0, 0.1) * omega * omega;
    Mat S = d.gaussian(n, n);
    S = S * S.transpose();
    S /= std::max(1.0, S.norm());
    auto a = [omega, eps, S, n](double t) {
        double s = std::sin(t);
        return Mat(omega * omega * Mat::Identity(n, n) - eps * s * s * S);
    };
    return oscillation_bound(a, n, omega, T, opt);
}

TheoremReport run_index(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + (i / 3) % 2;
    auto ms = random_morse_sturm(n, d.uniform(1.0, 5.0), d.next() % 1000000);
    return index_theorem(ms, cycle_bc(n, i), opt);
}

TheoremReport run_spectral_flow(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    auto E = random_hamiltonian(n, d.uniform(1.0, 4.0), d.next() % 1000000, 1.0);
    Mat L = (i / 2) % 4 == 3 ? random_lagrangian(double_space(standard_space(n)), d.next())
                             : boundary_lagrangian(cycle_bc(n, (i / 2) % 4));
    return spectral_flow_formula(E, L, SpectralFlowOptions{}, opt);
}

TheoremReport run_comparison(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 1 + i % 2;
    auto ms1 = random_morse_sturm(n, d.uniform(1.0, 4.0), d.next() % 1000000);
    auto ms2 = ms1;
    MatFn drop = positive_path(n, d, 0.6, 0.0);
    auto R1 = ms1.R;
    ms2.R = [R1, drop](double t) { return Mat(R1(t) - drop(t)); };
    if (i % 2 == 1) {
        auto zero = [n](double) { return Mat(Mat::Zero(n, n)); };
        ms1.Q = zero;
        ms2.Q = zero;
        auto P1 = ms1.P;
        ms2.P = [P1, n](double t) { return Mat(P1(t) - 0.5 * Mat::Identity(n, n)); };
    }
    return comparison_theorem(ms1, ms2, cycle_bc(n, i / 2), SpectralFlowOptions{}, opt);
}

TheoremReport run_clm_axioms(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    const int n = dim ? dim : 1 + i % 3;
    return clm_axioms(n, seed % 100000000, opt);
}

TheoremReport run_conj_focal(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 2;
    Mat G = metric_of(n, i % 3, d);
    auto setup = random_setup(n, i % (n + 1), G, d);
    return conjugate_focal_comparison(setup, curvature_of(G, d), 0.0, d.uniform(1.0, 5.0), opt);
}

TheoremReport run_conj_focal_pair(int i, std::uint64_t seed, int dim, const TheoremOptions& opt) {
    Draw d(seed);
    const int n = dim ? dim : 2;
    Mat G = metric_of(n, i % 3, d);
    auto P = random_setup(n, i % (n + 1), G, d);
    auto Q = random_setup(n, (i / 3) % (n + 1), G, d);
    return conjugate_focal_pair(P, Q, curvature_of(G, d), 0.0, d.uniform(1.0, 5.0), opt);
}

const std::map<std::string, Trial>& registry() {
    static const std::map<std::string, Trial> r{
        {"alternation", run_alternation},
        {"zeros", run_zeros},
        {"nonoscillation", run_nonoscillation},
        {"optical", run_optical},
        {"comparison-principle", run_comparison_principle},
        {"iteration", run_iteration},
        {"bott", run_bott},
        {"cz-maslov", run_cz_maslov},
        {"l-maslov-gap", run_l_maslov_gap},
        {"l-maslov-iteration", run_l_maslov_iteration},
        {"oscillation", run_oscillation},
        {"index", run_index},
        {"spectral-flow", run_spectral_flow},
        {"comparison", run_comparison},
        {"clm-axioms", run_clm_axioms},
        {"conj-focal", run_conj_focal},
        {"conj-focal-pair", run_conj_focal_pair},
    };
    return r;
}

}  // namespace

std::vector<std::string> theorem_ids() {
    std::vector<std::string> ids;
    for (const auto& [k, v] : registry()) ids.push_back(k);
    return ids;
}

std::vector<TheoremReport> verify(const std::string& theorem, int trials, std::uint64_t seed, int dim, int jobs,
                                  const TheoremOptions& opt) {
    auto it = registry().find(theorem);
    if (it == registry().end()) throw InputError("unknown theorem id '" + theorem + "'");
    if (trials < 0) throw InputError("trials must be nonnegative");
    if (dim < 0 || dim > 4) throw InputError("dim must lie in 0..4");
    std::vector<TheoremReport> out(trials);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (int i = next++; i < trials; i = next++) {
            const std::uint64_t ts = seed * 1000003ULL + static_cast<std::uint64_t>(i);
            try {
                out[i] = it->second(i, ts, dim, opt);
            } catch (const std::exception& e) {
                out[i] = TheoremReport{};
                out[i].theorem = theorem;
                out[i].verdict = false;
                out[i].note = std::string("error: ") + e.what();
            }
            out[i].instance["trial"] = i;
            out[i].instance["seed"] = ts;
        }
    };
    const int threads = std::max(1, std::min(jobs, trials));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return out;
}

VerifySummary summarize(const std::string& theorem, const std::vector<TheoremReport>& reports) {
    VerifySummary s;
    s.theorem = theorem;
    s.trials = static_cast<int>(reports.size());
    for (const auto& r : reports) {
        if (r.note.rfind("error: ", 0) == 0)
            ++s.errors;
        else if (r.skipped)
            ++s.skips;
        else if (r.verdict)
            ++s.passes;
    }
    return s;
}

}  // namespace sympsturm
