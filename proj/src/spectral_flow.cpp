#include "sympsturm/spectral_flow.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sympsturm {

Mat Discretization::basis_at(double t) const {
    const int M = size();
    const Mat J = J0(n);
    const double c = 1.0 / std::sqrt(T);
    Mat Phi(2 * n, M);
    for (int i = 0; i < M; ++i) {
        double a = lambda(i) * t;
        Phi.col(i) = c * (std::cos(a) * X.col(i) + std::sin(a) * (J * X.col(i)));
    }
    return Phi;
}

Mat Discretization::potential(const MatFn& C) const {
    const int M = size();
    Mat G = Mat::Zero(M, M);
    for (size_t q = 0; q < quad_t.size(); ++q) {
        Mat Phi = basis_at(quad_t[q]);
        Mat Cq = C(quad_t[q]);
        if (Cq.rows() != 2 * n || Cq.cols() != 2 * n) throw InputError("operator coefficient has the wrong size");
        G.noalias() += quad_w[q] * (Phi.transpose() * (Cq * Phi));
    }
    return 0.5 * (G + G.transpose());
}

Discretization make_discretization(int n, double T, const Mat& L, int N) {
    if (n < 1) throw InputError("discretization: n must be positive");
    if (!(T > 0.0)) throw InputError("discretization: T must be positive");
    if (N < 8) throw InputError("discretization: N must be at least 8");
    if (L.rows() != 4 * n || L.cols() != 2 * n) throw InputError("boundary frame must be 4n x 2n");
    const SymplecticSpace sp = standard_space(n);
    const SymplecticSpace dsp = double_space(sp);
    require_lagrangian(dsp, L, "boundary frame");

    // theta in [0, 2 pi) with Gr e^{theta J0} meeting L
    LagrangianPairPath P;
    P.space = dsp;
    P.l1 = std::make_shared<ConstantPath>(L);
    P.l2 = std::make_shared<GraphPath>(std::make_shared<RotationPath>(sp, 0.0, 2.0 * std::numbers::pi));
    P.a = 0.0;
    P.b = 2.0 * std::numbers::pi;
    P.grid = 128;
    std::vector<std::pair<double, Mat>> roots;
    int total = 0;
    for (const auto& r : detect_crossings(P)) {
        if (r.t0 > 2.0 * std::numbers::pi - 1e-9) continue;
        Mat x = orthonormalize(r.form.basis.topRows(2 * n));
        if (x.cols() != r.mult) throw InputError("boundary frame: degenerate eigenvector data");
        roots.emplace_back(r.t0, x);
        total += r.mult;
    }
    if (total != 2 * n) throw RefinementError("boundary eigenvalue search found " + std::to_string(total) + " branches");

    Discretization D;
    D.n = n;
    D.T = T;
    D.N = N;
    D.L = L;
    std::vector<std::pair<double, Vec>> modes;
    for (int k = -N / 2; k < N - N / 2; ++k)
        for (const auto& [theta, x] : roots)
            for (int j = 0; j < x.cols(); ++j) modes.emplace_back((theta + 2.0 * std::numbers::pi * k) / T, x.col(j));
    std::stable_sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const int M = static_cast<int>(modes.size());
    D.lambda.resize(M);
    D.X.resize(2 * n, M);
    for (int i = 0; i < M; ++i) {
        D.lambda(i) = modes[i].first;
        D.X.col(i) = modes[i].second;
    }

    using Gauss = boost::math::quadrature::gauss<double, 10>;
    std::vector<double> xs, ws;
    for (size_t i = 0; i < Gauss::abscissa().size(); ++i) {
        double a = Gauss::abscissa()[i], w = Gauss::weights()[i];
        xs.push_back(a);
        ws.push_back(w);
        if (a != 0.0) xs.push_back(-a), ws.push_back(w);
    }
    const int panels = 2 * N + 16;
    const double h = T / panels;
    for (int p = 0; p < panels; ++p)
        for (size_t i = 0; i < xs.size(); ++i) {
            D.quad_t.push_back((p + 0.5 + 0.5 * xs[i]) * h);
            D.quad_w.push_back(0.5 * h * ws[i]);
        }
    return D;
}

Mat discretize(const MatFn& C, const Mat& L, double T, int N) {
    Discretization D = make_discretization(static_cast<int>(L.rows()) / 4, T, L, N);
    Mat K = Mat(D.lambda.asDiagonal()) - D.potential(C);
    return 0.5 * (K + K.transpose());
}

OperatorPath scaled_path(const HamiltonianCoefficientPath& B, const Mat& L) {
    OperatorPath p;
    p.n = B.n;
    p.T = B.T;
    p.L = L;
    p.components = {B.B};
    p.weights = [](double s) { return Vec::Constant(1, s); };
    return p;
}

int negative_count(const Mat& A, double shift) {
    Mat S = A + shift * Mat::Identity(A.rows(), A.cols());
    Eigen::LDLT<Mat> ldlt(0.5 * (S + S.transpose()));
    const Vec d = ldlt.vectorD();
    int neg = 0;
    for (int i = 0; i < d.size(); ++i) neg += d(i) < 0.0;
    return neg;
}

namespace {

bool track_once(const std::function<Mat(double)>& A, double s0, double s1, const SpectralFlowOptions& opt, double delta,
                SpectralFlowResult& out) {
    EigenTrack tr;
    std::vector<Vec> full;
    std::vector<Mat> mats;
    const int G = std::max(opt.grid, 2);
    for (int k = 0; k < G; ++k) {
        double s = s0 + (s1 - s0) * k / (G - 1);
        Mat M = A(s);
        M = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
        tr.s.push_back(s);
        full.push_back(es.eigenvalues().array() + delta);
        mats.push_back(std::move(M));
    }
    auto neg = [](const Vec& v) {
        int c = 0;
        for (int i = 0; i < v.size(); ++i) c += v(i) < 0.0;
        return c;
    };
    // endpoints must be invertible after the shift
    for (const Vec* v : {&full.front(), &full.back()})
        if (v->cwiseAbs().minCoeff() < 0.1 * delta) return false;

    const int size = static_cast<int>(full.front().size());
    const int K = std::min(opt.K, size);
    for (int k = 0; k < G; ++k) {
        int off = std::clamp(neg(full[k]) - K / 2, 0, size - K);
        tr.band_offset.push_back(off);
        tr.values.push_back(full[k].segment(off, K));
        if (full[k].cwiseAbs().minCoeff() < 1e-3 * delta) return false;
    }
    for (int k = 0; k + 1 < G; ++k) {
        // ordered eigenvalues move by at most the norm of the increment
        double bound = (mats[k + 1] - mats[k]).norm() * (1.0 + 1e-8) + 1e-12;
        if (max_abs(full[k + 1] - full[k]) > bound)
            throw RefinementError("spectral flow: eigenvalue bands could not be matched");
        int n0 = neg(full[k]), n1 = neg(full[k + 1]);
        if (std::abs(n0 - n1) > K / 2) throw RefinementError("spectral flow: too many crossings in one parameter step");
        for (int b = std::min(n0, n1); b < std::max(n0, n1); ++b) {
            double v0 = full[k](b), v1 = full[k + 1](b);
            double w = (v0 != v1) ? v0 / (v0 - v1) : 0.5;
            tr.crossings.push_back({tr.s[k] + std::clamp(w, 0.0, 1.0) * (tr.s[k + 1] - tr.s[k]), n0 > n1 ? 1 : -1});
        }
    }
    out.value = 0;
    for (const auto& c : tr.crossings) out.value += c.sign;
    out.delta = delta;
    out.negative_start = neg(full.front());
    out.negative_end = neg(full.back());
    out.track = std::move(tr);
    return true;
}

}  // namespace

SpectralFlowResult matrix_spectral_flow(const std::function<Mat(double)>& A, double s0, double s1,
                                        const SpectralFlowOptions& opt) {
    SpectralFlowResult r;
    for (double delta : opt.deltas)
        if (track_once(A, s0, s1, opt, delta, r)) {
            r.value_refined = r.value;
            r.converged = true;
            return r;
        }
    throw RefinementError("spectral flow: endpoint kernel not removable by the shift");
}

namespace {

struct PathMatrices {
    Discretization D;
    std::vector<Mat> G;
};

PathMatrices assemble(int n, double T, const Mat& L, const std::vector<MatFn>& comps, int N) {
    PathMatrices pm{make_discretization(n, T, L, N), {}};
    for (const auto& c : comps) pm.G.push_back(pm.D.potential(c));
    return pm;
}

std::function<Mat(double)> family(const PathMatrices& pm, std::function<Vec(double)> weights) {
    return [&pm, weights = std::move(weights)](double s) {
        Vec w = weights(s);
        if (w.size() != static_cast<int>(pm.G.size())) throw InputError("operator path weights have the wrong size");
        Mat K = Mat(pm.D.lambda.asDiagonal());
        for (size_t k = 0; k < pm.G.size(); ++k) K -= w(k) * pm.G[k];
        return K;
    };
}

}  // namespace

SpectralFlowResult spectral_flow(const OperatorPath& path, const SpectralFlowOptions& opt) {
    if (path.components.empty() || !path.weights) throw InputError("operator path has no coefficients");
    int N = opt.N;
    PathMatrices cur = assemble(path.n, path.T, path.L, path.components, N);
    SpectralFlowResult r = matrix_spectral_flow(family(cur, path.weights), path.s0, path.s1, opt);
    if (!opt.gate) return r;
    for (int level = 0; level < 3; ++level) {
        PathMatrices fine = assemble(path.n, path.T, path.L, path.components, 2 * N);
        SpectralFlowResult rf = matrix_spectral_flow(family(fine, path.weights), path.s0, path.s1, opt);
        if (rf.value == r.value) {
            r.value_refined = rf.value;
            r.converged = true;
            return r;
        }
        r = rf;
        N *= 2;
    }
    r.converged = false;
    throw RefinementError("spectral flow did not stabilize under grid doubling");
}

ComparisonFlowResult comparison_flow(const HamiltonianCoefficientPath& B1, const HamiltonianCoefficientPath& B2,
                                     const Mat& L, const SpectralFlowOptions& opt) {
    B1.validate();
    B2.validate();
    if (B1.n != B2.n || std::abs(B1.T - B2.T) > 1e-14) throw InputError("comparison: coefficient paths differ in shape");
    for (int k = 0; k <= 64; ++k) {
        double t = B1.T * k / 64.0;
        Eigen::SelfAdjointEigenSolver<Mat> es(B2(t) - B1(t), Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -1e-12)
            throw PreconditionError("comparison: B1(t) <= B2(t) fails at t = " + std::to_string(t));
    }
    const std::vector<MatFn> comps{B1.B, B2.B};
    auto edge1 = [](double r) { Vec w(2); w << r, 0.0; return w; };
    auto edge2 = [](double r) { Vec w(2); w << 0.0, r; return w; };
    auto top = [](double s) { Vec w(2); w << 1.0 - s, s; return w; };

    ComparisonFlowResult out;
    int N = opt.N;
    std::array<int, 3> prev{};
    for (int level = 0; level < 4; ++level, N *= 2) {
        PathMatrices pm = assemble(B1.n, B1.T, L, comps, N);
        std::array<int, 3> v{matrix_spectral_flow(family(pm, edge1), 0.0, 1.0, opt).value,
                             matrix_spectral_flow(family(pm, edge2), 0.0, 1.0, opt).value,
                             matrix_spectral_flow(family(pm, top), 0.0, 1.0, opt).value};
        if (level > 0 && v == prev) {
            out.converged = true;
            break;
        }
        prev = v;
        if (!opt.gate) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) throw RefinementError("comparison flows did not stabilize under grid doubling");
    out.spfl1 = prev[0];
    out.spfl2 = prev[1];
    out.spfl_top = prev[2];
    out.additive = out.spfl1 + out.spfl_top == out.spfl2;
    out.ordered_flows = out.spfl2 <= out.spfl1;

    const SymplecticSpace sp = standard_space(B1.n);
    out.clm1 = graph_index(sp, L, integrate_fundamental(B1, default_steps(B1)), 512).int_value();
    out.clm2 = graph_index(sp, L, integrate_fundamental(B2, default_steps(B2)), 512).int_value();
    out.ordered_clm = out.clm1 <= out.clm2;
    return out;
}

RelativeMorseResult relative_morse_check(const std::function<Mat(double)>& A, double s0, double s1,
                                         const SpectralFlowOptions& opt) {
    SpectralFlowResult sf = matrix_spectral_flow(A, s0, s1, opt);
    RelativeMorseResult r;
    r.spfl = sf.value;
    r.morse_start = negative_count(A(s0), sf.delta);
    r.morse_end = negative_count(A(s1), sf.delta);
    r.holds = -r.spfl == r.morse_end - r.morse_start;
    return r;
}

}  // namespace sympsturm
