#include "sympsturm/hamiltonian_flows.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

namespace sympsturm {

namespace {

void require_square(const Mat& M, int k, const char* what) {
    if (M.rows() != k || M.cols() != k)
        throw InputError(std::string(what) + " must be " + std::to_string(k) + "x" + std::to_string(k));
    if (!M.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

void require_symmetric(const Mat& M, const char* what, double tol = 1e-12) {
    if (max_abs(M - M.transpose()) > tol * std::max(1.0, max_abs(M)))
        throw InputError(std::string(what) + " is not symmetric");
}

double sample_time(double T, int k, int samples) { return T * k / (samples - 1); }

}  // namespace

void HamiltonianCoefficientPath::validate(int samples) const {
    if (n < 1) throw InputError("Hamiltonian path: n must be positive");
    if (!(T > 0.0)) throw InputError("Hamiltonian path: T must be positive");
    if (!B) throw InputError("Hamiltonian path: missing B");
    for (int k = 0; k < samples; ++k) {
        Mat M = B(sample_time(T, k, samples));
        require_square(M, 2 * n, "B(t)");
        require_symmetric(M, "B(t)");
    }
}

HamiltonianCoefficientPath constant_hamiltonian(const Mat& B, double T) {
    HamiltonianCoefficientPath h;
    h.n = static_cast<int>(B.rows()) / 2;
    h.T = T;
    h.B = [B](double) { return B; };
    h.validate(2);
    return h;
}

void MorseSturmSystem::validate(int samples) const {
    if (n < 1) throw InputError("Morse-Sturm system: n must be positive");
    if (!(T > 0.0)) throw InputError("Morse-Sturm system: T must be positive");
    if (!P || !Q || !R) throw InputError("Morse-Sturm system: missing coefficient");
    for (int k = 0; k < samples; ++k) {
        double t = sample_time(T, k, samples);
        Mat p = P(t), q = Q(t), r = R(t);
        require_square(p, n, "P(t)");
        require_square(q, n, "Q(t)");
        require_square(r, n, "R(t)");
        require_symmetric(p, "P(t)");
        require_symmetric(r, "R(t)");
        Eigen::SelfAdjointEigenSolver<Mat> es(p, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) <= 0.0)
            throw InputError("P(t) is not positive definite at t = " + std::to_string(t));
    }
}

BoundaryCondition BoundaryCondition::dirichlet(int n) {
    BoundaryCondition z;
    z.kind = Kind::Dirichlet;
    z.n = n;
    z.basis = Mat(2 * n, 0);
    z.Z1 = Mat(n, 0);
    z.Z2 = Mat(n, 0);
    return z;
}

BoundaryCondition BoundaryCondition::neumann(int n) {
    BoundaryCondition z;
    z.kind = Kind::Neumann;
    z.n = n;
    z.basis = Mat::Identity(2 * n, 2 * n);
    z.Z1 = Mat::Identity(n, n);
    z.Z2 = Mat::Identity(n, n);
    return z;
}

BoundaryCondition BoundaryCondition::periodic(int n) {
    BoundaryCondition z;
    z.kind = Kind::Periodic;
    z.n = n;
    z.basis = Mat(2 * n, n);
    z.basis << Mat::Identity(n, n), Mat::Identity(n, n);
    z.basis /= std::sqrt(2.0);
    return z;
}

BoundaryCondition BoundaryCondition::separated(const Mat& Z1, const Mat& Z2) {
    if (Z1.rows() != Z2.rows() || Z1.rows() < 1) throw InputError("separated boundary: factors must live in the same R^n");
    BoundaryCondition z;
    z.kind = Kind::Separated;
    z.n = static_cast<int>(Z1.rows());
    z.Z1 = orthonormalize(Z1);
    z.Z2 = orthonormalize(Z2);
    if (z.Z1.cols() != Z1.cols() || z.Z2.cols() != Z2.cols()) throw InputError("separated boundary: rank deficient basis");
    z.basis = Mat::Zero(2 * z.n, z.Z1.cols() + z.Z2.cols());
    z.basis.topLeftCorner(z.n, z.Z1.cols()) = z.Z1;
    z.basis.bottomRightCorner(z.n, z.Z2.cols()) = z.Z2;
    return z;
}

BoundaryCondition BoundaryCondition::general(const Mat& basis) {
    if (basis.rows() % 2 != 0 || basis.rows() < 2) throw InputError("boundary basis must have 2n rows");
    BoundaryCondition z;
    z.kind = Kind::General;
    z.n = static_cast<int>(basis.rows()) / 2;
    z.basis = orthonormalize(basis);
    if (z.basis.cols() != basis.cols()) throw InputError("boundary basis is rank deficient");
    return z;
}

Mat BoundaryCondition::orthogonal_complement() const { return null_space(basis.transpose()); }

std::string to_string(BoundaryCondition::Kind k) {
    switch (k) {
        case BoundaryCondition::Kind::Dirichlet: return "dirichlet";
        case BoundaryCondition::Kind::Neumann: return "neumann";
        case BoundaryCondition::Kind::Periodic: return "periodic";
        case BoundaryCondition::Kind::Separated: return "separated";
        case BoundaryCondition::Kind::General: return "general";
    }
    return "?";
}

FundamentalSolution::FundamentalSolution(HamiltonianCoefficientPath B, int N) : B_(std::move(B)), N_(N) {
    if (N < 2) throw InputError("fundamental solution needs at least 2 steps");
    B_.validate();
    h_ = B_.T / N_;
    J_ = J0(B_.n);
    const Mat Om = J_.transpose();
    psi_.reserve(N_ + 1);
    psi_.push_back(Mat::Identity(2 * B_.n, 2 * B_.n));
    for (int k = 0; k < N_; ++k) {
        psi_.push_back(step(k * h_, h_) * psi_.back());
        const Mat& P = psi_.back();
        double d = max_abs(P.transpose() * Om * P - Om) / std::max(1.0, P.squaredNorm());
        defect_ = std::max(defect_, d);
    }
    if (defect_ > 1e-9) throw RefinementError("fundamental solution lost symplecticity; increase the step count");
}

// Fourth order Magnus step exp(Omega(t0, t0 + h)).
Mat FundamentalSolution::step(double t0, double h) const {
    if (h == 0.0) return Mat::Identity(2 * B_.n, 2 * B_.n);
    const double c = std::sqrt(3.0) / 6.0;
    Mat A1 = J_ * B_(t0 + (0.5 - c) * h);
    Mat A2 = J_ * B_(t0 + (0.5 + c) * h);
    Mat Om = 0.5 * h * (A1 + A2) + (std::sqrt(3.0) / 12.0) * h * h * (A2 * A1 - A1 * A2);
    return Om.exp();
}

Mat FundamentalSolution::value(double t) const {
    if (t <= 0.0) return psi_.front();
    if (t >= B_.T) return psi_.back();
    int k = std::min(N_ - 1, static_cast<int>(std::floor(t / h_)));
    double t0 = k * h_;
    return step(t0, t - t0) * psi_[k];
}

Mat FundamentalSolution::derivative(double t) const { return J_ * B_(std::clamp(t, 0.0, B_.T)) * value(t); }

double FundamentalSolution::richardson_error() const {
    FundamentalSolution fine(B_, 2 * N_);
    double err = 0.0;
    for (int k = 0; k <= N_; ++k)
        err = std::max(err, max_abs(fine.samples()[2 * k] - psi_[k]) / std::max(1.0, psi_[k].norm()));
    return err;
}

FundamentalPtr integrate_fundamental(const HamiltonianCoefficientPath& B, int N) {
    return std::make_shared<FundamentalSolution>(B, N);
}

int default_steps(const HamiltonianCoefficientPath& B) {
    double m = 0.0;
    for (int k = 0; k < 33; ++k) m = std::max(m, B(sample_time(B.T, k, 33)).norm());
    double steps = 100.0 * B.T * std::max(1.0, m);
    return static_cast<int>(std::clamp(steps, 200.0, 40000.0));
}

HamiltonianCoefficientPath morse_sturm_to_hamiltonian(const MorseSturmSystem& ms) {
    ms.validate();
    HamiltonianCoefficientPath h;
    h.n = ms.n;
    h.T = ms.T;
    auto P = ms.P, Q = ms.Q, R = ms.R;
    const int n = ms.n;
    h.B = [P, Q, R, n](double t) {
        Mat p = P(t), q = Q(t), r = R(t);
        auto lu = p.partialPivLu();
        Mat Pi = lu.inverse();
        Mat PiQ = lu.solve(q);
        Mat B(2 * n, 2 * n);
        B.topLeftCorner(n, n) = Pi;
        B.topRightCorner(n, n) = -PiQ;
        B.bottomLeftCorner(n, n) = -PiQ.transpose();
        B.bottomRightCorner(n, n) = q.transpose() * PiQ - r;
        return Mat(0.5 * (B + B.transpose()));
    };
    return h;
}

Mat boundary_lagrangian(const BoundaryCondition& Z) {
    const int n = Z.n;
    Mat Zp = Z.orthogonal_complement();
    Mat L = Mat::Zero(4 * n, 2 * n);
    if (Z.basis.cols() + Zp.cols() != 2 * n) throw InputError("boundary subspace and its complement do not span");
    int col = 0;
    for (int j = 0; j < Z.basis.cols(); ++j, ++col) {
        L.block(n, col, n, 1) = Z.basis.col(j).head(n);
        L.block(3 * n, col, n, 1) = Z.basis.col(j).tail(n);
    }
    for (int j = 0; j < Zp.cols(); ++j, ++col) {
        L.block(0, col, n, 1) = Zp.col(j).head(n);
        L.block(2 * n, col, n, 1) = -Zp.col(j).tail(n);
    }
    return L;
}

int c_of_Z(const BoundaryCondition& Z) {
    switch (Z.kind) {
        case BoundaryCondition::Kind::Dirichlet: return Z.n;
        case BoundaryCondition::Kind::Neumann: return 0;
        case BoundaryCondition::Kind::Periodic: return Z.n;
        case BoundaryCondition::Kind::Separated: {
            Mat A = null_space(Z.Z1.transpose()), B = null_space(Z.Z2.transpose());
            return static_cast<int>(subspace_intersection(A, B).cols());
        }
        case BoundaryCondition::Kind::General: break;
    }
    throw UnsupportedError("c(Z) is only available for Dirichlet, Neumann, periodic and separated conditions");
}

namespace {

int fem_negative_count(const MorseSturmSystem& ms, const BoundaryCondition& Z, int N) {
    using Sp = Eigen::SparseMatrix<double>;
    using Tr = Eigen::Triplet<double>;
    const int n = ms.n;
    const double h = ms.T / N;
    const double g = 0.5 / std::sqrt(3.0);
    std::vector<Tr> kt;
    for (int e = 0; e < N; ++e) {
        Mat Ke = Mat::Zero(2 * n, 2 * n);
        for (double s : {0.5 - g, 0.5 + g}) {
            double t = (e + s) * h;
            Mat P = ms.P(t), Q = ms.Q(t), R = ms.R(t);
            const double phi[2] = {1.0 - s, s};
            const double dphi[2] = {-1.0 / h, 1.0 / h};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    Ke.block(a * n, b * n, n, n) += 0.5 * h *
                                                    (dphi[a] * dphi[b] * P + phi[a] * dphi[b] * Q.transpose() +
                                                     dphi[a] * phi[b] * Q + phi[a] * phi[b] * R);
        }
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) kt.emplace_back(e * n + i, e * n + j, Ke(i, j));
    }
    const int full = (N + 1) * n;
    Sp K(full, full);
    K.setFromTriplets(kt.begin(), kt.end());

    const int zdim = static_cast<int>(Z.basis.cols());
    const int red = (N - 1) * n + zdim;
    std::vector<Tr> et;
    for (int i = 0; i < (N - 1) * n; ++i) et.emplace_back(n + i, i, 1.0);
    for (int j = 0; j < zdim; ++j)
        for (int c = 0; c < n; ++c) {
            if (Z.basis(c, j) != 0.0) et.emplace_back(c, (N - 1) * n + j, Z.basis(c, j));
            if (Z.basis(n + c, j) != 0.0) et.emplace_back(N * n + c, (N - 1) * n + j, Z.basis(n + c, j));
        }
    Sp E(full, red);
    E.setFromTriplets(et.begin(), et.end());
    Sp Kr = Sp(E.transpose()) * K * E;

    auto count = [](const Sp& A, int& neg) {
        Eigen::SimplicialLDLT<Sp> ldlt(A);
        if (ldlt.info() != Eigen::Success) return false;
        Vec D = ldlt.vectorD();
        double dmax = max_abs(D);
        neg = 0;
        for (int i = 0; i < D.size(); ++i) {
            if (std::abs(D(i)) <= 1e-13 * dmax) return false;
            neg += D(i) < 0.0;
        }
        return true;
    };
    int neg = 0;
    if (count(Kr, neg)) return neg;
    // a kernel of the form is not part of the index: shift by a small multiple of the lumped mass
    for (double sigma : {1e-8, 1e-6}) {
        Sp I(red, red);
        I.setIdentity();
        if (count(Sp(Kr + (sigma * h) * I), neg)) return neg;
    }
    throw RefinementError("index form is singular at this grid");
}

}  // namespace

MorseIndexResult discrete_morse_index(const MorseSturmSystem& ms, const BoundaryCondition& Z, int N0, int max_N) {
    ms.validate();
    if (Z.n != ms.n) throw InputError("boundary condition dimension does not match the system");
    if (N0 < 2) throw InputError("initial grid must have at least 2 cells");
    MorseIndexResult r;
    for (int N = N0; N <= max_N; N *= 2) {
        r.history.push_back(fem_negative_count(ms, Z, N));
        r.N = N;
        const size_t m = r.history.size();
        if (m >= 3 && r.history[m - 1] == r.history[m - 2] && r.history[m - 2] == r.history[m - 3]) {
            r.index = r.history.back();
            return r;
        }
    }
    throw RefinementError("Morse index count did not stabilize up to N = " + std::to_string(max_N));
}

IndexReport maslov_index(const MorseSturmSystem& ms, const BoundaryCondition& Z, int steps, int grid,
                         const EngineOptions& opt) {
    HamiltonianCoefficientPath B = morse_sturm_to_hamiltonian(ms);
    if (steps <= 0) steps = default_steps(B);
    if (grid <= 0) grid = std::max(256, steps / 4);
    auto psi = integrate_fundamental(B, steps);
    return graph_index(standard_space(ms.n), boundary_lagrangian(Z), psi, grid, opt);
}

MorseSturmSystem random_morse_sturm(int n, double T, std::uint64_t seed, double strength) {
    std::mt19937_64 rng(seed);
    auto draw = [&](int k) {
        std::normal_distribution<double> N(0.0, 1.0);
        Mat A(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) A(i, j) = N(rng);
        return A;
    };
    Mat L0 = 0.4 * draw(n), L1 = 0.2 * draw(n);
    Mat Q0 = 0.5 * strength * draw(n), Q1 = 0.5 * strength * draw(n);
    Mat A0 = draw(n), A1 = draw(n);
    Mat R0 = strength * (0.5 * (A0 + A0.transpose()) - 1.5 * Mat::Identity(n, n));
    Mat R1 = 0.5 * strength * (A1 + A1.transpose());
    MorseSturmSystem ms;
    ms.n = n;
    ms.T = T;
    ms.P = [L0, L1, n, T](double t) {
        Mat L = L0 + (t / T) * L1;
        return Mat(Mat::Identity(n, n) + L * L.transpose());
    };
    ms.Q = [Q0, Q1](double t) { return Mat(Q0 + std::sin(t) * Q1); };
    ms.R = [R0, R1](double t) { return Mat(R0 + std::cos(t) * R1); };
    return ms;
}

HamiltonianCoefficientPath random_hamiltonian(int n, double T, std::uint64_t seed, double scale) {
    Mat B0 = random_symmetric(2 * n, seed * 3 + 1, scale);
    Mat B1 = random_symmetric(2 * n, seed * 3 + 2, scale);
    Mat B2 = random_symmetric(2 * n, seed * 3 + 3, scale);
    HamiltonianCoefficientPath h;
    h.n = n;
    h.T = T;
    h.B = [B0, B1, B2, T](double t) { return Mat(B0 + (t / T) * B1 + std::sin(t) * B2); };
    return h;
}

HamiltonianCoefficientPath natural_hamiltonian(MatFn b, MatFn a, int n, double T) {
    HamiltonianCoefficientPath h;
    h.n = n;
    h.T = T;
    h.B = [b = std::move(b), a = std::move(a), n](double t) {
        Mat B = Mat::Zero(2 * n, 2 * n);
        B.topLeftCorner(n, n) = b(t);
        B.bottomRightCorner(n, n) = a(t);
        return B;
    };
    return h;
}

}  // namespace sympsturm
