#include "sympsturm/symplectic_core.hpp"

#include <cstdio>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <complex>
#include <random>

namespace sympsturm {

namespace {

Eigen::JacobiSVD<Mat> full_svd(const Mat& A) { return Eigen::JacobiSVD<Mat>(A, Eigen::ComputeFullU | Eigen::ComputeFullV); }

bool lex_less(const Mat& A, const Mat& B) {
    if (A.rows() != B.rows()) return A.rows() < B.rows();
    if (A.cols() != B.cols()) return A.cols() < B.cols();
    return std::lexicographical_compare(A.data(), A.data() + A.size(), B.data(), B.data() + B.size());
}

}  // namespace

Mat J0(int n) {
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return J;
}

SymplecticSpace standard_space(int n) {
    if (n < 1) throw InputError("standard_space: n must be positive");
    SymplecticSpace s;
    s.J = J0(n);
    s.form = s.J.transpose();
    return s;
}

SymplecticSpace make_space(const Mat& form) {
    if (form.rows() != form.cols() || form.rows() == 0 || form.rows() % 2 != 0)
        throw InputError("symplectic form must be a square matrix of even positive size");
    if (max_abs(form + form.transpose()) > 1e-12)
        throw InputError("symplectic form is not antisymmetric");
    Eigen::JacobiSVD<Mat> svd(form.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    if (s(s.size() - 1) <= 1e-12 * s(0)) throw InputError("symplectic form is degenerate");
    SymplecticSpace out;
    out.form = form;
    out.J = svd.matrixU() * svd.matrixV().transpose();
    if (max_abs(out.J * out.J + Mat::Identity(form.rows(), form.rows())) > 1e-10)
        throw InputError("could not build a compatible complex structure");
    return out;
}

SymplecticSpace double_space(const SymplecticSpace& space) {
    const int d = space.dim();
    SymplecticSpace out;
    out.form = Mat::Zero(2 * d, 2 * d);
    out.form.topLeftCorner(d, d) = -space.form;
    out.form.bottomRightCorner(d, d) = space.form;
    out.J = Mat::Zero(2 * d, 2 * d);
    out.J.topLeftCorner(d, d) = -space.J;
    out.J.bottomRightCorner(d, d) = space.J;
    return out;
}

Mat frame_LD(int n) {
    Mat F = Mat::Zero(2 * n, n);
    F.topRows(n) = Mat::Identity(n, n);
    return F;
}

Mat frame_LN(int n) {
    Mat F = Mat::Zero(2 * n, n);
    F.bottomRows(n) = Mat::Identity(n, n);
    return F;
}

Mat diagonal_frame(int dim) {
    Mat F(2 * dim, dim);
    F << Mat::Identity(dim, dim), Mat::Identity(dim, dim);
    return F;
}

Mat antidiagonal_frame(int dim) {
    Mat F(2 * dim, dim);
    F << Mat::Identity(dim, dim), -Mat::Identity(dim, dim);
    return F;
}

Mat orthonormalize(const Mat& A, double tol) {
    if (A.cols() == 0) return Mat(A.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
    const Vec& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return Mat(A.rows(), 0);
    int r = 0;
    while (r < s.size() && s(r) > tol * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& A, double tol) {
    const int c = static_cast<int>(A.cols());
    if (A.rows() == 0) return Mat::Identity(c, c);
    auto svd = full_svd(A);
    const Vec& s = svd.singularValues();
    int r = 0;
    if (s.size() > 0 && s(0) > 0.0)
        while (r < s.size() && s(r) > tol * s(0)) ++r;
    return svd.matrixV().rightCols(c - r);
}

int subspace_dim(const Mat& A, double tol) { return static_cast<int>(orthonormalize(A, tol).cols()); }

Mat subspace_sum(const Mat& A, const Mat& B, double tol) {
    Mat C(A.rows(), A.cols() + B.cols());
    C << A, B;
    return orthonormalize(C, tol);
}

Mat subspace_intersection(const Mat& A, const Mat& B, double tol) {
    Mat QA = orthonormalize(A, tol), QB = orthonormalize(B, tol);
    if (QA.cols() == 0 || QB.cols() == 0) return Mat(A.rows(), 0);
    Mat C(QA.rows(), QA.cols() + QB.cols());
    C << QA, -QB;
    Mat N = null_space(C, tol);
    if (N.cols() == 0) return Mat(A.rows(), 0);
    Mat V = 0.5 * (QA * N.topRows(QA.cols()) + QB * N.bottomRows(QB.cols()));
    return orthonormalize(V, tol);
}

Mat symplectic_complement(const SymplecticSpace& space, const Mat& A, double tol) {
    if (A.cols() == 0) return Mat::Identity(space.dim(), space.dim());
    Mat QA = orthonormalize(A, tol);
    return null_space(QA.transpose() * space.form, tol);
}

LagrangianCheck is_lagrangian(const SymplecticSpace& space, const Mat& frame, double tol) {
    if (frame.rows() != space.dim() || frame.cols() != space.n())
        throw InputError("Lagrangian frame must be " + std::to_string(space.dim()) + "x" + std::to_string(space.n()) +
                         ", got " + std::to_string(frame.rows()) + "x" + std::to_string(frame.cols()));
    LagrangianCheck out;
    Eigen::JacobiSVD<Mat> svd(frame, Eigen::ComputeThinU);
    const Vec& s = svd.singularValues();
    out.min_singular_value = s(s.size() - 1);
    if (s(0) == 0.0) return out;
    const Mat& U = svd.matrixU();
    out.isotropy_defect = max_abs(U.transpose() * space.form * U) / max_abs(space.form);
    out.ok = out.min_singular_value > tol * s(0) && out.isotropy_defect <= std::max(tol, 1e-10);
    return out;
}

namespace {

std::string short_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

}  // namespace

void require_lagrangian(const SymplecticSpace& space, const Mat& frame, const char* what, double tol) {
    auto chk = is_lagrangian(space, frame, tol);
    if (!chk.ok)
        throw InputError(std::string(what) + " is not Lagrangian (isotropy defect " +
                         short_double(chk.isotropy_defect) + ", min singular value " +
                         short_double(chk.min_singular_value) + ")");
}

bool is_symplectic_matrix(const SymplecticSpace& space, const Mat& M, double tol) {
    if (M.rows() != space.dim() || M.cols() != space.dim()) return false;
    double scale = std::max(1.0, M.squaredNorm() / space.dim());
    return max_abs(M.transpose() * space.form * M - space.form) <= tol * scale;
}

Intersection intersection(const SymplecticSpace& space, const Mat& L1, const Mat& L2, double tol) {
    if (L1.rows() != space.dim() || L2.rows() != space.dim()) throw InputError("intersection: frames do not match the space");
    // Canonical leg order keeps the result bitwise symmetric in its arguments.
    const bool swap = lex_less(L2, L1);
    const Mat& A = swap ? L2 : L1;
    const Mat& B = swap ? L1 : L2;
    Mat U1 = orthonormalize(A, 1e-12), U2 = orthonormalize(B, 1e-12);
    Mat M(space.dim(), U1.cols() + U2.cols());
    M << U1, U2;
    auto svd = full_svd(M);
    Vec s = svd.singularValues();
    Intersection out;
    out.singular_values = s.reverse();
    const double top = s.size() ? s(0) : 0.0;
    int r = 0;
    while (r < s.size() && s(r) > tol * top) ++r;
    out.dim = static_cast<int>(M.cols()) - r;
    if (out.dim == 0) {
        out.basis = Mat(space.dim(), 0);
        return out;
    }
    Mat N = svd.matrixV().rightCols(out.dim);
    Mat V = 0.5 * (U1 * N.topRows(U1.cols()) - U2 * N.bottomRows(U2.cols()));
    Eigen::HouseholderQR<Mat> qr(V);
    out.basis = qr.householderQ() * Mat::Identity(V.rows(), V.cols());
    return out;
}

QuadraticForm chart_form(const SymplecticSpace& space, const Mat& L0, const Mat& L1, const Mat& L, double tol) {
    const int n = space.n();
    if (L0.cols() != n || L1.cols() != n || L.cols() != n) throw InputError("chart_form: frames must have n columns");
    if (intersection(space, L0, L1, tol).dim != 0) throw InputError("chart_form: (L0, L1) is not a Lagrangian decomposition");
    if (intersection(space, L, L1, tol).dim != 0) throw InputError("chart_form: L is not transversal to L1");
    Mat C(space.dim(), 2 * n);
    C << L0, L1;
    Mat XY = C.partialPivLu().solve(L);
    Mat X = XY.topRows(n), Y = XY.bottomRows(n);
    Mat G = L0.transpose() * space.form * L1 * Y * X.inverse();
    QuadraticForm q;
    q.basis = L0;
    q.gram = 0.5 * (G + G.transpose());
    return q;
}

Reduction symplectic_reduction(const SymplecticSpace& space, const Mat& X, const Mat& I, double tol) {
    if (I.rows() != space.dim() || X.rows() != space.dim()) throw InputError("symplectic_reduction: dimension mismatch");
    Mat QI = orthonormalize(I, tol);
    if (QI.cols() > 0 && max_abs(QI.transpose() * space.form * QI) > 1e-7)
        throw InputError("symplectic_reduction: I is not isotropic");
    Reduction out;
    if (QI.cols() == 0) {
        out.reduced = space;
        out.basis = Mat::Identity(space.dim(), space.dim());
        out.frame = X;
        return out;
    }
    Mat Iw = symplectic_complement(space, QI, tol);
    Mat Iperp = null_space(QI.transpose(), tol);
    out.basis = subspace_intersection(Iw, Iperp, tol);
    Mat f = out.basis.transpose() * space.form * out.basis;
    out.reduced = make_space(0.5 * (f - f.transpose()));
    Mat W = subspace_intersection(subspace_sum(X, QI, tol), Iw, tol);
    out.frame = orthonormalize(out.basis.transpose() * W, tol);
    return out;
}

Inertia inertia(const Mat& gram, double tol) {
    Inertia in;
    if (gram.rows() == 0) return in;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        if (l > tol) ++in.pos;
        else if (l < -tol) ++in.neg;
        else ++in.zero;
    }
    return in;
}

Inertia inertia(const QuadraticForm& q, double tol) { return inertia(q.gram, tol); }

Mat graph_lagrangian(const SymplecticSpace& space, const Mat& M, double tol) {
    if (!is_symplectic_matrix(space, M, tol)) throw InputError("graph_lagrangian: matrix is not symplectic");
    const int d = space.dim();
    Mat F(2 * d, d);
    F << Mat::Identity(d, d), M;
    return F;
}

Mat darboux_basis(const SymplecticSpace& space) {
    const int d = space.dim(), n = space.n();
    if (max_abs(space.form - J0(n).transpose()) == 0.0) return Mat::Identity(d, d);
    std::vector<Vec> pool;
    for (int i = 0; i < d; ++i) pool.push_back(Vec::Unit(d, i));
    Mat E(d, n), F(d, n);
    for (int k = 0; k < n; ++k) {
        // pick the pair with the largest pairing for stability
        int bi = 0, bj = 1;
        double best = -1.0;
        for (size_t i = 0; i < pool.size(); ++i)
            for (size_t j = i + 1; j < pool.size(); ++j) {
                double w = std::abs(space.omega(pool[i], pool[j]));
                if (w > best) best = w, bi = static_cast<int>(i), bj = static_cast<int>(j);
            }
        Vec e = pool[bi], f = pool[bj];
        double w = space.omega(e, f);
        double s = std::sqrt(std::abs(w));
        e /= s;
        f /= (w / s);
        E.col(k) = e;
        F.col(k) = f;
        std::vector<Vec> rest;
        for (size_t i = 0; i < pool.size(); ++i) {
            if (static_cast<int>(i) == bi || static_cast<int>(i) == bj) continue;
            Vec v = pool[i];
            v = v - space.omega(v, f) * e + space.omega(v, e) * f;
            rest.push_back(v);
        }
        pool = rest;
    }
    Mat D(d, d);
    D << E, F;
    return D;
}

Mat random_symmetric(int k, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Mat A(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A(i, j) = N(rng);
    return scale * 0.5 * (A + A.transpose());
}

Mat random_symplectic(int n, std::uint64_t seed, double scale) {
    Mat S = random_symmetric(2 * n, seed, scale);
    Mat H = J0(n) * S;
    return H.exp();
}

Mat random_lagrangian(const SymplecticSpace& space, std::uint64_t seed) {
    const int n = space.n();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXcd Z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Z(i, j) = std::complex<double>(N(rng), N(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::MatrixXcd U = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    Mat F(2 * n, n);
    F << U.real(), U.imag();
    return darboux_basis(space) * F;
}

Mat symplectic_inverse(const SymplecticSpace& space, const Mat& M) {
    return space.form.partialPivLu().solve(M.transpose() * space.form);
}

}  // namespace sympsturm
