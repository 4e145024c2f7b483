#pragma once

// Reference values computed without the index engine.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace oracle {

using Mat = Eigen::MatrixXd;

constexpr double pi = std::numbers::pi;

inline Mat J0(int n) {
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return J;
}

// e^{tJ0} = cos t Id + sin t J0.
inline Mat rotation(int n, double t) { return std::cos(t) * Mat::Identity(2 * n, 2 * n) + std::sin(t) * J0(n); }

// exp(t J0 B) for a constant symmetric B.
inline Mat autonomous_flow(const Mat& B, double t) {
    const int n = static_cast<int>(B.rows()) / 2;
    return Mat(t * J0(n) * B).exp();
}

// e^{tJ0} L_D meets L_D at t = k pi, each time with positive crossing form:
// the start counts, the end does not.
inline int rotation_clm(double a, double b) {
    int count = 0;
    for (int k = static_cast<int>(std::ceil(a / pi - 1e-12)); k * pi < b - 1e-12; ++k) ++count;
    return count;
}

// -u'' - w^2 u on [0, T] with u(0) = u(T) = 0: eigenvalues (k pi / T)^2 - w^2.
inline int dirichlet_sturm_morse(double w, double T) {
    int count = 0;
    for (int k = 1; k * pi / T < w; ++k) ++count;
    return count;
}

// Zeros of sin(w t) in (0, T).
inline int sine_zeros(double w, double T) {
    int count = 0;
    for (int k = 1; k * pi / w < T - 1e-12; ++k) ++count;
    return count;
}

inline int negative_eigenvalues(const Mat& S, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    int count = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) count += es.eigenvalues()(i) < -tol;
    return count;
}

inline int rank(const Mat& A, double tol = 1e-9) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& s = svd.singularValues();
    int r = 0;
    for (int i = 0; i < s.size(); ++i) r += s(i) > tol * std::max(1.0, s(0));
    return r;
}

// dim(L1 cap L2) = dim L1 + dim L2 - rank [L1 | L2].
inline int intersection_dim(const Mat& L1, const Mat& L2) {
    Mat M(L1.rows(), L1.cols() + L2.cols());
    M << L1, L2;
    return static_cast<int>(L1.cols() + L2.cols()) - rank(M);
}

// Kepler Jacobi metric curvature for h < 0 evaluated in closed form.
inline double kepler_curvature(double h, double r) { return -h / (4.0 * std::pow(1.0 + r * h, 3)); }

// Period of the Kepler orbit of energy h < 0 with mu = 1.
inline double kepler_period(double h) { return 2.0 * pi * std::pow(-1.0 / (2.0 * h), 1.5); }

}  // namespace oracle
