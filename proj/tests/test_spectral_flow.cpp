#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sympsturm/spectral_flow.hpp"

#include <random>

using namespace sympsturm;
using oracle::pi;

namespace {

Mat dirichlet_frame(int n) { return boundary_lagrangian(BoundaryCondition::dirichlet(n)); }

Mat random_boundary(int n, std::uint64_t seed) { return random_lagrangian(double_space(standard_space(n)), seed); }

}  // namespace

TEST_CASE("discretization of the free operator") {
    const double T = 2.0;
    auto D = make_discretization(1, T, dirichlet_frame(1), 16);
    // -J0 d/dt with q(0) = q(T) = 0 has spectrum k pi / T, k in Z
    int near = 0;
    for (int i = 0; i < D.size(); ++i) {
        double k = D.lambda(i) * T / pi;
        CHECK(std::abs(k - std::round(k)) < 1e-9);
        near += std::abs(D.lambda(i)) < 5.5 * pi / T;
    }
    CHECK(near == 11);
    Mat K = discretize([](double) { return Mat(Mat::Zero(2, 2)); }, dirichlet_frame(1), T, 16);
    CHECK((K - K.transpose()).norm() == 0.0);
}

TEST_CASE("discretized operators are symmetric") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int n = 1 + seed % 2;
        Mat C0 = random_symmetric(2 * n, seed), C1 = random_symmetric(2 * n, seed + 99);
        auto C = [C0, C1](double t) { return Mat(C0 + std::sin(t) * C1); };
        Mat K = discretize(C, random_boundary(n, seed), 1.5, 8);
        CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("low eigenvalues converge under refinement") {
    Mat C0 = random_symmetric(2, 5);
    auto C = [C0](double t) { return Mat(C0 * std::cos(t)); };
    auto low = [&](int N) {
        Mat K = discretize(C, dirichlet_frame(1), 2.0, N);
        Eigen::SelfAdjointEigenSolver<Mat> es(K, Eigen::EigenvaluesOnly);
        std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
        return std::vector<double>(v.begin(), v.begin() + 4);
    };
    auto a = low(16), b = low(32), c = low(64);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(c[i] - b[i]) <= std::abs(b[i] - a[i]) + 1e-12);
}

TEST_CASE("spectral flow of explicit paths") {
    auto constant = [](double) {
        Mat A(2, 2);
        A << 2.0, 1.0, 1.0, -3.0;
        return A;
    };
    CHECK(matrix_spectral_flow(constant, 0.0, 1.0).value == 0);
    auto down = [](double s) {
        Mat A = Mat::Identity(2, 2);
        A(0, 0) = 1.0 - 2.0 * s;
        return A;
    };
    auto r = relative_morse_check(down, 0.0, 1.0);
    CHECK(r.spfl == -1);
    CHECK(r.morse_end - r.morse_start == 1);
    CHECK(r.holds);
    auto positive = [](double s) { return Mat((1.0 + s) * Mat::Identity(3, 3)); };
    auto p = relative_morse_check(positive, 0.0, 1.0);
    CHECK(p.spfl == 0);
    CHECK(p.morse_start == 0);
    CHECK(p.morse_end == 0);
}

TEST_CASE("relative Morse index on random families") {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int k = 4 + static_cast<int>(seed % 37);
        Mat A0 = random_symmetric(k, seed), A1 = random_symmetric(k, seed + 500);
        auto A = [A0, A1](double s) { return Mat(A0 + s * A1); };
        auto r = relative_morse_check(A, 0.0, 1.0);
        CHECK(r.holds);
        CHECK(r.spfl == oracle::negative_eigenvalues(A0) - oracle::negative_eigenvalues(A0 + A1));
    }
}

TEST_CASE("scaling path drags the free spectrum") {
    // -J0 d/dt - s Id on [0, pi] with q(0) = q(pi) = 0: eigenvalues k - s
    OperatorPath path;
    path.n = 1;
    path.T = pi;
    path.L = dirichlet_frame(1);
    path.components = {[](double) { return Mat(Mat::Identity(2, 2)); }};
    path.weights = [](double s) { return Vec::Constant(1, s); };
    path.s1 = 2.5;
    // eigenvalues 0, 1, 2 move from the shifted positive side to negative
    CHECK(spectral_flow(path).value == -3);
    path.s1 = 0.5;
    CHECK(spectral_flow(path).value == -1);
}

TEST_CASE("comparison of flows") {
    auto B = constant_hamiltonian(Mat::Identity(2, 2), 3.0);
    auto cmp = comparison_flow(B, B, dirichlet_frame(1));
    CHECK(cmp.spfl1 == cmp.spfl2);
    CHECK(cmp.clm1 == cmp.clm2);
    CHECK(cmp.spfl_top == 0);
    Mat b2 = Mat::Identity(2, 2);
    b2(1, 1) = 2.0;
    auto cmp2 = comparison_flow(B, constant_hamiltonian(b2, 3.0), dirichlet_frame(1));
    CHECK(cmp2.additive);
    CHECK(cmp2.ordered_clm);
    CHECK(cmp2.ordered_flows);
    CHECK_THROWS_AS(comparison_flow(constant_hamiltonian(b2, 3.0), B, dirichlet_frame(1)), PreconditionError);
}
