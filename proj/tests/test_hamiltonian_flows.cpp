#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sympsturm/hamiltonian_flows.hpp"

using namespace sympsturm;
using oracle::pi;

namespace {

MorseSturmSystem constant_system(const Mat& P, const Mat& Q, const Mat& R, double T) {
    MorseSturmSystem ms;
    ms.n = static_cast<int>(P.rows());
    ms.T = T;
    ms.P = [P](double) { return P; };
    ms.Q = [Q](double) { return Q; };
    ms.R = [R](double) { return R; };
    return ms;
}

double max_error(const SymplecticPath& psi, const std::function<Mat(double)>& exact) {
    double e = 0.0;
    for (int k = 0; k <= 200; ++k) {
        double t = psi.t_begin() + (psi.t_end() - psi.t_begin()) * k / 200.0;
        e = std::max(e, (psi.value(t) - exact(t)).cwiseAbs().maxCoeff());
    }
    return e;
}

bool same_span(const Mat& A, const Mat& B) {
    return oracle::rank(A) == oracle::rank(B) && oracle::intersection_dim(A, B) == oracle::rank(A);
}

}  // namespace

TEST_CASE("fundamental solution of constant Hamiltonians") {
    auto zero = integrate_fundamental(constant_hamiltonian(Mat::Zero(4, 4), 3.0), 100);
    CHECK(max_error(*zero, [](double) { return Mat(Mat::Identity(4, 4)); }) < 1e-14);

    auto rot = integrate_fundamental(constant_hamiltonian(Mat::Identity(2, 2), 2.0 * pi), 2000);
    CHECK(max_error(*rot, [](double t) { return oracle::rotation(1, t); }) < 1e-9);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 1 + seed % 2;
        Mat B = random_symmetric(2 * n, seed);
        auto psi = integrate_fundamental(constant_hamiltonian(B, 2.0), 2000);
        CHECK(max_error(*psi, [B](double t) { return oracle::autonomous_flow(B, t); }) < 1e-9);
        CHECK(psi->max_symplectic_defect() < 1e-10);
    }
}

TEST_CASE("time dependent flows stay symplectic and converge") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto H = random_hamiltonian(2, 2.0, seed);
        auto psi = integrate_fundamental(H, default_steps(H));
        CHECK(is_symplectic_matrix(standard_space(2), psi->value(2.0), 1e-9));
        CHECK(psi->richardson_error() < 1e-7);
        // the derivative is J0 B psi
        const double t = 0.731;
        CHECK((psi->derivative(t) - oracle::J0(2) * H(t) * psi->value(t)).norm() < 1e-8);
    }
}

TEST_CASE("Morse-Sturm to Hamiltonian") {
    const Mat I = Mat::Identity(1, 1), Z = Mat::Zero(1, 1);
    auto free = morse_sturm_to_hamiltonian(constant_system(I, Z, Z, 1.0))(0.3);
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = 1.0;
    CHECK((free - expect).norm() < 1e-14);
    auto harmonic = morse_sturm_to_hamiltonian(constant_system(I, Z, -I, 1.0))(0.3);
    CHECK((harmonic - Mat::Identity(2, 2)).norm() < 1e-14);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto ms = random_morse_sturm(1 + seed % 3, 2.0, seed);
        Mat B = morse_sturm_to_hamiltonian(ms)(0.1 * (seed % 20));
        CHECK((B - B.transpose()).norm() < 1e-12);
    }
}

TEST_CASE("boundary Lagrangians") {
    auto s2 = double_space(standard_space(2));
    auto dir = boundary_lagrangian(BoundaryCondition::dirichlet(2));
    Mat LDLD = Mat::Zero(8, 4);
    LDLD.block(0, 0, 2, 2) = Mat::Identity(2, 2);
    LDLD.block(4, 2, 2, 2) = Mat::Identity(2, 2);
    CHECK(same_span(dir, LDLD));
    Mat LNLN = Mat::Zero(8, 4);
    LNLN.block(2, 0, 2, 2) = Mat::Identity(2, 2);
    LNLN.block(6, 2, 2, 2) = Mat::Identity(2, 2);
    CHECK(same_span(boundary_lagrangian(BoundaryCondition::neumann(2)), LNLN));
    CHECK(same_span(boundary_lagrangian(BoundaryCondition::periodic(2)), diagonal_frame(4)));
    for (auto Z : {BoundaryCondition::dirichlet(2), BoundaryCondition::neumann(2), BoundaryCondition::periodic(2),
                   BoundaryCondition::separated(Mat::Identity(2, 1), Mat::Identity(2, 2))})
        CHECK(is_lagrangian(s2, boundary_lagrangian(Z)).ok);
}

TEST_CASE("c(Z)") {
    CHECK(c_of_Z(BoundaryCondition::dirichlet(3)) == 3);
    CHECK(c_of_Z(BoundaryCondition::neumann(3)) == 0);
    CHECK(c_of_Z(BoundaryCondition::separated(Mat(3, 0), Mat::Identity(3, 3))) == 0);
    CHECK(c_of_Z(BoundaryCondition::separated(Mat::Identity(2, 1), Mat::Identity(2, 1))) == 1);
    CHECK_THROWS_AS(c_of_Z(BoundaryCondition::general(Mat::Identity(4, 2))), UnsupportedError);
}

TEST_CASE("Sturm oscillation on an interval") {
    const Mat I = Mat::Identity(1, 1), Z = Mat::Zero(1, 1);
    for (double T : {0.5 * pi, 1.5 * pi, 3.5 * pi, 5.2}) {
        auto ms = constant_system(I, Z, -I, T);
        CHECK(discrete_morse_index(ms, BoundaryCondition::dirichlet(1)).index == oracle::dirichlet_sturm_morse(1.0, T));
        CHECK(maslov_index(ms, BoundaryCondition::dirichlet(1)).int_value() ==
              oracle::dirichlet_sturm_morse(1.0, T) + 1);
    }
    CHECK(discrete_morse_index(constant_system(I, Z, -I, 3.5 * pi), BoundaryCondition::dirichlet(1)).index == 3);
    auto zero_R = constant_system(Mat::Identity(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2), 2.0);
    for (auto Zc : {BoundaryCondition::dirichlet(2), BoundaryCondition::neumann(2), BoundaryCondition::periodic(2)})
        CHECK(discrete_morse_index(zero_R, Zc).index == 0);
}

TEST_CASE("index theorem on random systems") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 1 + seed % 2;
        auto ms = random_morse_sturm(n, 2.0 + 0.1 * (seed % 7), seed, 3.0);
        BoundaryCondition Z = (seed % 3 == 0)   ? BoundaryCondition::dirichlet(n)
                              : (seed % 3 == 1) ? BoundaryCondition::neumann(n)
                                                : BoundaryCondition::periodic(n);
        int morse = discrete_morse_index(ms, Z).index;
        try {
            int clm = maslov_index(ms, Z).int_value();
            CHECK(morse == clm - c_of_Z(Z));
            ++checked;
        } catch (const DegeneratePathError&) {
        }
    }
    CHECK(checked >= 25);
}

TEST_CASE("invalid input") {
    CHECK_THROWS_AS(constant_hamiltonian(Mat::Identity(3, 3), 1.0), InputError);
    Mat A = Mat::Zero(2, 2);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS(constant_hamiltonian(A, 1.0).validate(), InputError);
    auto bad = constant_system(-Mat::Identity(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1), 1.0);
    CHECK_THROWS_AS(bad.validate(), InputError);
}
