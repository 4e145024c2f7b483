#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sympsturm/hamiltonian_flows.hpp"

#include <cmath>

using namespace sympsturm;
using oracle::pi;

namespace {

LagrangianPairPath rotation_pair(double a, double b, int grid = 256) {
    auto sp = standard_space(1);
    auto psi = std::make_shared<RotationPath>(sp, a, b);
    return LagrangianPairPath{sp, std::make_shared<ConstantPath>(frame_LD(1)),
                              std::make_shared<MovedFramePath>(psi, frame_LD(1)), a, b, grid};
}

LagrangianPairPath swapped(LagrangianPairPath P) {
    std::swap(P.l1, P.l2);
    return P;
}

// {(p, c(t) p)} against L_D for a scalar c.
LagrangianPairPath scalar_graph(std::function<double(double)> c, double a, double b) {
    auto sp = standard_space(1);
    auto path = std::make_shared<FunctionPath>([c](double t) {
        Mat F(2, 1);
        F << 1.0, c(t);
        return F;
    });
    return LagrangianPairPath{sp, std::make_shared<ConstantPath>(frame_LD(1)), path, a, b, 256};
}

SymplecticPathPtr random_flow(int n, std::uint64_t seed, double T = 2.0) {
    auto H = random_hamiltonian(n, T, seed);
    return integrate_fundamental(H, default_steps(H));
}

}  // namespace

TEST_CASE("rotation crossings") {
    auto recs = detect_crossings(rotation_pair(0.0, 2.0 * pi));
    REQUIRE(recs.size() == 3);
    const double expect[] = {0.0, pi, 2.0 * pi};
    for (int i = 0; i < 3; ++i) {
        CHECK(recs[i].t0 == doctest::Approx(expect[i]).epsilon(1e-9));
        CHECK(recs[i].mult == 1);
    }
    for (double t0 : {0.0, pi}) {
        auto q = crossing_form(swapped(rotation_pair(0.0, 2.0 * pi)), t0);
        CHECK(crossing_form(rotation_pair(0.0, 2.0 * pi), t0).gram(0, 0) == doctest::Approx(-1.0).epsilon(1e-6));
        REQUIRE(q.size() == 1);
        CHECK(q.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("rotation CLM against the analytic count") {
    for (double b : {0.5 * pi, pi, 1.5 * pi, 2.0 * pi, 3.7}) {
        CHECK(clm_index(rotation_pair(0.0, b)).int_value() == oracle::rotation_clm(0.0, b));
    }
    CHECK(clm_index(rotation_pair(0.0, pi)).int_value() == 1);
    CHECK(clm_index(rotation_pair(0.0, 2.0 * pi)).int_value() == 2);
}

TEST_CASE("constant pairs") {
    auto sp = standard_space(2);
    LagrangianPairPath P{sp, std::make_shared<ConstantPath>(frame_LD(2)), std::make_shared<ConstantPath>(frame_LN(2)),
                         0.0, 1.0, 64};
    CHECK(detect_crossings(P).empty());
    CHECK(clm_index(P).int_value() == 0);
    CHECK(rs_index(P).twice_value == 0);
    P.l2 = std::make_shared<ConstantPath>(frame_LD(2));
    CHECK_THROWS_AS(clm_index(P), DegeneratePathError);
}

TEST_CASE("block crossing forms") {
    // Gamma({(p, c(t) p)}, L_D) = <p, c' p>
    auto q = crossing_form(swapped(scalar_graph([](double t) { return 2.0 * t; }, -1.0, 1.0)), 0.0);
    CHECK(q.gram(0, 0) == doctest::Approx(2.0).epsilon(1e-6));
    // Gamma({(b(t) q, q)}, L_N) = -<q, b' q>
    auto sp = standard_space(1);
    auto path = std::make_shared<FunctionPath>([](double t) {
        Mat F(2, 1);
        F << 3.0 * t, 1.0;
        return F;
    });
    LagrangianPairPath P{sp, path, std::make_shared<ConstantPath>(frame_LN(1)), -1.0, 1.0, 64};
    CHECK(crossing_form(P, 0.0).gram(0, 0) == doctest::Approx(-3.0).epsilon(1e-6));
    CHECK(crossing_form(swapped(P), 0.0).gram(0, 0) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("degenerate crossings follow the sign change") {
    CHECK(clm_index(scalar_graph([](double t) { return t * t * t; }, -1.0, 1.0)).int_value() == 1);
    CHECK(clm_index(scalar_graph([](double t) { return -t * t * t; }, -1.0, 1.0)).int_value() == -1);
    CHECK(clm_index(scalar_graph([](double t) { return t * t; }, -1.0, 1.0)).int_value() == 0);
    CHECK(clm_index(scalar_graph([](double t) { return -t * t; }, -1.0, 1.0)).int_value() == 0);
}

TEST_CASE("RS and CLM endpoint relation") {
    CHECK(rs_index(swapped(rotation_pair(0.0, pi))).twice_value == 2);
    for (int n = 1; n <= 3; ++n) {
        auto sp = standard_space(n);
        for (std::uint64_t seed = 0; seed < 34; ++seed) {
            auto psi = random_flow(n, seed + 100 * n);
            Mat L0 = random_lagrangian(sp, seed), L = random_lagrangian(sp, seed + 7);
            if (seed % 4 == 0) L = L0;
            LagrangianPairPath P{sp, std::make_shared<ConstantPath>(L0), std::make_shared<MovedFramePath>(psi, L), 0.0,
                                 psi->t_end(), 512};
            const int ha = intersection(sp, L0, L).dim;
            const int hb = intersection(sp, L0, Mat(psi->value(psi->t_end()) * L)).dim;
            CHECK(clm_index(P).twice_value - rs_index(swapped(P)).twice_value == ha - hb);
        }
    }
}

TEST_CASE("CZ of the rotation and the harmonic oscillator") {
    auto sp = standard_space(1);
    CHECK(cz_index(sp, std::make_shared<RotationPath>(sp, 0.0, 2.0 * pi)).int_value() == 2);
    CHECK(cz_index(sp, std::make_shared<RotationPath>(sp, 0.0, 3.0 * pi)).int_value() == 4);
    auto H = constant_hamiltonian(Mat::Identity(2, 2), 4.0 * pi);
    CHECK(cz_index(sp, integrate_fundamental(H, default_steps(H))).int_value() == 4);
    auto id = std::make_shared<FunctionSymplecticPath>(2, 0.0, 1.0, [](double) { return Mat(Mat::Identity(2, 2)); });
    CHECK_THROWS_AS(cz_index(sp, id), DegeneratePathError);
}

TEST_CASE("L-Maslov index equals the direct CLM") {
    for (int n = 1; n <= 2; ++n) {
        auto sp = standard_space(n);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto psi = random_flow(n, seed + 31 * n, 1.0 + 0.05 * seed);
            Mat L = random_lagrangian(sp, seed + 5);
            if (seed % 5 == 0) L = frame_LD(n);
            const int dbl = l_maslov_index(sp, L, psi).int_value();
            LagrangianPairPath P{sp, std::make_shared<ConstantPath>(L), std::make_shared<MovedFramePath>(psi, L), 0.0,
                                 psi->t_end(), 512};
            CHECK(dbl == clm_index(P).int_value());
            CHECK(std::abs(dbl - cz_index(sp, psi).int_value()) <= n);
        }
    }
}

TEST_CASE("triple index") {
    auto s1 = standard_space(1);
    Mat a = frame_LD(1), b = frame_LN(1);
    CHECK(triple_index(s1, a, b, a).value == 1);
    CHECK(triple_index(s1, a, a, a).value == 0);
    for (int n = 1; n <= 3; ++n) {
        auto sp = standard_space(n);
        for (std::uint64_t seed = 0; seed < 34; ++seed) {
            Mat x = random_lagrangian(sp, seed), y = random_lagrangian(sp, seed + 1), z = random_lagrangian(sp, seed + 2);
            if (seed % 6 == 1) y = x;
            if (seed % 6 == 2) z = y;
            auto t = triple_index(sp, x, y, z);
            CHECK(t.value <= t.bound);
            CHECK(t.value == t.reduced_value);
            auto q1 = triple_form(sp, x, y, z), q2 = triple_form(sp, y, z, x);
            CHECK(inertia(q1, 1e-8).pos == inertia(q2, 1e-8).pos);
        }
    }
}

TEST_CASE("Hormander index") {
    for (int n = 1; n <= 2; ++n) {
        auto sp = standard_space(n);
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            Mat m1 = random_lagrangian(sp, seed + 3), m2 = random_lagrangian(sp, seed + 4);
            if (seed % 5 == 0) m1 = frame_LD(n);
            auto psi = random_flow(n, seed + 900, 2.5);
            Mat L = random_lagrangian(sp, seed + 11);
            Mat la = L, lb = psi->value(psi->t_end()) * L;
            CHECK(hormander_index(sp, la, lb, m1, m1).value == 0);
            auto h = hormander_index(sp, la, lb, m1, m2);
            CHECK(h.agree);
            CHECK(h.value == -hormander_index(sp, la, lb, m2, m1).value);
            auto path = std::make_shared<MovedFramePath>(psi, L);
            LagrangianPairPath P1{sp, std::make_shared<ConstantPath>(m1), path, 0.0, psi->t_end(), 512};
            LagrangianPairPath P2{sp, std::make_shared<ConstantPath>(m2), path, 0.0, psi->t_end(), 512};
            CHECK(clm_index(P2).int_value() - clm_index(P1).int_value() == h.value);
        }
    }
}

TEST_CASE("iterated paths") {
    auto psi = random_flow(1, 17, 1.3);
    CHECK(iterate_path(psi, 1) == psi);
    const Mat P = psi->value(psi->t_end());
    auto it = iterate_path(psi, 3);
    CHECK(it->t_end() == doctest::Approx(3.9));
    CHECK((it->value(it->t_end()) - P * P * P).norm() < 1e-10);
}

TEST_CASE("plus curves") {
    auto sp = standard_space(1);
    auto rot = plus_curve_report(sp, frame_LD(1), std::make_shared<MovedFramePath>(std::make_shared<RotationPath>(sp, 0.0, 2.0 * pi), frame_LD(1)), 0.0, 2.0 * pi);
    CHECK(rot.is_plus);
    CHECK(rot.total_multiplicity == 3);
    auto back = std::make_shared<RotationPath>(sp, 0.0, 2.0 * pi, -1.0);
    CHECK_FALSE(plus_curve_report(sp, frame_LD(1), std::make_shared<MovedFramePath>(back, frame_LD(1)), 0.0, 2.0 * pi).is_plus);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int n = 1 + seed % 2;
        Mat C = random_symmetric(n, seed);
        auto b = [C, n](double t) { return Mat(C * C + 0.2 * Mat::Identity(n, n) + 0.1 * std::sin(t) * Mat::Identity(n, n)); };
        Mat A = random_symmetric(n, seed + 50);
        auto H = natural_hamiltonian(b, [A](double t) { return Mat(std::cos(t) * A); }, n, 3.0);
        auto psi = integrate_fundamental(H, default_steps(H));
        auto r = plus_curve_report(standard_space(n), frame_LD(n),
                                   std::make_shared<MovedFramePath>(psi, random_lagrangian(standard_space(n), seed)), 0.0, 3.0);
        CHECK(r.is_plus);
    }
}

TEST_CASE("CLM path additivity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 1 + seed % 2;
        auto sp = standard_space(n);
        auto psi = random_flow(n, seed + 400, 3.0);
        auto path = std::make_shared<MovedFramePath>(psi, random_lagrangian(sp, seed));
        auto L0 = std::make_shared<ConstantPath>(random_lagrangian(sp, seed + 9));
        const double c = 0.7 + 0.05 * seed;
        LagrangianPairPath all{sp, L0, path, 0.0, 3.0, 512}, left{sp, L0, path, 0.0, c, 512}, right{sp, L0, path, c, 3.0, 512};
        CHECK(clm_index(all).int_value() == clm_index(left).int_value() + clm_index(right).int_value());
    }
}
