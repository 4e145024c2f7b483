#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sympsturm/symplectic_core.hpp"

using namespace sympsturm;

namespace {

Mat cols(std::initializer_list<std::initializer_list<double>> rows) {
    Mat M(rows.size(), rows.begin()->size());
    int i = 0;
    for (auto r : rows) {
        int j = 0;
        for (double x : r) M(i, j++) = x;
        ++i;
    }
    return M;
}

}  // namespace

TEST_CASE("standard space") {
    auto s1 = standard_space(1);
    Vec x(2), y(2);
    x << 1, 0;
    y << 0, 1;
    CHECK(s1.omega(x, y) == doctest::Approx(1.0));
    CHECK(is_lagrangian(s1, frame_LD(1)).ok);
    CHECK(is_lagrangian(s1, frame_LN(1)).ok);
    auto s3 = standard_space(3);
    CHECK(s3.dim() == 6);
    CHECK((s3.J * s3.J + Mat::Identity(6, 6)).norm() == 0.0);
    CHECK((s3.J - oracle::J0(3)).norm() < 1e-14);
}

TEST_CASE("double space") {
    auto s = standard_space(1);
    auto d = double_space(s);
    CHECK(d.dim() == 4);
    CHECK((d.form.topLeftCorner(2, 2) + s.form).norm() == 0.0);
    CHECK((d.form.bottomRightCorner(2, 2) - s.form).norm() == 0.0);
    CHECK(is_lagrangian(d, diagonal_frame(2)).ok);
    CHECK(is_lagrangian(d, antidiagonal_frame(2)).ok);
}

TEST_CASE("is_lagrangian") {
    auto s = standard_space(1);
    CHECK_THROWS_AS(is_lagrangian(s, Mat::Identity(2, 2)), InputError);
    CHECK(is_lagrangian(s, cols({{1}, {1}})).ok);
    auto s2 = standard_space(2);
    CHECK(is_lagrangian(s2, cols({{1, 0}, {0, 0}, {1, 0}, {0, 1}})).ok);
    CHECK_FALSE(is_lagrangian(s2, cols({{1, 0}, {0, 0}, {0, 1}, {0, 0}})).ok);
}

TEST_CASE("intersection") {
    auto s2 = standard_space(2);
    CHECK(intersection(s2, frame_LD(2), frame_LN(2)).dim == 0);
    Mat L = random_lagrangian(s2, 3);
    CHECK(intersection(s2, L, L).dim == 2);
    Mat L1 = cols({{1, 0}, {0, 1}, {0, 0}, {0, 0}});
    Mat L2 = cols({{1, 0}, {0, 0}, {0, 0}, {0, 1}});
    auto I = intersection(s2, L1, L2);
    REQUIRE(I.dim == 1);
    CHECK(std::abs(std::abs(I.basis(0, 0)) - 1.0) < 1e-12);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Mat A = random_lagrangian(s2, seed), B = random_lagrangian(s2, seed + 1000);
        CHECK(intersection(s2, A, B).dim == intersection(s2, B, A).dim);
        CHECK(intersection(s2, A, B).dim == oracle::intersection_dim(A, B));
    }
}

TEST_CASE("chart form") {
    auto s = standard_space(1);
    const double a = 0.37;
    auto q = chart_form(s, frame_LD(1), frame_LN(1), cols({{1}, {a}}));
    REQUIRE(q.size() == 1);
    CHECK(q.gram(0, 0) == doctest::Approx(a));
    auto z = chart_form(s, frame_LD(1), frame_LN(1), frame_LD(1));
    CHECK(z.gram.norm() < 1e-14);
    for (int n = 1; n <= 3; ++n) {
        auto sp = standard_space(n);
        for (std::uint64_t seed = 0; seed < 34; ++seed) {
            Mat L0 = random_lagrangian(sp, seed), L1 = random_lagrangian(sp, seed + 77);
            // L meets L0 along a prescribed subspace
            Mat L = random_lagrangian(sp, seed + 991);
            if (seed % 3 == 0) L = L0;
            if (intersection(sp, L0, L1).dim != 0 || intersection(sp, L, L1).dim != 0) continue;
            auto f = chart_form(sp, L0, L1, L);
            CHECK(inertia(f, 1e-8).zero == intersection(sp, L, L0).dim);
        }
    }
}

TEST_CASE("symplectic reduction") {
    auto s = standard_space(2);
    Mat X = random_lagrangian(s, 5);
    auto id = symplectic_reduction(s, X, Mat(4, 0));
    CHECK(id.reduced.dim() == 4);
    CHECK(oracle::intersection_dim(id.basis * id.frame, X) == 2);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Mat L = random_lagrangian(s, seed);
        Mat I = L.col(0);
        Mat Y = random_lagrangian(s, seed + 500);
        auto r = symplectic_reduction(s, Y, I);
        CHECK(r.reduced.dim() == 2);
        CHECK(r.frame.cols() == 1);
        CHECK(is_lagrangian(r.reduced, r.frame).ok);
        CHECK((r.reduced.form + r.reduced.form.transpose()).norm() < 1e-12);
        CHECK(std::abs(r.reduced.form.determinant()) > 1e-6);
    }
}

TEST_CASE("inertia") {
    Mat g = Vec((Vec(2) << 1, -1).finished()).asDiagonal();
    auto i1 = inertia(g, 1e-10);
    CHECK(i1.pos == 1);
    CHECK(i1.neg == 1);
    CHECK(i1.sgn() == 0);
    auto i2 = inertia(Mat::Zero(2, 2), 1e-10);
    CHECK(i2.zero == 2);
    Mat g3 = Vec((Vec(3) << 2, 1e-14, -3).finished()).asDiagonal();
    auto i3 = inertia(g3, 1e-10);
    CHECK(i3.pos == 1);
    CHECK(i3.zero == 1);
    CHECK(i3.neg == 1);
    CHECK(i3.size() == 3);
    CHECK(i3.pos <= i3.extended_coindex());
}

TEST_CASE("graph lagrangian") {
    auto s = standard_space(2);
    auto d = double_space(s);
    CHECK(oracle::intersection_dim(graph_lagrangian(s, Mat::Identity(4, 4)), diagonal_frame(4)) == 4);
    CHECK(oracle::intersection_dim(graph_lagrangian(s, -Mat::Identity(4, 4)), antidiagonal_frame(4)) == 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Mat S = random_symmetric(4, seed);
        Mat M = Mat(oracle::J0(2) * S).exp();
        CHECK(is_symplectic_matrix(s, M, 1e-8));
        CHECK(is_lagrangian(d, graph_lagrangian(s, M)).ok);
    }
}

TEST_CASE("random lagrangian") {
    auto s = standard_space(2);
    CHECK((random_lagrangian(s, 42) - random_lagrangian(s, 42)).norm() == 0.0);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Mat L = random_lagrangian(s, seed);
        CHECK(is_lagrangian(s, L).ok);
        hits += intersection(s, L, frame_LD(2)).dim > 0;
    }
    CHECK(hits < 50);
}

TEST_CASE("indefinite metric form") {
    Mat G = Vec((Vec(2) << 1, -1).finished()).asDiagonal();
    Mat form = Mat::Zero(4, 4);
    form.topRightCorner(2, 2) = G;
    form.bottomLeftCorner(2, 2) = -G;
    auto sp = make_space(form);
    CHECK((sp.J * sp.J + Mat::Identity(4, 4)).norm() < 1e-12);
    Mat L = Mat::Zero(4, 2);
    L.topLeftCorner(2, 2) = Mat::Identity(2, 2);
    CHECK(is_lagrangian(sp, L).ok);
    CHECK_THROWS_AS(make_space(Mat::Identity(4, 4)), InputError);
}
