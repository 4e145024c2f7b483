#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sympsturm/applications.hpp"

using namespace sympsturm;
using oracle::pi;

namespace {

MatFn constant(const Mat& M) {
    return [M](double) { return M; };
}

FocalSetup point(const Mat& G) { return FocalSetup{G, Mat(G.rows(), 0), Mat(0, 0)}; }

}  // namespace

TEST_CASE("Kepler curvature") {
    CHECK(kepler_curvature(0.0, 2.0) == 0.0);
    CHECK(kepler_curvature(-0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kepler_curvature(0.7, 1.3) < 0.0);
    for (double h : {-2.0, -1.0, -0.3, -0.1})
        for (double r : {0.05, 0.2, 0.4, 0.9 / std::abs(h)}) {
            CHECK(kepler_curvature(h, r) > 0.0);
            CHECK(kepler_curvature(h, r) == doctest::Approx(oracle::kepler_curvature(h, r)).epsilon(1e-14));
        }
    CHECK_THROWS_AS(kepler_curvature(-1.0, 1.5), InputError);
    CHECK_THROWS_AS(kepler_curvature(-1.0, 0.0), InputError);
}

TEST_CASE("circular Kepler orbit") {
    auto o = kepler_orbit(-0.5, 0.0);
    REQUIRE(o.t.size() > 10);
    for (size_t i = 0; i < o.t.size(); ++i) {
        CHECK(o.r[i] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(o.K[i] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(o.s[i] == doctest::Approx(o.t[i]).epsilon(1e-9));
    }
    auto c = first_conjugate_distance(o);
    REQUIRE(c.found);
    CHECK(c.s_star == doctest::Approx(pi).epsilon(1e-9));
    CHECK(c.bound == doctest::Approx(2.0 * std::sqrt(2.0) * pi).epsilon(1e-14));
    CHECK(c.pass);
    for (size_t i = 0; i < c.s.size(); ++i) CHECK(std::abs(c.J[i] - std::sin(c.s[i])) < 1e-8);
}

TEST_CASE("eccentric Kepler orbits") {
    auto o = kepler_orbit(-0.5, 0.6);
    CHECK(o.energy_drift < 1e-8);
    CHECK(o.period == doctest::Approx(oracle::kepler_period(-0.5)).epsilon(1e-12));
    CHECK(std::abs(o.measured_period - o.period) < 1e-6 * o.period);
    for (double r : o.r) CHECK(r > 0.0);
    for (double K : o.K) CHECK(K > 0.0);

    auto tight = first_conjugate_distance(kepler_orbit(-1.0, 0.0));
    CHECK(tight.found);
    CHECK(tight.s_star < 2.0 * pi);
    CHECK(first_conjugate_distance(kepler_orbit(-4.0, 0.0)).bound == doctest::Approx(0.5 * tight.bound));
}

TEST_CASE("conjugate distance sweep") {
    for (double h : {-2.0, -1.0, -0.5, -0.1})
        for (double e : {0.0, 0.3, 0.6, 0.9}) {
            auto o = kepler_orbit(h, e);
            auto c = first_conjugate_distance(o);
            INFO("h = " << h << ", e = " << e);
            CHECK(o.energy_drift < 1e-8);
            CHECK(c.found);
            CHECK(c.pass);
        }
    CHECK_THROWS_AS(kepler_orbit(0.1, 0.0), InputError);
    CHECK_THROWS_AS(kepler_orbit(-0.5, 1.0), InputError);
}

TEST_CASE("focal Lagrangians") {
    const Mat I2 = Mat::Identity(2, 2);
    auto sp = metric_space(I2);
    Mat L0 = focal_lagrangian(point(I2));
    CHECK(is_lagrangian(sp, L0).ok);
    CHECK(intersection(sp, L0, L0).dim == 2);

    // a hyperplane with S = 0: tangent vectors with normal momenta
    FocalSetup line{I2, Mat::Identity(2, 1), Mat::Zero(1, 1)};
    Mat LP = focal_lagrangian(line);
    CHECK(is_lagrangian(sp, LP).ok);
    Mat expect = Mat::Zero(4, 2);
    expect(0, 0) = 1.0;
    expect(3, 1) = 1.0;
    CHECK(oracle::intersection_dim(LP, expect) == 2);
    CHECK(intersection(sp, L0, LP).dim == 1);

    Mat G = Vec((Vec(2) << 1.0, -1.0).finished()).asDiagonal();
    Mat t(2, 1);
    t << 1.0, 0.4;
    FocalSetup indefinite{G, t, Mat::Constant(1, 1, 0.7)};
    auto isp = metric_space(G);
    Mat LI = focal_lagrangian(indefinite);
    CHECK(is_lagrangian(isp, LI).ok);
    CHECK(intersection(isp, focal_lagrangian(point(G)), LI).dim == 1);

    Mat null(2, 1);
    null << 1.0, 1.0;
    CHECK_THROWS_AS(focal_lagrangian(FocalSetup{G, null, Mat::Zero(1, 1)}), PreconditionError);
}

TEST_CASE("conjugate and focal comparison") {
    const Mat I2 = Mat::Identity(2, 2);
    auto flat = conjugate_focal_comparison(point(I2), constant(Mat::Zero(2, 2)), 0.0, 3.0);
    CHECK(flat.verdict);
    CHECK(flat.diagnostics["clm_L0"] == 2);  // only the initial instant

    FocalSetup line{I2, Mat::Identity(2, 1), Mat::Zero(1, 1)};
    auto sphere = conjugate_focal_comparison(line, constant(I2), 0.0, 4.0);
    CHECK(sphere.verdict);
    CHECK(sphere.left <= sphere.right);

    Mat G = Vec((Vec(2) << 1.0, -1.0).finished()).asDiagonal();
    Mat t(2, 1);
    t << 1.0, 0.3;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Mat S = Mat::Constant(1, 1, -1.0 + 0.08 * seed);
        Mat Y = random_symmetric(2, seed);
        Mat Gi = G.inverse();
        auto R = [Gi, Y](double s) { return Mat(Gi * Y * (1.0 + 0.5 * std::sin(s))); };
        auto r = conjugate_focal_comparison(FocalSetup{G, t, S}, R, 0.0, 2.5);
        CHECK(r.verdict);
    }
}
