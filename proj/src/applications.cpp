#include "sympsturm/applications.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>

namespace sympsturm {

double kepler_curvature(double h, double r) {
    if (!(r > 0.0)) throw InputError("kepler_curvature: r must be positive");
    const double c = 1.0 + r * h;
    if (!(c > 0.0)) throw InputError("kepler_curvature: point outside the Hill region");
    return -h / (4.0 * c * c * c);
}

namespace {

namespace ode = boost::numeric::odeint;

// x, y, vx, vy, Jacobi arc length s, Jacobi field J, dJ/ds
using State = std::array<double, 7>;
using Stepper = ode::runge_kutta_fehlberg78<State>;

struct KeplerRhs {
    double h;
    void operator()(const State& x, State& dx, double) const {
        const double r = std::hypot(x[0], x[1]);
        const double r3 = r * r * r;
        const double sdot = 2.0 * (h + 1.0 / r);
        dx[0] = x[2];
        dx[1] = x[3];
        dx[2] = -x[0] / r3;
        dx[3] = -x[1] / r3;
        dx[4] = sdot;
        dx[5] = x[6] * sdot;
        dx[6] = -kepler_curvature(h, r) * x[5] * sdot;
    }
};

double energy(const State& x) { return 0.5 * (x[2] * x[2] + x[3] * x[3]) - 1.0 / std::hypot(x[0], x[1]); }

State pericenter(double h, double e) {
    const double a = -1.0 / (2.0 * h);
    const double rp = a * (1.0 - e);
    if (rp < 1e-6) throw PreconditionError("kepler_orbit: pericenter below the collision threshold");
    const double vp = std::sqrt(2.0 * (h + 1.0 / rp));
    return State{rp, 0.0, 0.0, vp, 0.0, 0.0, 1.0};
}

void check_orbit(double h, double e) {
    if (!(h < 0.0)) throw InputError("kepler_orbit: energy must be negative");
    if (!(e >= 0.0 && e < 1.0)) throw InputError("kepler_orbit: eccentricity must lie in [0, 1)");
}

// Advances from (x, t) with adaptive steps until f changes sign from positive
// to nonpositive, then bisects inside the last step. Returns false at tmax.
template <class F>
bool advance_to_root(const KeplerRhs& rhs, State& x, double& t, double tmax, F f) {
    auto ctrl = ode::make_controlled(1e-13, 1e-13, Stepper());
    Stepper fixed;
    double dt = 1e-3;
    while (t < tmax) {
        State prev = x;
        const double t0 = t;
        dt = std::min(dt, tmax - t);
        if (ctrl.try_step(rhs, x, t, dt) == ode::fail) continue;
        if (f(prev) > 0.0 && f(x) <= 0.0) {
            double lo = 0.0, hi = t - t0;
            for (int i = 0; i < 60 && hi - lo > 1e-15 * std::max(1.0, t0); ++i) {
                const double mid = 0.5 * (lo + hi);
                State y = prev;
                fixed.do_step(rhs, y, t0, mid);
                if (f(y) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            x = prev;
            fixed.do_step(rhs, x, t0, hi);
            t = t0 + hi;
            return true;
        }
    }
    return false;
}

}  // namespace

KeplerOrbit kepler_orbit(double h, double e, int samples) {
    check_orbit(h, e);
    if (samples < 2) throw InputError("kepler_orbit: need at least two samples");
    KeplerOrbit o;
    o.h = h;
    o.e = e;
    o.a = -1.0 / (2.0 * h);
    o.period = 2.0 * M_PI * std::pow(o.a, 1.5);
    KeplerRhs rhs{h};
    State x = pericenter(h, e);
    std::vector<double> times(samples);
    for (int i = 0; i < samples; ++i) times[i] = o.period * i / (samples - 1);
    auto ctrl = ode::make_controlled(1e-13, 1e-13, Stepper());
    ode::integrate_times(ctrl, rhs, x, times.begin(), times.end(), 1e-3, [&](const State& s, double t) {
        const double r = std::hypot(s[0], s[1]);
        o.t.push_back(t);
        o.r.push_back(r);
        o.s.push_back(s[4]);
        o.K.push_back(kepler_curvature(h, r));
        o.x.push_back(s[0]);
        o.y.push_back(s[1]);
        o.energy_drift = std::max(o.energy_drift, std::abs(energy(s) - h) / std::abs(h));
    });
    // return to the pericenter ray: y crosses zero upwards near one period
    State z = pericenter(h, e);
    auto ctrl2 = ode::make_controlled(1e-13, 1e-13, Stepper());
    ode::integrate_adaptive(ctrl2, rhs, z, 0.0, 0.75 * o.period, 1e-3);
    double t = 0.75 * o.period;
    if (advance_to_root(rhs, z, t, 1.25 * o.period, [](const State& s) { return -s[1]; })) o.measured_period = t;
    return o;
}

ConjugatePoint first_conjugate_distance(const KeplerOrbit& orbit) {
    check_orbit(orbit.h, orbit.e);
    ConjugatePoint c;
    c.bound = 2.0 * M_PI / std::sqrt(std::abs(orbit.h));
    KeplerRhs rhs{orbit.h};
    State x = pericenter(orbit.h, orbit.e);
    double t = 0.0;
    // leave J = 0 at the origin before watching for the sign change
    Stepper fixed;
    const double t0 = 1e-6;
    fixed.do_step(rhs, x, t, t0);
    t = t0;
    // time horizon that covers 1.1 bound in arc length: ds/dt >= 2 (h + 1 / r_apo)
    const double r_apo = orbit.a * (1.0 + orbit.e);
    const double tmax = 1.1 * c.bound / (2.0 * (orbit.h + 1.0 / r_apo));
    c.s.push_back(0.0);
    c.J.push_back(0.0);
    auto ctrl = ode::make_controlled(1e-13, 1e-13, Stepper());
    double dt = 1e-3;
    while (t < tmax && x[4] <= 1.1 * c.bound) {
        State prev = x;
        const double tp = t;
        dt = std::min(dt, tmax - t);
        if (ctrl.try_step(rhs, x, t, dt) == ode::fail) continue;
        if (prev[5] > 0.0 && x[5] <= 0.0) {
            x = prev;
            t = tp;
            advance_to_root(rhs, x, t, t + 10.0 * (t - tp) + 1.0, [](const State& s) { return s[5]; });
            c.found = true;
            c.s_star = x[4];
            c.t_star = t;
            break;
        }
        c.s.push_back(x[4]);
        c.J.push_back(x[5]);
    }
    if (c.found) {
        c.s.push_back(c.s_star);
        c.J.push_back(0.0);
    }
    c.pass = c.found && c.s_star < c.bound;
    return c;
}

void FocalSetup::validate(double tol) const {
    const int n = this->n();
    if (n < 1 || G.cols() != n) throw InputError("focal setup: G must be square");
    if (max_abs(G - G.transpose()) > tol * std::max(1.0, max_abs(G)))
        throw InputError("focal setup: G is not symmetric");
    Eigen::JacobiSVD<Mat> svd(G);
    if (svd.singularValues()(n - 1) <= tol * svd.singularValues()(0)) throw InputError("focal setup: G is singular");
    if (tangent.rows() != n || tangent.cols() > n) throw InputError("focal setup: tangent basis has the wrong shape");
    const int p = this->p();
    if (S.rows() != p || S.cols() != p) throw InputError("focal setup: S must be p x p");
    if (p == 0) return;
    if (subspace_dim(tangent, tol) != p) throw InputError("focal setup: tangent basis is rank deficient");
    Mat GP = tangent.transpose() * G * tangent;
    Eigen::JacobiSVD<Mat> sp(GP);
    if (sp.singularValues()(p - 1) <= 1e-9 * sp.singularValues()(0))
        throw PreconditionError("focal setup: metric restricted to T P is degenerate");
    Mat GS = GP * S;
    if (max_abs(GS - GS.transpose()) > 1e-8 * std::max(1.0, max_abs(GS)))
        throw InputError("focal setup: S is not G-symmetric");
}

SymplecticSpace metric_space(const Mat& G) {
    const int n = static_cast<int>(G.rows());
    Mat W = Mat::Zero(2 * n, 2 * n);
    W.topRightCorner(n, n) = G;
    W.bottomLeftCorner(n, n) = -G;
    return make_space(W);
}

Mat focal_lagrangian(const FocalSetup& setup) {
    setup.validate();
    const int n = setup.n(), p = setup.p();
    Mat perp = p == 0 ? Mat(Mat::Identity(n, n)) : null_space(setup.tangent.transpose() * setup.G, 1e-10);
    Mat F = Mat::Zero(2 * n, n);
    if (p > 0) {
        F.topLeftCorner(n, p) = setup.tangent;
        F.bottomLeftCorner(n, p) = -setup.tangent * setup.S;
    }
    F.bottomRightCorner(n, n - p) = perp;
    auto space = metric_space(setup.G);
    require_lagrangian(space, F, "L_P");
    return F;
}

JacobiFlow jacobi_flow(const Mat& G, const MatFn& R, double a, double b) {
    const int n = static_cast<int>(G.rows());
    if (!(b > a)) throw InputError("jacobi_flow: need a < b");
    Mat Gi = G.inverse();
    for (int i = 0; i <= 8; ++i) {
        Mat GR = G * R(a + (b - a) * i / 8.0);
        if (max_abs(GR - GR.transpose()) > 1e-9 * std::max(1.0, max_abs(GR)))
            throw InputError("jacobi_flow: R(t) is not G-symmetric");
    }
    // (v, w) -> (v, G w) carries the metric form to the standard one
    HamiltonianCoefficientPath H;
    H.n = n;
    H.T = b - a;
    H.B = [G, Gi, R, a, n](double s) {
        Mat B = Mat::Zero(2 * n, 2 * n);
        Mat GR = G * R(a + s);
        B.topLeftCorner(n, n) = -0.5 * (GR + GR.transpose());
        B.bottomRightCorner(n, n) = -Gi;
        return B;
    };
    auto psi = integrate_fundamental(H, default_steps(H));
    Mat Tm = Mat::Identity(2 * n, 2 * n), Ti = Mat::Identity(2 * n, 2 * n);
    Tm.bottomRightCorner(n, n) = G;
    Ti.bottomRightCorner(n, n) = Gi;
    JacobiFlow f;
    f.space = metric_space(G);
    f.a = a;
    f.b = b;
    f.phi = std::make_shared<FunctionSymplecticPath>(
        2 * n, a, b, [psi, Tm, Ti, a](double t) { return Mat(Ti * psi->value(t - a) * Tm); },
        [psi, Tm, Ti, a](double t) { return Mat(Ti * psi->derivative(t - a) * Tm); });
    return f;
}

PathPtr focal_curve(const JacobiFlow& flow) {
    const int n = flow.space.n();
    Mat V = Mat::Zero(2 * n, n);
    V.bottomRows(n) = Mat::Identity(n, n);
    auto space = flow.space;
    auto phi = flow.phi;
    return std::make_shared<FunctionPath>(
        [space, phi, V](double t) { return Mat(symplectic_inverse(space, phi->value(t)) * V); },
        [space, phi, V](double t) {
            Mat Pi = symplectic_inverse(space, phi->value(t));
            return Mat(-Pi * phi->derivative(t) * Pi * V);
        });
}

namespace {

IndexReport clm_vs(const SymplecticSpace& space, const Mat& ref, PathPtr path, double a, double b,
                   const TheoremOptions& opt) {
    LagrangianPairPath P{space, std::make_shared<ConstantPath>(ref), std::move(path), a, b, opt.grid};
    return clm_index(P, opt.engine);
}

Mat point_lagrangian(int n) {
    Mat F = Mat::Zero(2 * n, n);
    F.bottomRows(n) = Mat::Identity(n, n);
    return F;
}

int focal_k(const SymplecticSpace& space, const Mat& lb, const Mat& L0, const Mat& LP, double tol) {
    Mat A = intersection(space, lb, L0, tol).basis, B = intersection(space, L0, LP, tol).basis;
    return subspace_dim(subspace_sum(A, B, tol), tol);
}

}  // namespace

TheoremReport conjugate_focal_comparison(const FocalSetup& setup, const MatFn& R, double a, double b,
                                         const TheoremOptions& opt) {
    const Mat LP = focal_lagrangian(setup);
    const int n = setup.n(), p = setup.p();
    auto flow = jacobi_flow(setup.G, R, a, b);
    auto ell = focal_curve(flow);
    const Mat L0 = point_lagrangian(n);
    const double tol = opt.engine.tol;
    auto rP = clm_vs(flow.space, LP, ell, a, b, opt);
    auto r0 = clm_vs(flow.space, L0, ell, a, b, opt);
    const int iP = rP.int_value(), i0 = r0.int_value();
    auto ib = intersection(flow.space, ell->frame(b), L0, tol);
    const int k = focal_k(flow.space, ell->frame(b), L0, LP, tol);
    const int codim = intersection(flow.space, L0, LP, tol).dim;
    TheoremReport r;
    r.theorem = "conj-focal";
    r.instance = {{"n", n}, {"dim_P", p}, {"interval", {a, b}}, {"G", mat_to_json(setup.G)},
                  {"tangent", mat_to_json(setup.tangent)}, {"S", mat_to_json(setup.S)}};
    r.left = std::abs(iP - i0);
    r.right = n - k;
    r.relation = "<=";
    const bool chain = n - k <= p;
    const bool no_conj = i0 != 0 || std::abs(iP) <= n - k;
    const bool no_focal = iP != 0 || std::abs(i0) <= n - k;
    r.verdict = r.left <= r.right && chain && codim == n - p && no_conj && no_focal;
    r.diagnostics = {{"clm_LP", iP},
                     {"clm_L0", i0},
                     {"k", k},
                     {"dim_L0_cap_LP", codim},
                     {"singular_values_lb_L0", std::vector<double>(ib.singular_values.data(),
                                                                   ib.singular_values.data() + ib.singular_values.size())},
                     {"focal_crossings", rP.crossings.size()},
                     {"conjugate_crossings", r0.crossings.size()}};
    return r;
}

TheoremReport conjugate_focal_pair(const FocalSetup& P, const FocalSetup& Q, const MatFn& R, double a, double b,
                                   const TheoremOptions& opt) {
    if (max_abs(P.G - Q.G) > 0.0) throw InputError("conjugate_focal_pair: P and Q need the same metric");
    const Mat LP = focal_lagrangian(P), LQ = focal_lagrangian(Q);
    const int n = P.n();
    auto flow = jacobi_flow(P.G, R, a, b);
    auto ell = focal_curve(flow);
    const Mat L0 = point_lagrangian(n);
    const double tol = opt.engine.tol;
    const int i0 = clm_vs(flow.space, L0, ell, a, b, opt).int_value();
    const int iP = clm_vs(flow.space, LP, ell, a, b, opt).int_value();
    const int iQ = clm_vs(flow.space, LQ, ell, a, b, opt).int_value();
    const Mat lb = ell->frame(b);
    const int kP = focal_k(flow.space, lb, L0, LP, tol), kQ = focal_k(flow.space, lb, L0, LQ, tol);
    const int k = std::max(kP, kQ), d = std::max(P.p(), Q.p());
    TheoremReport r;
    r.theorem = "conj-focal-pair";
    r.instance = {{"n", n}, {"dim_P", P.p()}, {"dim_Q", Q.p()}, {"interval", {a, b}}};
    r.left = std::max(std::abs(iP - i0), std::abs(iQ - i0));
    r.right = n - k;
    r.relation = "<=";
    const bool own = std::abs(iP - i0) <= n - kP && std::abs(iQ - i0) <= n - kQ;
    r.verdict = r.left <= r.right && n - k <= d;
    r.diagnostics = {{"clm_L0", i0}, {"clm_LP", iP}, {"clm_LQ", iQ}, {"k_P", kP},
                     {"k_Q", kQ},    {"d", d},       {"own_k_bounds", own}};
    if (!r.verdict && own) r.note = "bound with max(k_P, k_Q) fails; each index satisfies its own k";
    return r;
}

}  // namespace sympsturm
