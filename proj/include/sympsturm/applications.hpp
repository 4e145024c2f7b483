#pragma once

#include "sympsturm/sturm_theorems.hpp"

#include <vector>

namespace sympsturm {

// Gaussian curvature of the Jacobi metric of the planar Kepler problem.
double kepler_curvature(double h, double r);

struct KeplerOrbit {
    double h = -0.5;
    double e = 0.0;
    double a = 1.0;               // semi-major axis -1 / (2h)
    double period = 0.0;          // Kepler's third law
    double measured_period = 0.0;  // first return to the pericenter ray
    double energy_drift = 0.0;    // max |E - h| / |h| over the samples
    std::vector<double> t, r, s, K, x, y;
};

// One period of the orbit of energy h < 0 and eccentricity e, from the pericenter.
KeplerOrbit kepler_orbit(double h, double e, int samples = 257);

struct ConjugatePoint {
    double s_star = 0.0;
    double t_star = 0.0;
    double bound = 0.0;  // 2 pi / sqrt(|h|)
    bool found = false;
    bool pass = false;
    std::vector<double> s, J;  // Jacobi field samples up to s_star
};

// First zero of J'' + K(s) J = 0, J(0) = 0, J'(0) = 1 along the Jacobi arc length.
ConjugatePoint first_conjugate_distance(const KeplerOrbit& orbit);

// Submanifold data at gamma(a) in a parallel frame with metric G.
struct FocalSetup {
    Mat G;        // n x n symmetric invertible
    Mat tangent;  // n x p basis of T P; p = 0 for a point
    Mat S;        // p x p shape operator in the tangent basis

    int n() const { return static_cast<int>(G.rows()); }
    int p() const { return static_cast<int>(tangent.cols()); }
    void validate(double tol = 1e-9) const;
};

// (R^n + R^n, omega((v1, w1), (v2, w2)) = g(v1, w2) - g(v2, w1)).
SymplecticSpace metric_space(const Mat& G);

// L_P = {(v, w) : v in T P, w + S v in (T P)^perp}.
Mat focal_lagrangian(const FocalSetup& setup);

// Jacobi flow v' = w, w' = -R(t) v on [a, b] with R(t) G-symmetric.
struct JacobiFlow {
    SymplecticSpace space;
    SymplecticPathPtr phi;  // Phi_t in the metric coordinates
    double a = 0.0, b = 1.0;
};

JacobiFlow jacobi_flow(const Mat& G, const MatFn& R, double a, double b);

// t -> Phi_t^{-1} ({0} + R^n).
PathPtr focal_curve(const JacobiFlow& flow);

TheoremReport conjugate_focal_comparison(const FocalSetup& setup, const MatFn& R, double a, double b,
                                         const TheoremOptions& opt = {});

// Two submanifolds P, Q with k = max(k_P, k_Q) and d = max(dim P, dim Q).
TheoremReport conjugate_focal_pair(const FocalSetup& P, const FocalSetup& Q, const MatFn& R, double a, double b,
                                   const TheoremOptions& opt = {});

}  // namespace sympsturm
