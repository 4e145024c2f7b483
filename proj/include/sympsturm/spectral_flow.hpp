#pragma once

#include "sympsturm/hamiltonian_flows.hpp"

#include <functional>
#include <vector>

namespace sympsturm {

// Galerkin discretization of A0 = -J0 d/dt on D(T, L) in its own eigenbasis:
// modes e^{lambda t J0} x / sqrt(T) with (x, e^{lambda T J0} x) in L.
struct Discretization {
    int n = 1;
    double T = 1.0;
    int N = 0;             // modes per eigenvalue branch
    Mat L;                 // 4n x 2n boundary frame
    Vec lambda;            // eigenvalues of A0
    Mat X;                 // 2n x M initial vectors, one per mode
    std::vector<double> quad_t, quad_w;

    int size() const { return static_cast<int>(lambda.size()); }
    Mat basis_at(double t) const;  // 2n x M values of the modes
    // Gram matrix of w -> <C w, w> in L^2 on the modes.
    Mat potential(const MatFn& C) const;
};

Discretization make_discretization(int n, double T, const Mat& L, int N);

// K = diag(lambda) - potential(C), the matrix of -J0 d/dt - C(t).
Mat discretize(const MatFn& C, const Mat& L, double T, int N);

// C(s, t) = sum_k weights(s)_k components_k(t) for s in [s0, s1].
struct OperatorPath {
    int n = 1;
    double T = 1.0;
    Mat L;
    std::vector<MatFn> components;
    std::function<Vec(double)> weights;
    double s0 = 0.0, s1 = 1.0;
};

OperatorPath scaled_path(const HamiltonianCoefficientPath& B, const Mat& L);

struct EigenTrack {
    std::vector<double> s;
    std::vector<Vec> values;  // tracked band values per parameter, ascending
    std::vector<int> band_offset;
    struct Crossing {
        double s;
        int sign;
    };
    std::vector<Crossing> crossings;
};

struct SpectralFlowResult {
    int value = 0;
    int value_refined = 0;  // same flow at twice the modes
    bool converged = false;
    double delta = 0.0;
    int negative_start = 0, negative_end = 0;
    EigenTrack track;
};

struct SpectralFlowOptions {
    int N = 32;
    int K = 20;
    int grid = 33;
    std::vector<double> deltas{1e-6, 1e-7};
    bool gate = true;
};

// Spectral flow of a path of symmetric matrices via band tracking.
SpectralFlowResult matrix_spectral_flow(const std::function<Mat(double)>& A, double s0, double s1,
                                        const SpectralFlowOptions& opt = {});

SpectralFlowResult spectral_flow(const OperatorPath& path, const SpectralFlowOptions& opt = {});

struct ComparisonFlowResult {
    int spfl1 = 0, spfl2 = 0;
    int spfl_top = 0;       // along r = 1 from B1 to B2
    bool additive = false;  // spfl1 + spfl_top == spfl2
    int clm1 = 0, clm2 = 0;
    bool ordered_flows = false;  // spfl2 <= spfl1
    bool ordered_clm = false;    // clm1 <= clm2
    bool converged = false;
};

ComparisonFlowResult comparison_flow(const HamiltonianCoefficientPath& B1, const HamiltonianCoefficientPath& B2,
                                     const Mat& L, const SpectralFlowOptions& opt = {});

struct RelativeMorseResult {
    int spfl = 0;
    int morse_start = 0, morse_end = 0;
    bool holds = false;
};

RelativeMorseResult relative_morse_check(const std::function<Mat(double)>& A, double s0, double s1,
                                         const SpectralFlowOptions& opt = {});

int negative_count(const Mat& A, double shift = 0.0);

}  // namespace sympsturm
