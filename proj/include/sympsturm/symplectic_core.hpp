#pragma once

#include "sympsturm/common.hpp"

#include <cstdint>

namespace sympsturm {

// A finite dimensional symplectic vector space (R^{2n}, omega) with
// omega(x, y) = x^T form y. J is the orthogonal factor of the polar
// decomposition of form^T, so J = J0 for the standard space.
struct SymplecticSpace {
    Mat form;
    Mat J;

    int dim() const { return static_cast<int>(form.rows()); }
    int n() const { return dim() / 2; }
    double omega(const Vec& x, const Vec& y) const { return x.dot(form * y); }
};

struct QuadraticForm {
    Mat basis;  // columns span the domain
    Mat gram;
    int size() const { return static_cast<int>(gram.rows()); }
};

struct Inertia {
    int pos = 0;
    int zero = 0;
    int neg = 0;
    int sgn() const { return pos - neg; }
    int extended_coindex() const { return pos + zero; }
    int size() const { return pos + zero + neg; }
};

struct LagrangianCheck {
    bool ok = false;
    double isotropy_defect = 0.0;
    double min_singular_value = 0.0;
};

struct Intersection {
    int dim = 0;
    Mat basis;            // 2n x dim, orthonormal columns
    Vec singular_values;  // of [U1 | U2], ascending
};

struct Reduction {
    SymplecticSpace reduced;  // V_I with the restricted form
    Mat basis;                // orthonormal basis of V_I in ambient coordinates
    Mat frame;                // pi(X) in V_I coordinates
};

Mat J0(int n);
SymplecticSpace standard_space(int n);
SymplecticSpace make_space(const Mat& form);
SymplecticSpace double_space(const SymplecticSpace& space);

// Named frames of the standard space: momentum axis and position axis.
Mat frame_LD(int n);
Mat frame_LN(int n);
// Diagonal of V + V and the graph of -Id.
Mat diagonal_frame(int dim);
Mat antidiagonal_frame(int dim);

LagrangianCheck is_lagrangian(const SymplecticSpace& space, const Mat& frame, double tol = kDefaultTol);
void require_lagrangian(const SymplecticSpace& space, const Mat& frame, const char* what, double tol = 1e-7);
bool is_symplectic_matrix(const SymplecticSpace& space, const Mat& M, double tol = 1e-9);

Intersection intersection(const SymplecticSpace& space, const Mat& L1, const Mat& L2, double tol = kDefaultTol);

// Q(L0, L1; L) = omega(., T .) on L0 where L is the graph of T: L0 -> L1.
QuadraticForm chart_form(const SymplecticSpace& space, const Mat& L0, const Mat& L1, const Mat& L,
                         double tol = kDefaultTol);

Reduction symplectic_reduction(const SymplecticSpace& space, const Mat& X, const Mat& I, double tol = kDefaultTol);

Inertia inertia(const Mat& gram, double tol);
Inertia inertia(const QuadraticForm& q, double tol);

Mat graph_lagrangian(const SymplecticSpace& space, const Mat& M, double tol = 1e-9);

// Columns e_1..e_n, f_1..f_n with omega(e_i, f_j) = delta_ij.
Mat darboux_basis(const SymplecticSpace& space);
Mat random_lagrangian(const SymplecticSpace& space, std::uint64_t seed);
Mat random_symplectic(int n, std::uint64_t seed, double scale = 1.0);
Mat random_symmetric(int k, std::uint64_t seed, double scale = 1.0);

// Subspace helpers; all return orthonormal bases.
Mat orthonormalize(const Mat& A, double tol = kDefaultTol);
Mat null_space(const Mat& A, double tol = kDefaultTol);
Mat subspace_sum(const Mat& A, const Mat& B, double tol = kDefaultTol);
Mat subspace_intersection(const Mat& A, const Mat& B, double tol = kDefaultTol);
int subspace_dim(const Mat& A, double tol = kDefaultTol);
// Annihilator {v : omega(v, x) = 0 for x in span A}.
Mat symplectic_complement(const SymplecticSpace& space, const Mat& A, double tol = kDefaultTol);

Mat symplectic_inverse(const SymplecticSpace& space, const Mat& M);

}  // namespace sympsturm
