#pragma once

#include "sympsturm/index_engine.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace sympsturm {

using MatFn = std::function<Mat(double)>;

// t -> B(t), symmetric 2n x 2n, driving z' = J0 B(t) z on [0, T].
struct HamiltonianCoefficientPath {
    int n = 1;
    double T = 1.0;
    MatFn B;

    Mat operator()(double t) const { return B(t); }
    void validate(int samples = 17) const;
};

HamiltonianCoefficientPath constant_hamiltonian(const Mat& B, double T);

// -(P u' + Q u)' + Q^T u' + R u = 0 on [0, T].
struct MorseSturmSystem {
    int n = 1;
    double T = 1.0;
    MatFn P, Q, R;

    void validate(int samples = 17) const;
};

// Boundary subspace Z of R^n + R^n for (u(0), u(T)).
struct BoundaryCondition {
    enum class Kind { Dirichlet, Neumann, Periodic, Separated, General };
    Kind kind = Kind::Dirichlet;
    int n = 1;
    Mat basis;   // 2n x dim Z
    Mat Z1, Z2;  // factors of a separated condition

    static BoundaryCondition dirichlet(int n);
    static BoundaryCondition neumann(int n);
    static BoundaryCondition periodic(int n);
    static BoundaryCondition separated(const Mat& Z1, const Mat& Z2);
    static BoundaryCondition general(const Mat& basis);

    Mat orthogonal_complement() const;
};

std::string to_string(BoundaryCondition::Kind k);

// Fundamental solution of psi' = J0 B(t) psi, psi(0) = Id, stored on a uniform
// grid. Steps and in-cell values use the fourth order Magnus exponential, so
// every value is exactly an exponential of a Hamiltonian matrix times a sample.
class FundamentalSolution : public SymplecticPath {
public:
    FundamentalSolution(HamiltonianCoefficientPath B, int N);

    Mat value(double t) const override;
    bool has_derivative() const override { return true; }
    Mat derivative(double t) const override;
    double t_begin() const override { return 0.0; }
    double t_end() const override { return B_.T; }
    int dim() const override { return 2 * B_.n; }

    int steps() const { return N_; }
    const std::vector<Mat>& samples() const { return psi_; }
    const HamiltonianCoefficientPath& coefficients() const { return B_; }
    double max_symplectic_defect() const { return defect_; }
    // max |psi_N - psi_2N| over the shared nodes, from a run at twice the steps
    double richardson_error() const;

private:
    Mat step(double t0, double h) const;
    HamiltonianCoefficientPath B_;
    int N_;
    double h_;
    Mat J_;
    std::vector<Mat> psi_;
    double defect_ = 0.0;
};

using FundamentalPtr = std::shared_ptr<const FundamentalSolution>;

FundamentalPtr integrate_fundamental(const HamiltonianCoefficientPath& B, int N);
// Default step count: enough for the oscillation scale of B.
int default_steps(const HamiltonianCoefficientPath& B);

HamiltonianCoefficientPath morse_sturm_to_hamiltonian(const MorseSturmSystem& ms);

// L_Z = {((p0, q0), (p_T, q_T)) : (q0, q_T) in Z, (p0, -p_T) in Z^perp}.
Mat boundary_lagrangian(const BoundaryCondition& Z);

int c_of_Z(const BoundaryCondition& Z);

struct MorseIndexResult {
    int index = 0;
    int N = 0;                 // grid at which the count was accepted
    std::vector<int> history;  // counts along the doublings
};

MorseIndexResult discrete_morse_index(const MorseSturmSystem& ms, const BoundaryCondition& Z, int N0 = 32,
                                      int max_N = 1 << 15);

// CLM(L_Z, Gr psi) for the Hamiltonian flow of the system.
IndexReport maslov_index(const MorseSturmSystem& ms, const BoundaryCondition& Z, int steps = 0, int grid = 0,
                         const EngineOptions& opt = {});

// Random systems: P symmetric positive definite, Q and R smooth in t.
MorseSturmSystem random_morse_sturm(int n, double T, std::uint64_t seed, double strength = 1.0);
// Random symmetric B(t) = B0 + t B1 + sin(t) B2.
HamiltonianCoefficientPath random_hamiltonian(int n, double T, std::uint64_t seed, double scale = 1.0);
// Legendre convex natural Hamiltonian 1/2 [<b(t) p, p> + <a(t) q, q>].
HamiltonianCoefficientPath natural_hamiltonian(MatFn b, MatFn a, int n, double T);

}  // namespace sympsturm
