#pragma once

#include "sympsturm/symplectic_core.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sympsturm {

// A curve of Lagrangian frames t -> l(t). Frames must depend smoothly on t.
class LagrangianPath {
public:
    virtual ~LagrangianPath() = default;
    virtual Mat frame(double t) const = 0;
    virtual bool has_derivative() const { return false; }
    virtual Mat derivative(double t) const;
};
using PathPtr = std::shared_ptr<const LagrangianPath>;

// A curve of symplectic matrices t -> psi(t) on [t_begin, t_end].
class SymplecticPath {
public:
    virtual ~SymplecticPath() = default;
    virtual Mat value(double t) const = 0;
    virtual bool has_derivative() const { return false; }
    virtual Mat derivative(double t) const;
    virtual double t_begin() const = 0;
    virtual double t_end() const = 0;
    virtual int dim() const = 0;
};
using SymplecticPathPtr = std::shared_ptr<const SymplecticPath>;

class ConstantPath : public LagrangianPath {
public:
    explicit ConstantPath(Mat F) : F_(std::move(F)) {}
    Mat frame(double) const override { return F_; }
    bool has_derivative() const override { return true; }
    Mat derivative(double) const override { return Mat::Zero(F_.rows(), F_.cols()); }

private:
    Mat F_;
};

class FunctionPath : public LagrangianPath {
public:
    using Fn = std::function<Mat(double)>;
    explicit FunctionPath(Fn f, Fn df = {}) : f_(std::move(f)), df_(std::move(df)) {}
    Mat frame(double t) const override { return f_(t); }
    bool has_derivative() const override { return static_cast<bool>(df_); }
    Mat derivative(double t) const override;

private:
    Fn f_, df_;
};

// t -> psi(t) F.
class MovedFramePath : public LagrangianPath {
public:
    MovedFramePath(SymplecticPathPtr psi, Mat F) : psi_(std::move(psi)), F_(std::move(F)) {}
    Mat frame(double t) const override { return psi_->value(t) * F_; }
    bool has_derivative() const override { return psi_->has_derivative(); }
    Mat derivative(double t) const override { return psi_->derivative(t) * F_; }

private:
    SymplecticPathPtr psi_;
    Mat F_;
};

// t -> Gr psi(t) = columns of [Id; psi(t)] in the double space.
class GraphPath : public LagrangianPath {
public:
    explicit GraphPath(SymplecticPathPtr psi) : psi_(std::move(psi)) {}
    Mat frame(double t) const override;
    bool has_derivative() const override { return psi_->has_derivative(); }
    Mat derivative(double t) const override;

private:
    SymplecticPathPtr psi_;
};

// Piecewise linear interpolation of sampled Lagrangians in one fixed chart.
class ChartSamplePath : public LagrangianPath {
public:
    ChartSamplePath(const SymplecticSpace& space, std::vector<double> times, const std::vector<Mat>& frames);
    Mat frame(double t) const override;
    bool has_derivative() const override { return true; }
    Mat derivative(double t) const override;
    const Mat& chart_transversal() const { return W_; }

private:
    size_t segment(double t) const;
    std::vector<double> t_;
    std::vector<Mat> M_;
    Mat V_, W_;
};

// t -> exp(t J) for the compatible structure of the space.
class RotationPath : public SymplecticPath {
public:
    RotationPath(const SymplecticSpace& space, double a, double b, double speed = 1.0)
        : J_(space.J), a_(a), b_(b), speed_(speed) {}
    Mat value(double t) const override;
    bool has_derivative() const override { return true; }
    Mat derivative(double t) const override { return speed_ * J_ * value(t); }
    double t_begin() const override { return a_; }
    double t_end() const override { return b_; }
    int dim() const override { return static_cast<int>(J_.rows()); }

private:
    Mat J_;
    double a_, b_, speed_;
};

class FunctionSymplecticPath : public SymplecticPath {
public:
    using Fn = std::function<Mat(double)>;
    FunctionSymplecticPath(int dim, double a, double b, Fn f, Fn df = {})
        : dim_(dim), a_(a), b_(b), f_(std::move(f)), df_(std::move(df)) {}
    Mat value(double t) const override { return f_(t); }
    bool has_derivative() const override { return static_cast<bool>(df_); }
    Mat derivative(double t) const override;
    double t_begin() const override { return a_; }
    double t_end() const override { return b_; }
    int dim() const override { return dim_; }

private:
    int dim_;
    double a_, b_;
    Fn f_, df_;
};

// psi^m on [a, a + m T]: psi_{k+1}(t) = psi(t - kT) P^k with P = psi(a + T).
class IteratedPath : public SymplecticPath {
public:
    IteratedPath(SymplecticPathPtr psi, int m);
    Mat value(double t) const override;
    bool has_derivative() const override { return psi_->has_derivative(); }
    Mat derivative(double t) const override;
    double t_begin() const override { return psi_->t_begin(); }
    double t_end() const override { return psi_->t_begin() + m_ * T_; }
    int dim() const override { return psi_->dim(); }

private:
    std::pair<int, double> locate(double t) const;
    SymplecticPathPtr psi_;
    int m_;
    double T_;
    std::vector<Mat> powers_;
};

SymplecticPathPtr iterate_path(SymplecticPathPtr psi, int m);

struct LagrangianPairPath {
    SymplecticSpace space;
    PathPtr l1, l2;
    double a = 0.0, b = 1.0;
    int grid = 512;
};

struct EngineOptions {
    double tol = kDefaultTol;  // relative singular value threshold for intersections
    double form_tol = 1e-7;    // relative threshold for degenerate crossing forms
    int max_refine_depth = 4;
    double fd_step = 1e-5;     // relative to b - a
};

struct CrossingRecord {
    double t0 = 0.0;
    int mult = 0;
    QuadraticForm form;  // form entering the formula of the owning report
    Inertia inertia;
    bool regular = true;
    int contribution2 = 0;  // twice the local contribution
    std::string method;     // "form" or "chart"
    double min_singular_value = 0.0;
    double scale = 1.0;  // magnitude used for the degeneracy threshold
};

enum class Convention { CLM, RS, CZ, LMaslov };
std::string to_string(Convention c);

struct IndexReport {
    Convention convention = Convention::CLM;
    long twice_value = 0;
    std::vector<CrossingRecord> crossings;
    double value() const { return 0.5 * static_cast<double>(twice_value); }
    int int_value() const;
};

// Crossing instants with the form Gamma(l1, l2, t0) attached.
std::vector<CrossingRecord> detect_crossings(const LagrangianPairPath& path, const EngineOptions& opt = {});

// Gamma(l1, l2, t0) = Q(l1, l1') - Q(l2, l2') on l1(t0) cap l2(t0).
QuadraticForm crossing_form(const LagrangianPairPath& path, double t0, const EngineOptions& opt = {});

IndexReport clm_index(const LagrangianPairPath& path, const EngineOptions& opt = {});
IndexReport rs_index(const LagrangianPairPath& path, const EngineOptions& opt = {});

// CLM(Delta, Gr psi) in the double space.
IndexReport cz_index(const SymplecticSpace& space, SymplecticPathPtr psi, int grid = 512, const EngineOptions& opt = {});
// CLM(L + L, Gr psi) in the double space.
IndexReport l_maslov_index(const SymplecticSpace& space, const Mat& L, SymplecticPathPtr psi, int grid = 512,
                           const EngineOptions& opt = {});
// CLM(L, Gr psi) for a Lagrangian L of the double space.
IndexReport graph_index(const SymplecticSpace& space, const Mat& lagrangian_in_double, SymplecticPathPtr psi,
                        int grid = 512, const EngineOptions& opt = {});

struct TripleIndexResult {
    int value = 0;
    int n_plus = 0;
    int dim_alpha_gamma = 0;
    int dim_alpha_beta_gamma = 0;
    int dim_alpha_beta = 0;
    int dim_beta_gamma = 0;
    int reduced_value = 0;  // extended coindex after reduction mod alpha cap beta + beta cap gamma
    int bound = 0;
    QuadraticForm Q;
};

TripleIndexResult triple_index(const SymplecticSpace& space, const Mat& alpha, const Mat& beta, const Mat& gamma,
                               double tol = kDefaultTol);
// Q(alpha, beta; gamma) on alpha cap (beta + gamma).
QuadraticForm triple_form(const SymplecticSpace& space, const Mat& alpha, const Mat& beta, const Mat& gamma,
                          double tol = kDefaultTol, bool alternate_decomposition = false);

struct HormanderResult {
    int value = 0;
    int value_alt = 0;
    bool agree = true;
};

HormanderResult hormander_index(const SymplecticSpace& space, const Mat& l1, const Mat& l2, const Mat& m1,
                                const Mat& m2, double tol = kDefaultTol);

struct PlusCurveReport {
    bool is_plus = false;
    int total_multiplicity = 0;
    int clm = 0;  // mul(a) + interior multiplicities, meaningful when is_plus
    std::vector<CrossingRecord> crossings;
};

PlusCurveReport plus_curve_report(const SymplecticSpace& space, const Mat& L0, PathPtr path, double a, double b,
                                  int grid = 512, const EngineOptions& opt = {});

}  // namespace sympsturm
