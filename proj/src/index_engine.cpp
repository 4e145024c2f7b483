#include "sympsturm/index_engine.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sympsturm {

Mat LagrangianPath::derivative(double) const { throw std::logic_error("path has no analytic derivative"); }
Mat SymplecticPath::derivative(double) const { throw std::logic_error("path has no analytic derivative"); }

Mat FunctionPath::derivative(double t) const {
    if (!df_) throw std::logic_error("path has no analytic derivative");
    return df_(t);
}

Mat FunctionSymplecticPath::derivative(double t) const {
    if (!df_) throw std::logic_error("path has no analytic derivative");
    return df_(t);
}

Mat GraphPath::frame(double t) const {
    const int d = psi_->dim();
    Mat F(2 * d, d);
    F << Mat::Identity(d, d), psi_->value(t);
    return F;
}

Mat GraphPath::derivative(double t) const {
    const int d = psi_->dim();
    Mat F(2 * d, d);
    F << Mat::Zero(d, d), psi_->derivative(t);
    return F;
}

Mat RotationPath::value(double t) const {
    const double th = speed_ * t;
    return std::cos(th) * Mat::Identity(J_.rows(), J_.cols()) + std::sin(th) * J_;
}

ChartSamplePath::ChartSamplePath(const SymplecticSpace& space, std::vector<double> times, const std::vector<Mat>& frames)
    : t_(std::move(times)) {
    if (t_.size() < 2 || t_.size() != frames.size()) throw InputError("sampled path needs at least two samples with times");
    for (size_t i = 1; i < t_.size(); ++i)
        if (!(t_[i] > t_[i - 1])) throw InputError("sample times must be strictly increasing");
    for (const auto& F : frames) require_lagrangian(space, F, "sample frame");
    const int n = space.n();
    std::vector<Mat> U;
    for (const auto& F : frames) U.push_back(orthonormalize(F));
    double best = -1.0;
    for (std::uint64_t seed = 1; seed <= 200 && best < 0.3; ++seed) {
        Mat W = orthonormalize(random_lagrangian(space, 1000 + seed));
        double margin = 1e300;
        for (const auto& Uk : U) {
            Mat M(space.dim(), 2 * n);
            M << W, Uk;
            Eigen::JacobiSVD<Mat> svd(M);
            margin = std::min(margin, svd.singularValues()(2 * n - 1));
        }
        if (margin > best) best = margin, W_ = W;
    }
    if (best < 1e-3) throw InputError("sampled path: no common transversal chart found");
    V_ = space.J * W_;
    Mat C(space.dim(), 2 * n);
    C << V_, W_;
    auto lu = C.partialPivLu();
    for (const auto& F : frames) {
        Mat XY = lu.solve(F);
        M_.push_back(XY.bottomRows(n) * XY.topRows(n).inverse());
    }
}

size_t ChartSamplePath::segment(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    size_t k = (it == t_.begin()) ? 0 : static_cast<size_t>(it - t_.begin()) - 1;
    return std::min(k, t_.size() - 2);
}

Mat ChartSamplePath::frame(double t) const {
    size_t k = segment(t);
    double s = (t - t_[k]) / (t_[k + 1] - t_[k]);
    return V_ + W_ * ((1.0 - s) * M_[k] + s * M_[k + 1]);
}

Mat ChartSamplePath::derivative(double t) const {
    size_t k = segment(t);
    return W_ * (M_[k + 1] - M_[k]) / (t_[k + 1] - t_[k]);
}

IteratedPath::IteratedPath(SymplecticPathPtr psi, int m) : psi_(std::move(psi)), m_(m) {
    if (m < 1) throw InputError("iteration count must be at least 1");
    T_ = psi_->t_end() - psi_->t_begin();
    Mat P = psi_->value(psi_->t_end());
    powers_.push_back(Mat::Identity(P.rows(), P.cols()));
    for (int k = 1; k < m; ++k) powers_.push_back(powers_.back() * P);
}

std::pair<int, double> IteratedPath::locate(double t) const {
    double u = t - psi_->t_begin();
    int k = static_cast<int>(std::floor(u / T_));
    k = std::clamp(k, 0, m_ - 1);
    return {k, psi_->t_begin() + u - k * T_};
}

Mat IteratedPath::value(double t) const {
    auto [k, tau] = locate(t);
    return psi_->value(tau) * powers_[k];
}

Mat IteratedPath::derivative(double t) const {
    auto [k, tau] = locate(t);
    return psi_->derivative(tau) * powers_[k];
}

SymplecticPathPtr iterate_path(SymplecticPathPtr psi, int m) {
    if (m == 1) return psi;
    return std::make_shared<IteratedPath>(std::move(psi), m);
}

std::string to_string(Convention c) {
    switch (c) {
        case Convention::CLM: return "CLM";
        case Convention::RS: return "RS";
        case Convention::CZ: return "CZ";
        case Convention::LMaslov: return "L-Maslov";
    }
    return "?";
}

int IndexReport::int_value() const {
    if (twice_value % 2 != 0) throw std::logic_error("index value is a half integer");
    return static_cast<int>(twice_value / 2);
}

namespace {

constexpr double kPhase = 0.3819660112501051;

struct Sample {
    double t = 0.0;
    double smin = 0.0;
    double smax = 1.0;
    int det_sign = 0;
};

Mat thin_q(const Mat& F) {
    Eigen::HouseholderQR<Mat> qr(F);
    return qr.householderQ() * Mat::Identity(F.rows(), F.cols());
}

Sample evaluate(const LagrangianPairPath& P, double t) {
    Mat F1 = P.l1->frame(t), F2 = P.l2->frame(t);
    const int d = static_cast<int>(F1.rows());
    Mat M(d, F1.cols() + F2.cols());
    M << thin_q(F1), thin_q(F2);
    Eigen::JacobiSVD<Mat> svd(M);
    const Vec& s = svd.singularValues();
    Sample out;
    out.t = t;
    out.smax = s(0);
    out.smin = s(s.size() - 1);
    Mat G(d, F1.cols() + F2.cols());
    G << F1, F2;
    double scale = 1.0;
    for (int j = 0; j < G.cols(); ++j) scale *= G.col(j).norm();
    double det = G.determinant() / scale;
    out.det_sign = det > 0 ? 1 : (det < 0 ? -1 : 0);
    return out;
}

Mat leg_derivative(const LagrangianPath& leg, double t, double a, double b, double step) {
    if (leg.has_derivative()) return leg.derivative(t);
    const double h = step * (b - a);
    auto diff = [&](double hh) -> Mat {
        if (t - hh >= a && t + hh <= b) return (leg.frame(t + hh) - leg.frame(t - hh)) / (2.0 * hh);
        if (t + 2.0 * hh <= b) return (-3.0 * leg.frame(t) + 4.0 * leg.frame(t + hh) - leg.frame(t + 2.0 * hh)) / (2.0 * hh);
        return (3.0 * leg.frame(t) - 4.0 * leg.frame(t - hh) + leg.frame(t - 2.0 * hh)) / (2.0 * hh);
    };
    return (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
}

// Q(l, l')[v] = omega(v, F' c) with v = F c, restricted to the columns of V.
Mat leg_gram(const SymplecticSpace& space, const LagrangianPath& leg, double t, const Mat& V, double a, double b,
             double step, double& scale) {
    Mat F = leg.frame(t);
    Mat dF = leg_derivative(leg, t, a, b, step);
    Mat C = F.colPivHouseholderQr().solve(V);
    Mat D = dF * C;
    for (int j = 0; j < D.cols(); ++j) scale = std::max(scale, D.col(j).norm());
    Mat G = V.transpose() * space.form * D;
    return 0.5 * (G + G.transpose());
}

struct FormData {
    QuadraticForm form;
    double scale = 0.0;
};

FormData gamma_form(const LagrangianPairPath& P, double t0, const Mat& basis, const EngineOptions& opt) {
    FormData out;
    double scale = 0.0;
    Mat G1 = leg_gram(P.space, *P.l1, t0, basis, P.a, P.b, opt.fd_step, scale);
    Mat G2 = leg_gram(P.space, *P.l2, t0, basis, P.a, P.b, opt.fd_step, scale);
    out.form.basis = basis;
    out.form.gram = G1 - G2;
    out.scale = scale;
    return out;
}

class Scanner {
public:
    using Classify = std::function<std::pair<int, bool>(double)>;
    Scanner(const LagrangianPairPath& P, const EngineOptions& opt, Classify classify)
        : P_(P), opt_(opt), classify_(std::move(classify)) {}

    std::vector<Sample> found;

    void scan(double lo, double hi, int N, int depth, const Sample& slo, const Sample& shi) {
        const double h = (hi - lo) / N;
        std::vector<Sample> s;
        s.push_back(slo);
        for (int k = 0; k < N; ++k) s.push_back(evaluate(P_, lo + h * (k + kPhase)));
        s.push_back(shi);
        const size_t M = s.size();

        int run = 0;
        for (size_t k = 0; k < M && depth == 0; ++k) {
            run = (s[k].smin < 10.0 * opt_.tol * s[k].smax) ? run + 1 : 0;
            if (run >= 3)
                throw DegeneratePathError("the two Lagrangian paths intersect along a whole segment near t = " +
                                          std::to_string(s[k].t));
        }

        std::vector<Sample> local;
        auto accept = [&](const Sample& c) {
            if (c.smin >= opt_.tol * c.smax) return;
            const double span = P_.b - P_.a;
            if (c.t - P_.a < 1e-11 * span || P_.b - c.t < 1e-11 * span) return;
            for (const auto& e : local)
                if (std::abs(e.t - c.t) < 1e-9 * span) return;
            local.push_back(c);
        };

        for (size_t k = 0; k < M; ++k) {
            bool left = (k == 0) || s[k].smin <= s[k - 1].smin;
            bool right = (k + 1 == M) || s[k].smin <= s[k + 1].smin;
            if (!(left && right)) continue;
            double l = s[k == 0 ? 0 : k - 1].t, r = s[k + 1 == M ? M - 1 : k + 1].t;
            accept(minimize(l, r));
        }
        for (size_t k = 0; k + 1 < M; ++k) {
            int sl = node_sign(s, k, +1), sr = node_sign(s, k + 1, -1);
            if (sl * sr < 0) accept(bisect(s[k].t, s[k + 1].t, sl));
        }

        for (size_t k = 0; k + 1 < M; ++k) {
            double tl = s[k].t, tr = s[k + 1].t;
            // a regular crossing flips the indicator iff its multiplicity is odd
            int odd = 0;
            bool degenerate = false;
            for (const auto& c : local)
                if (c.t > tl && c.t < tr) {
                    auto [m, regular] = classify_(c.t);
                    odd += m;
                    degenerate = degenerate || !regular;
                }
            int change = (node_sign(s, k, +1) * node_sign(s, k + 1, -1) < 0) ? 1 : 0;
            if (degenerate || (odd % 2) == change) continue;
            if (depth >= opt_.max_refine_depth)
                throw RefinementError("crossing detection grid too coarse near t = " + std::to_string(tl) +
                                      "; increase the grid");
            std::vector<Sample> keep;
            for (const auto& c : local)
                if (!(c.t > tl && c.t < tr)) keep.push_back(c);
            local = keep;
            Scanner sub(P_, opt_, classify_);
            sub.scan(tl, tr, 16, depth + 1, s[k], s[k + 1]);
            for (const auto& c : sub.found) local.push_back(c);
        }
        for (const auto& c : local) found.push_back(c);
    }

private:
    // Sign of the determinant indicator at a node; nodes sitting on a crossing
    // are nudged into the neighbouring cell.
    int node_sign(const std::vector<Sample>& s, size_t k, int dir) const {
        if (s[k].det_sign != 0 && s[k].smin >= opt_.tol * s[k].smax) return s[k].det_sign;
        size_t j = (dir > 0) ? std::min(k + 1, s.size() - 1) : (k == 0 ? 0 : k - 1);
        double t = s[k].t + 1e-7 * (s[j].t - s[k].t);
        return evaluate(P_, t).det_sign;
    }

    Sample minimize(double l, double r) const {
        auto f = [&](double t) { return smin_ratio(t); };
        boost::uintmax_t iters = 200;
        auto res = boost::math::tools::brent_find_minima(f, l, r, std::numeric_limits<double>::digits, iters);
        // brent stops near sqrt(eps) relative accuracy; V-shaped minima need more
        double h = 1e-3 * (r - l) + 1e-7 * std::abs(res.first) + 1e-8;
        double lo = std::max(l, res.first - h), hi = std::min(r, res.first + h);
        constexpr double g = 0.6180339887498949;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        while (hi - lo > 1e-16 * std::max(1.0, std::abs(lo))) {
            if (f1 <= f2) {
                hi = x2, x2 = x1, f2 = f1;
                x1 = hi - g * (hi - lo), f1 = f(x1);
            } else {
                lo = x1, x1 = x2, f1 = f2;
                x2 = lo + g * (hi - lo), f2 = f(x2);
            }
            if (!(x1 < x2)) break;
        }
        double best = f1 <= f2 ? x1 : x2;
        return evaluate(P_, (f(best) <= res.second) ? best : res.first);
    }

    double smin_ratio(double t) const {
        Sample s = evaluate(P_, t);
        return s.smin / s.smax;
    }

    Sample bisect(double l, double r, int sl) const {
        for (int it = 0; it < 200 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
            double m = 0.5 * (l + r);
            int sm = evaluate(P_, m).det_sign;
            if (sm == 0) return evaluate(P_, m);
            if (sm == sl) l = m;
            else r = m;
        }
        Sample a = evaluate(P_, l), b = evaluate(P_, r);
        return a.smin < b.smin ? a : b;
    }

    const LagrangianPairPath& P_;
    const EngineOptions& opt_;
    Classify classify_;
};

void validate(const LagrangianPairPath& P) {
    if (!P.l1 || !P.l2) throw InputError("pair path is missing a leg");
    if (!(P.b > P.a)) throw InputError("pair path interval must satisfy a < b");
    if (P.grid < 4) throw InputError("pair path grid must be at least 4");
    require_lagrangian(P.space, P.l1->frame(P.a), "first leg");
    require_lagrangian(P.space, P.l2->frame(P.a), "second leg");
}

enum class Where { Start, Interior, End };

Where where_of(const LagrangianPairPath& P, double t) {
    const double span = P.b - P.a;
    if (t - P.a <= 1e-11 * span) return Where::Start;
    if (P.b - t <= 1e-11 * span) return Where::End;
    return Where::Interior;
}

// Twice the local CLM(l1, l2) contribution of a crossing, computed from the
// change of inertia of S2 - S1 in a chart transversal to both legs.
int chart_contribution2(const LagrangianPairPath& P, double t0, int mult, Where w, double gap, const EngineOptions& opt) {
    const SymplecticSpace& sp = P.space;
    const int n = sp.n();
    auto sigma = [&](double t) {
        Sample s = evaluate(P, t);
        return s.smin / s.smax;
    };
    double delta = std::min(0.5 * gap, 0.25 * (P.b - P.a));
    auto tl = [&] { return std::max(P.a, t0 - delta); };
    auto tr = [&] { return std::min(P.b, t0 + delta); };
    int tries = 0;
    while (true) {
        bool okl = (w == Where::Start) || sigma(tl()) > 100.0 * opt.tol;
        bool okr = (w == Where::End) || sigma(tr()) > 100.0 * opt.tol;
        if (okl && okr) break;
        delta *= 0.5;
        if (++tries > 40) throw DegeneratePathError("cannot isolate a degenerate crossing at t = " + std::to_string(t0));
    }
    std::vector<double> ts{t0};
    if (w != Where::Start) ts.push_back(tl());
    if (w != Where::End) ts.push_back(tr());

    Mat W;
    double best = -1.0;
    for (std::uint64_t seed = 1; seed <= 64 && best < 0.2; ++seed) {
        Mat C = orthonormalize(random_lagrangian(sp, 7919 * seed + 13));
        double margin = 1e300;
        for (double t : ts)
            for (const LagrangianPath* leg : {P.l1.get(), P.l2.get()}) {
                Mat M(sp.dim(), 2 * n);
                M << C, thin_q(leg->frame(t));
                Eigen::JacobiSVD<Mat> svd(M);
                margin = std::min(margin, svd.singularValues()(2 * n - 1));
            }
        if (margin > best) best = margin, W = C;
    }
    Mat V = sp.J * W;
    Mat VW(sp.dim(), 2 * n);
    VW << V, W;
    auto lu = VW.partialPivLu();
    Mat CVW = V.transpose() * sp.form * W;
    auto chart = [&](const Mat& F) {
        Mat XY = lu.solve(F);
        Mat S = CVW * XY.bottomRows(n) * XY.topRows(n).inverse();
        return Mat(0.5 * (S + S.transpose()));
    };
    auto D = [&](double t) { return Mat(chart(P.l2->frame(t)) - chart(P.l1->frame(t))); };
    auto npos = [&](const Mat& A) {
        Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
        int c = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) c += es.eigenvalues()(i) > 0.0;
        return c;
    };
    auto npos_deflated = [&](const Mat& A) {
        Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
        std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
        int c = 0;
        for (size_t i = static_cast<size_t>(mult); i < ev.size(); ++i) c += ev[i] > 0.0;
        return c;
    };
    int c = 0;
    switch (w) {
        case Where::Start: c = npos(D(tr())) - npos_deflated(D(t0)); break;
        case Where::Interior: c = npos(D(tr())) - npos(D(tl())); break;
        case Where::End: c = npos_deflated(D(t0)) - npos(D(tl())); break;
    }
    return 2 * c;
}

std::vector<double> gaps(const std::vector<CrossingRecord>& recs, double a, double b) {
    std::vector<double> g(recs.size());
    for (size_t i = 0; i < recs.size(); ++i) {
        double lo = (i == 0) ? a - (b - a) : recs[i - 1].t0;
        double hi = (i + 1 == recs.size()) ? b + (b - a) : recs[i + 1].t0;
        g[i] = std::min(recs[i].t0 - lo, hi - recs[i].t0);
        if (g[i] <= 0.0) g[i] = 1e-9 * (b - a);
    }
    return g;
}

LagrangianPairPath swapped(const LagrangianPairPath& P) {
    LagrangianPairPath Q = P;
    std::swap(Q.l1, Q.l2);
    return Q;
}

}  // namespace

std::vector<CrossingRecord> detect_crossings(const LagrangianPairPath& P, const EngineOptions& opt) {
    validate(P);
    double path_scale = 0.0;
    for (int k = 0; k <= 32; ++k) {
        double t = P.a + (P.b - P.a) * k / 32.0;
        for (const LagrangianPath* leg : {P.l1.get(), P.l2.get()}) {
            Mat F = leg->frame(t);
            Mat dF = leg_derivative(*leg, t, P.a, P.b, opt.fd_step);
            Mat C = F.colPivHouseholderQr().solve(orthonormalize(F));
            path_scale = std::max(path_scale, (dF * C).norm());
        }
    }
    if (path_scale == 0.0) path_scale = 1.0;

    auto record = [&](double t, double smin) {
        CrossingRecord r;
        Intersection I = intersection(P.space, P.l1->frame(t), P.l2->frame(t), opt.tol);
        r.t0 = t;
        r.mult = I.dim;
        if (I.dim == 0) return r;
        r.min_singular_value = smin;
        FormData fd = gamma_form(P, t, I.basis, opt);
        r.form = fd.form;
        r.scale = path_scale;
        r.inertia = inertia(r.form, opt.form_tol * path_scale);
        r.regular = r.inertia.zero == 0;
        r.method = "form";
        return r;
    };

    Sample sa = evaluate(P, P.a), sb = evaluate(P, P.b);
    Scanner sc(P, opt, [&](double t) {
        CrossingRecord r = record(t, 0.0);
        return std::make_pair(r.mult, r.regular);
    });
    sc.scan(P.a, P.b, P.grid, 0, sa, sb);
    std::vector<Sample> all;
    if (sa.smin < opt.tol * sa.smax) all.push_back(sa);
    for (const auto& s : sc.found) all.push_back(s);
    if (sb.smin < opt.tol * sb.smax) all.push_back(sb);
    std::sort(all.begin(), all.end(), [](const Sample& x, const Sample& y) { return x.t < y.t; });

    std::vector<CrossingRecord> out;
    for (const auto& s : all) {
        if (!out.empty() && std::abs(out.back().t0 - s.t) < 1e-9 * (P.b - P.a)) continue;
        CrossingRecord r = record(s.t, s.smin / s.smax);
        if (r.mult > 0) out.push_back(r);
    }
    return out;
}

QuadraticForm crossing_form(const LagrangianPairPath& P, double t0, const EngineOptions& opt) {
    validate(P);
    Intersection I = intersection(P.space, P.l1->frame(t0), P.l2->frame(t0), opt.tol);
    if (I.dim == 0) throw InputError("crossing_form: t0 = " + std::to_string(t0) + " is not a crossing instant");
    return gamma_form(P, t0, I.basis, opt).form;
}

IndexReport clm_index(const LagrangianPairPath& P, const EngineOptions& opt) {
    auto recs = detect_crossings(P, opt);
    auto g = gaps(recs, P.a, P.b);
    IndexReport rep;
    rep.convention = Convention::CLM;
    for (size_t i = 0; i < recs.size(); ++i) {
        CrossingRecord r = recs[i];
        r.form.gram = -r.form.gram;  // Gamma(l2, l1)
        std::swap(r.inertia.pos, r.inertia.neg);
        Where w = where_of(P, r.t0);
        if (r.regular) {
            r.contribution2 = (w == Where::Start) ? 2 * r.inertia.pos
                              : (w == Where::End) ? -2 * r.inertia.neg
                                                  : 2 * r.inertia.sgn();
        } else {
            r.contribution2 = chart_contribution2(P, r.t0, r.mult, w, g[i], opt);
            r.method = "chart";
        }
        rep.twice_value += r.contribution2;
        rep.crossings.push_back(r);
    }
    return rep;
}

IndexReport rs_index(const LagrangianPairPath& P, const EngineOptions& opt) {
    auto recs = detect_crossings(P, opt);
    auto g = gaps(recs, P.a, P.b);
    IndexReport rep;
    rep.convention = Convention::RS;
    LagrangianPairPath Q = swapped(P);
    for (size_t i = 0; i < recs.size(); ++i) {
        CrossingRecord r = recs[i];
        Where w = where_of(P, r.t0);
        if (r.regular) {
            r.contribution2 = (w == Where::Interior) ? 2 * r.inertia.sgn() : r.inertia.sgn();
        } else {
            int c2 = chart_contribution2(Q, r.t0, r.mult, w, g[i], opt);
            r.contribution2 = (w == Where::Start) ? c2 - r.mult : (w == Where::End) ? c2 + r.mult : c2;
            r.method = "chart";
        }
        rep.twice_value += r.contribution2;
        rep.crossings.push_back(r);
    }
    return rep;
}

IndexReport graph_index(const SymplecticSpace& space, const Mat& L, SymplecticPathPtr psi, int grid,
                        const EngineOptions& opt) {
    if (psi->dim() != space.dim()) throw InputError("symplectic path dimension does not match the space");
    for (double t : {psi->t_begin(), 0.5 * (psi->t_begin() + psi->t_end()), psi->t_end()})
        if (!is_symplectic_matrix(space, psi->value(t), 1e-7))
            throw InputError("symplectic path is not symplectic at t = " + std::to_string(t));
    LagrangianPairPath P;
    P.space = double_space(space);
    P.l1 = std::make_shared<ConstantPath>(L);
    P.l2 = std::make_shared<GraphPath>(psi);
    P.a = psi->t_begin();
    P.b = psi->t_end();
    P.grid = grid;
    return clm_index(P, opt);
}

IndexReport cz_index(const SymplecticSpace& space, SymplecticPathPtr psi, int grid, const EngineOptions& opt) {
    IndexReport r = graph_index(space, diagonal_frame(space.dim()), std::move(psi), grid, opt);
    r.convention = Convention::CZ;
    return r;
}

IndexReport l_maslov_index(const SymplecticSpace& space, const Mat& L, SymplecticPathPtr psi, int grid,
                           const EngineOptions& opt) {
    require_lagrangian(space, L, "L");
    const int d = space.dim(), n = space.n();
    Mat LL = Mat::Zero(2 * d, 2 * n);
    LL.topLeftCorner(d, n) = L;
    LL.bottomRightCorner(d, n) = L;
    IndexReport r = graph_index(space, LL, std::move(psi), grid, opt);
    r.convention = Convention::LMaslov;
    return r;
}

QuadraticForm triple_form(const SymplecticSpace& space, const Mat& alpha, const Mat& beta, const Mat& gamma, double tol,
                          bool alternate_decomposition) {
    Mat A = subspace_intersection(alpha, subspace_sum(beta, gamma, tol), tol);
    QuadraticForm q;
    q.basis = A;
    const int k = static_cast<int>(A.cols());
    q.gram = Mat::Zero(k, k);
    if (k == 0) return q;
    Mat Bq = orthonormalize(beta, tol), Gq = orthonormalize(gamma, tol);
    Mat BG(space.dim(), Bq.cols() + Gq.cols());
    BG << Bq, Gq;
    Mat X = BG.completeOrthogonalDecomposition().solve(A);
    Mat Bv = Bq * X.topRows(Bq.cols());
    Mat Cv = Gq * X.bottomRows(Gq.cols());
    if (alternate_decomposition) {
        Mat K = subspace_intersection(Bq, Gq, tol);
        if (K.cols() > 0) {
            Mat shift = K * Mat::Ones(K.cols(), k);
            Bv += shift;
            Cv -= shift;
        }
    }
    Mat G = Bv.transpose() * space.form * Cv;
    q.gram = 0.5 * (G + G.transpose());
    return q;
}

namespace {

double form_threshold(const Mat& gram) { return 1e-8 * std::max(1.0, max_abs(gram)); }

}  // namespace

TripleIndexResult triple_index(const SymplecticSpace& space, const Mat& alpha, const Mat& beta, const Mat& gamma,
                               double tol) {
    for (const Mat* F : {&alpha, &beta, &gamma}) require_lagrangian(space, *F, "triple index argument");
    TripleIndexResult r;
    r.Q = triple_form(space, alpha, beta, gamma, tol);
    Inertia in = inertia(r.Q.gram, form_threshold(r.Q.gram));
    QuadraticForm q2 = triple_form(space, alpha, beta, gamma, tol, true);
    Inertia in2 = inertia(q2.gram, form_threshold(q2.gram));
    if (in2.pos != in.pos) throw std::logic_error("triple index: positive index depends on the decomposition");
    r.n_plus = in.pos;
    Mat ab = subspace_intersection(alpha, beta, tol);
    Mat bg = subspace_intersection(beta, gamma, tol);
    r.dim_alpha_beta = static_cast<int>(ab.cols());
    r.dim_beta_gamma = static_cast<int>(bg.cols());
    r.dim_alpha_gamma = subspace_dim(subspace_intersection(alpha, gamma, tol), tol);
    r.dim_alpha_beta_gamma = subspace_dim(subspace_intersection(ab, gamma, tol), tol);
    r.value = r.n_plus + r.dim_alpha_gamma - r.dim_alpha_beta_gamma;
    r.bound = space.n() - r.dim_alpha_beta - r.dim_beta_gamma + r.dim_alpha_beta_gamma;

    Mat eps = subspace_sum(ab, bg, tol);
    if (eps.cols() == space.n()) {
        r.reduced_value = 0;
    } else {
        Reduction ra = symplectic_reduction(space, alpha, eps, tol);
        Reduction rb = symplectic_reduction(space, beta, eps, tol);
        Reduction rc = symplectic_reduction(space, gamma, eps, tol);
        QuadraticForm qr = triple_form(ra.reduced, ra.frame, rb.frame, rc.frame, tol);
        r.reduced_value = inertia(qr.gram, form_threshold(qr.gram)).extended_coindex();
    }
    return r;
}

HormanderResult hormander_index(const SymplecticSpace& space, const Mat& l1, const Mat& l2, const Mat& m1, const Mat& m2,
                                double tol) {
    HormanderResult h;
    h.value = triple_index(space, l1, l2, m2, tol).value - triple_index(space, l1, l2, m1, tol).value;
    h.value_alt = triple_index(space, l1, m1, m2, tol).value - triple_index(space, l2, m1, m2, tol).value;
    h.agree = h.value == h.value_alt;
    return h;
}

PlusCurveReport plus_curve_report(const SymplecticSpace& space, const Mat& L0, PathPtr path, double a, double b, int grid,
                                  const EngineOptions& opt) {
    LagrangianPairPath P;
    P.space = space;
    P.l1 = std::make_shared<ConstantPath>(L0);
    P.l2 = std::move(path);
    P.a = a;
    P.b = b;
    P.grid = grid;
    auto recs = detect_crossings(P, opt);
    PlusCurveReport rep;
    rep.is_plus = true;
    for (auto r : recs) {
        r.form.gram = -r.form.gram;  // Gamma(l, L0)
        std::swap(r.inertia.pos, r.inertia.neg);
        if (r.inertia.pos != r.mult) rep.is_plus = false;
        rep.total_multiplicity += r.mult;
        if (where_of(P, r.t0) != Where::End) rep.clm += r.mult;
        rep.crossings.push_back(r);
    }
    return rep;
}

}  // namespace sympsturm
