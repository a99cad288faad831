#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cmv/dual.hpp"
#include "cmv/projection.hpp"
#include "cmv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmv {

enum class ModelKind { PlaneCurve, TwistedCubic };

// Chart fixing for the nearest-point problem. Observations live in the
// gamma_0 = 1 patch by default; a view whose first coordinate vanishes is
// rescaled to its largest coordinate instead and the index recorded
// (strict mode disables that rescue to mirror the EDD setup exactly).
struct Chart {
    int h_index = 0;
    int alpha_index = 0;
    int m_index = 0;
    std::vector<int> obs_index;  // per view
};

class Objective {
  public:
    Arrangement<double> arr;
    ModelKind kind = ModelKind::PlaneCurve;
    int degree = 2;
    std::vector<std::vector<double>> obs;  // per view, chart coordinates (length full-1)
    std::vector<double> weights;           // per residual coordinate, strictly positive
    Chart chart;

    int curve_len() const
    {
        return static_cast<int>(MonomialOrder::get(degree, 3).size());
    }
    int n_views() const { return static_cast<int>(arr.cameras.size()); }
    int n_params() const
    {
        return kind == ModelKind::TwistedCubic ? 12 : 3 + curve_len() - 1;
    }
    int n_residuals() const { return n_views() * (curve_len() - 1); }
};

// Build an objective from full homogeneous observations; chart indices come
// from the observations themselves (first coordinate, or the largest one
// when the first is near zero and strict_first_chart is off).
inline Objective make_objective(const Arrangement<double>& arr,
                                const std::vector<ImageCurve<double>>& views,
                                ModelKind kind, std::vector<double> weights = {},
                                bool strict_first_chart = false)
{
    Objective o;
    o.arr = arr;
    o.kind = kind;
    o.degree = views.empty() ? 2 : views[0].degree;
    for (const auto& view : views) {
        ProjVec<double> c = view.coeffs;
        int idx = 0;
        double maxmag = 0.0;
        for (int i = 0; i < c.size(); ++i) maxmag = std::max(maxmag, std::fabs(c[i]));
        if (std::fabs(c[0]) < 1e-6 * maxmag && !strict_first_chart) {
            for (int i = 0; i < c.size(); ++i)
                if (std::fabs(c[i]) == maxmag) { idx = i; break; }
        }
        o.chart.obs_index.push_back(idx);
        std::vector<double> u;
        for (int i = 0; i < c.size(); ++i)
            if (i != idx) u.push_back(c[i] / c[idx]);
        o.obs.push_back(std::move(u));
    }
    int m = 0;
    for (const auto& u : o.obs) m += static_cast<int>(u.size());
    o.weights = weights.empty() ? std::vector<double>(m, 1.0) : std::move(weights);
    if (static_cast<int>(o.weights.size()) != m)
        throw Error(errc::invalid_input, "weight count does not match residual count");
    for (double w : o.weights)
        if (!(w > 0)) throw Error(errc::invalid_input, "weights must be strictly positive");
    return o;
}

namespace detail {

template <class T>
ProjVec<T> embed_params(const Objective& obj, const std::vector<T>& p, int* split = nullptr)
{
    if (obj.kind == ModelKind::TwistedCubic) {
        ProjVec<T> m;
        m.v.resize(13);
        int w = 0;
        for (int i = 0; i < 13; ++i)
            m[i] = (i == obj.chart.m_index) ? FieldTraits<T>::one() : p[w++];
        return m;
    }
    if (split) *split = 3;
    ProjVec<T> hv;
    hv.v.resize(4);
    int w = 0;
    for (int i = 0; i < 4; ++i)
        hv[i] = (i == obj.chart.h_index) ? FieldTraits<T>::one() : p[w++];
    ProjVec<T> av;
    av.v.resize(obj.curve_len());
    for (int i = 0; i < obj.curve_len(); ++i)
        av[i] = (i == obj.chart.alpha_index) ? FieldTraits<T>::one() : p[w++];
    ProjVec<T> joined;
    joined.v = hv.v;
    joined.v.insert(joined.v.end(), av.v.begin(), av.v.end());
    return joined;
}

// Curve coefficients in view `view` as a function of the parameters.
template <class T>
std::vector<T> view_curve(const Objective& obj, const std::vector<T>& p, int view)
{
    Mat<T> cam(3, 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) cam(i, j) = T(obj.arr.cameras[view].matrix(i, j));
    if (obj.kind == ModelKind::TwistedCubic) {
        TwistedCubicParam<T> t;
        t.m = embed_params(obj, p);
        ChowForm<T> beta = iota_tw(t);
        Mat<T> chat(6, 3);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 3; ++j) chat(i, j) = T(obj.arr.cameras[view].chat(i, j));
        Mat<T> nu = veronese_matrix(3, chat);
        return nu.transpose() * beta.coeffs.v;
    }
    ProjVec<T> joined = embed_params(obj, p);
    ProjVec<T> h{joined.v[0], joined.v[1], joined.v[2], joined.v[3]};
    std::vector<T> alpha(joined.v.begin() + 4, joined.v.end());
    const T z = FieldTraits<T>::zero();
    Mat<T> hm(4, 3, {-h[1], -h[2], -h[3], h[0], z, z, z, h[0], z, z, z, h[0]});
    Mat<T> ch = cam * hm;
    Mat<T> nu = veronese_matrix(obj.degree, ch);
    T d = det(nu);
    if (FieldTraits<T>::is_zero(d))
        throw Error(errc::plane_through_center, "plane passes through a camera center");
    // adjugate via inverse * det keeps this differentiable and cheap
    Mat<T> adjt = inverse(nu).scaled(d).transpose();
    return adjt * alpha;
}

template <class T>
std::vector<T> residual_t(const Objective& obj, const std::vector<T>& p)
{
    std::vector<T> out;
    out.reserve(obj.n_residuals());
    int w = 0;
    for (int view = 0; view < obj.n_views(); ++view) {
        std::vector<T> g = view_curve(obj, p, view);
        int ci = obj.chart.obs_index[view];
        double scale = 0.0;
        for (const T& x : g) scale = std::max(scale, FieldTraits<T>::magnitude(x));
        if (FieldTraits<T>::magnitude(g[ci]) <= 1e-12 * scale)
            throw Error(errc::chart_degenerate, "image curve leaves the affine chart",
                        "view " + std::to_string(view));
        T inv = FieldTraits<T>::one() / g[ci];
        int k = 0;
        for (int i = 0; i < static_cast<int>(g.size()); ++i) {
            if (i == ci) continue;
            T r = g[i] * inv - T(obj.obs[view][k]);
            out.push_back(T(std::sqrt(obj.weights[w])) * r);
            ++k;
            ++w;
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<double> residual(const Objective& obj, const std::vector<double>& p)
{
    if (static_cast<int>(p.size()) != obj.n_params())
        throw Error(errc::invalid_input, "parameter vector has wrong length");
    return detail::residual_t(obj, p);
}

// Exact forward-mode derivative of the residual (dual propagation through
// the polynomial / adjugate formulas).
inline Mat<double> jacobian(const Objective& obj, const std::vector<double>& p)
{
    int n = obj.n_params();
    if (static_cast<int>(p.size()) != n)
        throw Error(errc::invalid_input, "parameter vector has wrong length");
    if (n > kMaxDualVars) throw Error(errc::invalid_input, "too many parameters for dual mode");
    std::vector<Dual> dp(n);
    for (int i = 0; i < n; ++i) dp[i] = Dual::variable(p[i], i);
    std::vector<Dual> r = detail::residual_t(obj, dp);
    Mat<double> j(static_cast<int>(r.size()), n);
    for (int i = 0; i < j.rows(); ++i)
        for (int k = 0; k < n; ++k) j(i, k) = r[i].g[k];
    return j;
}

inline double objective_value(const Objective& obj, const std::vector<double>& p)
{
    double s = 0;
    for (double r : residual(obj, p)) s += r * r;
    return s;
}

// || J^T r ||_2: the first-order condition value in the fixed chart.
inline double critical_residual(const Objective& obj, const std::vector<double>& p)
{
    std::vector<double> r = residual(obj, p);
    Mat<double> j = jacobian(obj, p);
    double s = 0;
    for (int k = 0; k < j.cols(); ++k) {
        double g = 0;
        for (int i = 0; i < j.rows(); ++i) g += j(i, k) * r[i];
        s += g * g;
    }
    return std::sqrt(s);
}

struct OptOptions {
    double gtol = 1e-10;
    int max_iter = 400;
    double tau = 1e-3;        // initial damping scale
    double step_tol = 1e-15;
    double cert = 1e-8;       // certification threshold on ||J^T r||
};

struct OptResult {
    std::vector<double> params;
    double objective = 0.0;
    double grad_norm = 0.0;
    int iters = 0;
    bool converged = false;
};

// Damped least squares: solve (J^T J + mu I) s = -J^T r, adapt mu by the
// gain ratio. Steps that leave the chart are rejected like failed steps.
inline OptResult optimize(const Objective& obj, const std::vector<double>& init,
                          const OptOptions& opts = {})
{
    std::vector<double> x = init;
    std::vector<double> r = residual(obj, x);  // chart-degenerate init propagates
    Mat<double> j = jacobian(obj, x);
    int n = obj.n_params();

    auto grad_of = [&](const Mat<double>& jm, const std::vector<double>& rv) {
        std::vector<double> g(n, 0.0);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < jm.rows(); ++i) g[k] += jm(i, k) * rv[i];
        return g;
    };
    auto sumsq = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x * x;
        return s;
    };

    double f = sumsq(r);
    std::vector<double> g = grad_of(j, r);
    double mu = 0.0;
    {
        double maxdiag = 0.0;
        for (int k = 0; k < n; ++k) {
            double d = 0;
            for (int i = 0; i < j.rows(); ++i) d += j(i, k) * j(i, k);
            maxdiag = std::max(maxdiag, d);
        }
        mu = opts.tau * std::max(maxdiag, 1e-12);
    }
    double nu = 2.0;
    OptResult res;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        double gn = std::sqrt(sumsq(g));
        if (gn <= opts.gtol) break;
        // normal equations with damping
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd b(n);
        for (int p1 = 0; p1 < n; ++p1) {
            b(p1) = -g[p1];
            for (int p2 = 0; p2 < n; ++p2) {
                double s = 0;
                for (int i = 0; i < j.rows(); ++i) s += j(i, p1) * j(i, p2);
                a(p1, p2) = s;
            }
            a(p1, p1) += mu;
        }
        Eigen::VectorXd step = a.ldlt().solve(b);
        double snorm = step.norm(), xnorm = 0;
        for (double v : x) xnorm += v * v;
        xnorm = std::sqrt(xnorm);
        if (snorm <= opts.step_tol * (xnorm + opts.step_tol)) break;
        std::vector<double> xs(x);
        for (int k = 0; k < n; ++k) xs[k] += step(k);
        double predicted = 0.0;  // L(0) - L(s) = 0.5 s^T (mu s - g)
        for (int k = 0; k < n; ++k) predicted += 0.5 * step(k) * (mu * step(k) - g[k]);
        bool ok = true;
        double fs = 0;
        std::vector<double> rs;
        try {
            rs = residual(obj, xs);
            fs = sumsq(rs);
        } catch (const Error&) {
            ok = false;  // chart exit: treat as a rejected step
        }
        double rho = ok && predicted > 0 ? (f - fs) / predicted : -1.0;
        if (ok && rho > 0) {
            x = std::move(xs);
            r = std::move(rs);
            f = fs;
            j = jacobian(obj, x);
            g = grad_of(j, r);
            double factor = 1.0 - std::pow(2.0 * rho - 1.0, 3.0);
            mu *= std::max(1.0 / 3.0, factor);
            nu = 2.0;
        } else {
            mu *= nu;
            nu *= 2.0;
            if (mu > 1e32) break;
        }
    }
    res.params = x;
    res.objective = f;
    res.grad_norm = std::sqrt(sumsq(g));
    res.iters = it;
    res.converged = res.grad_norm <= opts.cert;
    return res;
}

struct CriticalPoint {
    std::vector<double> params;
    double objective = 0.0;
    double grad_norm = 0.0;
    int hits = 0;
};

struct MultistartReport {
    std::vector<CriticalPoint> points;
    int starts = 0;
    int converged = 0;
    std::uint64_t seed = 0;
};

// Projective distance between two parameter vectors of the same model: the
// worst sine distance over the homogeneous factors.
inline double param_proj_distance(const Objective& obj, const std::vector<double>& a,
                                  const std::vector<double>& b)
{
    if (obj.kind == ModelKind::TwistedCubic) {
        auto ea = detail::embed_params(obj, a), eb = detail::embed_params(obj, b);
        return sine_distance(ea.v, eb.v);
    }
    auto ea = detail::embed_params(obj, a), eb = detail::embed_params(obj, b);
    std::vector<double> ha(ea.v.begin(), ea.v.begin() + 4), hb(eb.v.begin(), eb.v.begin() + 4);
    std::vector<double> aa(ea.v.begin() + 4, ea.v.end()), ab(eb.v.begin() + 4, eb.v.end());
    return std::max(sine_distance(ha, hb), sine_distance(aa, ab));
}

namespace detail {

inline void run_starts_serial(const Objective& obj, int n_starts, std::uint64_t seed,
                              const OptOptions& opts, std::vector<OptResult>& results)
{
    Rng root(seed);
    for (int s = 0; s < n_starts; ++s) {
        Rng r = root.child(static_cast<std::uint64_t>(s));
        std::vector<double> init(obj.n_params());
        for (double& v : init) v = r.normal();
        try {
            results[s] = optimize(obj, init, opts);
        } catch (const Error&) {
            results[s] = OptResult{};  // chart-degenerate start: tallied, not clustered
        }
    }
}

inline void run_starts_parallel(const Objective& obj, int n_starts, std::uint64_t seed,
                                const OptOptions& opts, std::vector<OptResult>& results)
{
    Rng root(seed);
#pragma omp parallel for schedule(dynamic, 8)
    for (int s = 0; s < n_starts; ++s) {
        Rng r = root.child(static_cast<std::uint64_t>(s));
        std::vector<double> init(obj.n_params());
        for (double& v : init) v = r.normal();
        try {
            results[s] = optimize(obj, init, opts);
        } catch (const Error&) {
            results[s] = OptResult{};
        }
    }
}

}  // namespace detail

// Seeded multistart probe. Deterministic given (objective, n_starts, seed):
// per-start generators are derived from (seed, index), converged points are
// clustered by projective distance and the clustered output is sorted by
// objective value then lexicographic parameters, so the result is identical
// whether the starts run serially or over OpenMP.
inline MultistartReport multistart(const Objective& obj, int n_starts, std::uint64_t seed,
                                   const OptOptions& opts = {}, bool parallel = true,
                                   double cluster_tol = 1e-6)
{
    if (n_starts < 1) throw Error(errc::invalid_input, "need at least one start");
    std::vector<OptResult> results(n_starts);
    if (parallel)
        detail::run_starts_parallel(obj, n_starts, seed, opts, results);
    else
        detail::run_starts_serial(obj, n_starts, seed, opts, results);

    MultistartReport rep;
    rep.starts = n_starts;
    rep.seed = seed;
    for (const OptResult& r : results) {
        if (r.params.empty() || !r.converged) continue;
        ++rep.converged;
        bool merged = false;
        for (CriticalPoint& c : rep.points) {
            if (param_proj_distance(obj, c.params, r.params) <= cluster_tol) {
                ++c.hits;
                if (r.objective < c.objective) {
                    c.params = r.params;
                    c.objective = r.objective;
                    c.grad_norm = r.grad_norm;
                }
                merged = true;
                break;
            }
        }
        if (!merged) rep.points.push_back({r.params, r.objective, r.grad_norm, 1});
    }
    std::sort(rep.points.begin(), rep.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.objective != b.objective) return a.objective < b.objective;
        return a.params < b.params;
    });
    return rep;
}

}  // namespace cmv
