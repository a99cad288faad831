#pragma once

#include <variant>
#include <vector>

#include "cmv/binform.hpp"
#include "cmv/camera.hpp"

namespace cmv {

// Degree-d curve in a camera plane: coefficient vector of length C(d+2,2)
// in MonomialOrder.
template <class K>
struct ImageCurve {
    int degree = 0;
    ProjVec<K> coeffs;

    K eval(const ProjVec<K>& x) const
    {
        ProjVec<K> nu = veronese(degree, x);
        K s = FieldTraits<K>::zero();
        for (int i = 0; i < nu.size(); ++i) s += coeffs[i] * nu[i];
        return s;
    }
};

// Degree-d hypersurface of P^3 (length C(d+3,3)); for d = 2 also exposed as
// the symmetric 4x4 matrix of the quadric.
template <class K>
struct Cone {
    int degree = 0;
    ProjVec<K> coeffs;

    K eval(const ProjVec<K>& x) const
    {
        ProjVec<K> nu = veronese(degree, x);
        K s = FieldTraits<K>::zero();
        for (int i = 0; i < nu.size(); ++i) s += coeffs[i] * nu[i];
        return s;
    }

    Mat<K> quadric_matrix() const
    {
        if (degree != 2) throw Error(errc::invalid_degree, "quadric matrix needs degree 2");
        const MonomialOrder& ord = MonomialOrder::get(2, 4);
        Mat<K> q(4, 4);
        const K two = FieldTraits<K>::from_int(2);
        for (int k = 0; k < ord.size(); ++k) {
            int i = -1, j = -1;
            for (int v = 0; v < 4; ++v)
                for (int rep = 0; rep < ord.exps[k][v]; ++rep) (i < 0 ? i : j) = v;
            if (i == j)
                q(i, i) += coeffs[k];
            else {
                q(i, j) += coeffs[k] / two;
                q(j, i) += coeffs[k] / two;
            }
        }
        return q;
    }
};

template <class K>
Cone<K> cone_from_quadric(const Mat<K>& q)
{
    const MonomialOrder& ord = MonomialOrder::get(2, 4);
    Cone<K> c;
    c.degree = 2;
    c.coeffs.v.assign(ord.size(), FieldTraits<K>::zero());
    for (int k = 0; k < ord.size(); ++k) {
        int i = -1, j = -1;
        for (int v = 0; v < 4; ++v)
            for (int rep = 0; rep < ord.exps[k][v]; ++rep) (i < 0 ? i : j) = v;
        c.coeffs[k] = (i == j) ? q(i, i) : q(i, j) + q(j, i);
    }
    return c;
}

template <class K>
struct Arrangement {
    std::vector<Camera<K>> cameras;
};

template <class K>
using SpaceCurve = std::variant<PlaneCurveParam<K>, TwistedCubicParam<K>, ChowForm<K>>;

enum class ProjectRoute { Direct, Chow };

// Image of a Chow form: nu_d^{5,2}(Chat)^T beta. The formula itself
// degenerates to the zero vector exactly when the center lies on the curve.
template <class K>
ImageCurve<K> project_chow(const Camera<K>& cam, const ChowForm<K>& beta)
{
    Mat<K> nu = veronese_matrix(beta.degree, cam.chat);
    ImageCurve<K> g;
    g.degree = beta.degree;
    g.coeffs = ProjVec<K>(nu.transpose() * beta.coeffs);
    if (g.coeffs.is_zero())
        throw Error(errc::center_on_curve, "camera center lies on the curve");
    return g;
}

// Image of a plane curve. Direct route: gamma = nu_d^{2,2}(C P H(h~))^{-T}
// alpha through the adjugate, so exact fields stay exact; Chow route goes
// through iota_d and project_chow. Both agree projectively.
template <class K>
ImageCurve<K> project_plane_curve(const Camera<K>& cam, const PlaneCurveParam<K>& pc,
                                  ProjectRoute route = ProjectRoute::Direct)
{
    if (route == ProjectRoute::Chow) return project_chow(cam, iota_plane(pc));
    Mat<K> ch = cam.matrix * plane_embedding(pc.h);
    Mat<K> nu = veronese_matrix(pc.degree, ch);
    K d = det(nu);
    if (FieldTraits<K>::is_zero(d))
        throw Error(errc::plane_through_center, "plane passes through the camera center");
    ImageCurve<K> g;
    g.degree = pc.degree;
    g.coeffs = ProjVec<K>(adjugate(nu).transpose() * pc.alpha);
    return g;
}

// Image of a twisted cubic via its Chow form; singular plane cubic for every
// valid input.
template <class K>
ImageCurve<K> project_twisted(const Camera<K>& cam, const TwistedCubicParam<K>& t)
{
    return project_chow(cam, iota_tw(t));
}

template <class K>
std::vector<ImageCurve<K>> joint_project(const Arrangement<K>& arr, const SpaceCurve<K>& curve)
{
    std::vector<ImageCurve<K>> out;
    out.reserve(arr.cameras.size());
    for (size_t i = 0; i < arr.cameras.size(); ++i) {
        try {
            const Camera<K>& cam = arr.cameras[i];
            out.push_back(std::visit(
                [&](const auto& c) -> ImageCurve<K> {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, PlaneCurveParam<K>>)
                        return project_plane_curve(cam, c);
                    else if constexpr (std::is_same_v<T, TwistedCubicParam<K>>)
                        return project_twisted(cam, c);
                    else
                        return project_chow(cam, c);
                },
                curve));
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()), "camera " + std::to_string(i));
        }
    }
    return out;
}

// Back-projected cone B_C(gamma): zeta = nu_d^{2,3}(C)^T gamma. Contains the
// center and every X with gamma(CX) = 0.
template <class K>
Cone<K> back_project_cone(const Camera<K>& cam, const ImageCurve<K>& g)
{
    Mat<K> nu = veronese_matrix(g.degree, cam.matrix);
    Cone<K> c;
    c.degree = g.degree;
    c.coeffs = ProjVec<K>(nu.transpose() * g.coeffs);
    return c;
}

// Inverse of the cone bijection: gamma = nu_d^{2,3}(C^dagger)^T zeta.
template <class K>
ImageCurve<K> image_curve_of_cone(const Camera<K>& cam, const Cone<K>& cone)
{
    Mat<K> nu = veronese_matrix(cone.degree, cam.pinv.transpose());
    ImageCurve<K> g;
    g.degree = cone.degree;
    g.coeffs = ProjVec<K>(nu.transpose() * cone.coeffs);
    if (g.coeffs.is_zero()) throw Error(errc::invalid_input, "cone does not pull back");
    return g;
}

// Join c v beta = nu_d^{5,3}(E(c))^T beta: the cone over the curve with
// vertex c, independent of any camera with that center.
template <class K>
Cone<K> cone_join(const ProjVec<K>& c, const ChowForm<K>& beta)
{
    Mat<K> nu = veronese_matrix(beta.degree, e_matrix(c));
    Cone<K> cone;
    cone.degree = beta.degree;
    cone.coeffs = ProjVec<K>(nu.transpose() * beta.coeffs);
    if (cone.coeffs.is_zero())
        throw Error(errc::vertex_on_curve, "vertex lies on the curve");
    return cone;
}

// Fixed-plane linear projectors P_i = nu_d^{2,2}(C_i H(h))^{-T} (adjugate
// route); the image curve of (h, alpha) in view i is P_i alpha.
template <class K>
std::vector<Mat<K>> fixed_plane_projectors(const Arrangement<K>& arr, const ProjVec<K>& h, int d)
{
    std::vector<Mat<K>> out;
    Mat<K> e = plane_embedding(h);
    for (size_t i = 0; i < arr.cameras.size(); ++i) {
        Mat<K> nu = veronese_matrix(d, arr.cameras[i].matrix * e);
        if (FieldTraits<K>::is_zero(det(nu)))
            throw Error(errc::plane_through_center,
                        "plane passes through the camera center", "camera " + std::to_string(i));
        out.push_back(adjugate(nu).transpose());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Singularity type of the image of a twisted cubic.

enum class CubicSingularity { Nodal, Cuspidal };

// Tangency quartics: the four 3x3 minors of [d/ds P | d/dt P | c] for
// P(s,t) = M phi(s,t); a common root means c lies on a tangent line of the
// curve, which is exactly the cuspidal case.
template <class K>
std::vector<BinForm<K>> tangency_quartics(const Mat<K>& m, const ProjVec<K>& c)
{
    // dP/ds = M (3s^2, 2st, t^2, 0), dP/dt = M (0, s^2, 2st, 3t^2)
    const K z = FieldTraits<K>::zero();
    const K two = FieldTraits<K>::from_int(2), three = FieldTraits<K>::from_int(3);
    // ds[i][k]: coefficient of s^{2-k} t^k in (dP/ds)_i
    std::vector<std::vector<K>> ds(4, std::vector<K>(3, z)), dt(4, std::vector<K>(3, z));
    for (int i = 0; i < 4; ++i) {
        ds[i][0] = three * m(i, 0);
        ds[i][1] = two * m(i, 1);
        ds[i][2] = m(i, 2);
        dt[i][0] = m(i, 1);
        dt[i][1] = two * m(i, 2);
        dt[i][2] = three * m(i, 3);
    }
    std::vector<BinForm<K>> out;
    for (int skip = 0; skip < 4; ++skip) {
        std::array<int, 3> r{};
        for (int i = 0, w = 0; i < 4; ++i)
            if (i != skip) r[w++] = i;
        // det [ds_r | dt_r | c_r]: expand along the constant column
        BinForm<K> q(5, z);
        for (int drop = 0; drop < 3; ++drop) {
            std::array<int, 2> keep{};
            for (int i = 0, w = 0; i < 3; ++i)
                if (i != drop) keep[w++] = i;
            K sign = (drop % 2 == 0) ? FieldTraits<K>::one() : -FieldTraits<K>::one();
            // 2x2 minor of [ds | dt] on rows keep: polynomial of degree 4
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    K term = ds[r[keep[0]]][a] * dt[r[keep[1]]][b] -
                             ds[r[keep[1]]][a] * dt[r[keep[0]]][b];
                    q[a + b] += sign * c[r[drop]] * term;
                }
        }
        out.push_back(std::move(q));
    }
    return out;
}

inline bool point_on_twisted_cubic(const Mat<Rat>& m, const ProjVec<Rat>& c)
{
    auto inv = try_inverse(m);
    if (!inv) throw Error(errc::degenerate_parameter, "M(m) is rank deficient");
    std::vector<Rat> y = *inv * c.v;
    // y on standard cubic iff rank [[y0,y1,y2],[y1,y2,y3]] <= 1
    Mat<Rat> s(2, 3, {y[0], y[1], y[2], y[1], y[2], y[3]});
    return rank(s) <= 1;
}

// Cuspidal iff the tangency quartics share a root. Exact gcd when the data
// is rational; for floats use the companion-matrix fallback below.
inline CubicSingularity cubic_image_singularity(const Camera<Rat>& cam,
                                                const TwistedCubicParam<Rat>& t)
{
    Mat<Rat> m = twisted_matrix(t);
    if (point_on_twisted_cubic(m, cam.center))
        throw Error(errc::center_on_curve, "camera center lies on the twisted cubic");
    auto quartics = tangency_quartics(m, cam.center);
    int deg = binform_gcd(quartics).degree();
    return deg >= 1 ? CubicSingularity::Cuspidal : CubicSingularity::Nodal;
}

inline CubicSingularity cubic_image_singularity(const Camera<double>& cam,
                                                const TwistedCubicParam<double>& t,
                                                double tol = 1e-7)
{
    Mat<double> m = twisted_matrix(t);
    auto quartics = tangency_quartics(m, cam.center);
    // roots of the first nonzero quartic (in s with t = 1, plus t = 0 check)
    int lead = -1;
    double scale = 0.0;
    for (auto& q : quartics)
        for (double c : q) scale = std::max(scale, std::fabs(c));
    if (scale == 0.0) throw Error(errc::center_on_curve, "tangency system vanished");
    for (size_t i = 0; i < quartics.size(); ++i)
        if (!binform_is_zero(quartics[i])) { lead = static_cast<int>(i); break; }
    const auto& q0 = quartics[lead];
    std::vector<double> asc(q0.rbegin(), q0.rend());  // ascending in s
    auto eval_at = [&](const BinForm<double>& q, double s, double tt) {
        double v = 0;
        int deg = static_cast<int>(q.size()) - 1;
        for (int k = 0; k <= deg; ++k) v += q[k] * std::pow(s, deg - k) * std::pow(tt, k);
        return v;
    };
    std::vector<std::pair<double, double>> cands;
    for (double r : real_poly_roots(asc)) cands.push_back({r, 1.0});
    if (std::fabs(q0[0]) <= 1e-12 * scale) cands.push_back({1.0, 0.0});
    for (auto [s, tt] : cands) {
        double norm = std::max(1.0, s * s);
        bool common = true;
        for (const auto& q : quartics)
            if (std::fabs(eval_at(q, s, tt)) > tol * scale * norm * norm) { common = false; break; }
        if (common) return CubicSingularity::Cuspidal;
    }
    return CubicSingularity::Nodal;
}

}  // namespace cmv
