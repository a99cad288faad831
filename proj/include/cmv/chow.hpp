#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmv/multilinear.hpp"
#include "cmv/polyroots.hpp"

namespace cmv {

// Chow form of a space curve of degree d: coefficient vector of length
// C(d+5,5) over the Pluecker coordinates L0..L5 in MonomialOrder.
template <class K>
struct ChowForm {
    int degree = 0;
    ProjVec<K> coeffs;

    // Value on a line; zero exactly iff the line meets the curve.
    K eval(const PlueckerLine<K>& l) const
    {
        ProjVec<K> nu = veronese(degree, l.coords);
        K s = FieldTraits<K>::zero();
        for (int i = 0; i < nu.size(); ++i) s += coeffs[i] * nu[i];
        return s;
    }
};

// A plane curve in P^3: the plane h together with the degree-d curve alpha
// in the plane's own coordinates.
template <class K>
struct PlaneCurveParam {
    ProjVec<K> h;      // length 4
    ProjVec<K> alpha;  // length C(d+2,2)
    int degree = 2;
};

// Twisted cubic through the structured matrix M(m), m in P^12.
template <class K>
struct TwistedCubicParam {
    ProjVec<K> m;  // length 13
};

template <class K>
struct HMatrices {
    Mat<K> H;     // 4x3
    Mat<K> H1;    // 4x4, invertible iff h0 != 0
    Mat<K> Hhat;  // 3x6, first three rows of (wedge2 H1)^{-1} cleared of h0^-3
};

template <class K>
HMatrices<K> h_matrices(const ProjVec<K>& h)
{
    if (h.size() != 4 || h.is_zero())
        throw Error(errc::invalid_input, "h must be a nonzero element of (P^3)*");
    const K z = FieldTraits<K>::zero();
    HMatrices<K> r{Mat<K>(4, 3), Mat<K>(4, 4), Mat<K>(3, 6)};
    r.H = Mat<K>(4, 3, {-h[1], -h[2], -h[3], h[0], z, z, z, h[0], z, z, z, h[0]});
    r.H1 = Mat<K>(4, 4, {h[0], -h[1], -h[2], -h[3], z, h[0], z, z, z, z, h[0], z, z, z, z, h[0]});
    r.Hhat = Mat<K>(3, 6,
                    {h[0], z, z, -h[2], -h[3], z,
                     z, h[0], z, h[1], z, -h[3],
                     z, z, h[0], z, h[1], h[2]});
    return r;
}

// Coordinate chart for planes with h0 = 0: a transposition of P^3 moving the
// first nonzero coordinate of h into position 0. perm is an involution.
template <class K>
struct PlaneChart {
    Mat<K> perm;        // 4x4 permutation, perm == perm^{-1}
    ProjVec<K> h_tilde; // permuted plane, h_tilde[0] != 0
    bool permuted = false;
};

template <class K>
PlaneChart<K> plane_chart(const ProjVec<K>& h)
{
    if (h.size() != 4 || h.is_zero())
        throw Error(errc::invalid_input, "h must be a nonzero element of (P^3)*");
    int k = 0;
    if constexpr (FieldTraits<K>::is_exact) {
        while (FieldTraits<K>::is_zero(h[k])) ++k;
    } else {
        double best = 0.0;
        for (int i = 0; i < 4; ++i)
            if (FieldTraits<K>::magnitude(h[i]) > best) { best = FieldTraits<K>::magnitude(h[i]); k = i; }
    }
    PlaneChart<K> c{Mat<K>::identity(4), h, k != 0};
    if (k != 0) {
        std::swap(c.perm(0, 0), c.perm(k, 0));
        std::swap(c.perm(k, k), c.perm(0, k));
        c.h_tilde = ProjVec<K>(c.perm.transpose() * h);
    }
    return c;
}

// Parametrization of the plane of h: columns span {X : h^T X = 0}. For
// h0 = 0 the chart permutation is composed in, so this is total on h != 0.
template <class K>
Mat<K> plane_embedding(const ProjVec<K>& h)
{
    PlaneChart<K> c = plane_chart(h);
    Mat<K> H = h_matrices(c.h_tilde).H;
    return c.permuted ? c.perm * H : H;
}

// iota_d(h, alpha) = nu_d^{2,5}(Hhat(h))^T alpha, extended to h0 = 0 by the
// chart permutation pulled back through nu_d^{5,5}(wedge2(perm)).
template <class K>
ChowForm<K> iota_plane(const PlaneCurveParam<K>& pc)
{
    if (pc.alpha.is_zero()) throw Error(errc::invalid_input, "alpha must be nonzero");
    PlaneChart<K> c = plane_chart(pc.h);
    Mat<K> nu = veronese_matrix(pc.degree, h_matrices(c.h_tilde).Hhat);
    ChowForm<K> out;
    out.degree = pc.degree;
    out.coeffs = ProjVec<K>(nu.transpose() * pc.alpha);
    if (c.permuted) {
        Mat<K> lift = veronese_matrix(pc.degree, wedge2(c.perm));
        out.coeffs = ProjVec<K>(lift.transpose() * out.coeffs);
    }
    return out;
}

// Chow form of the standard twisted cubic (s^3 : s^2 t : s t^2 : t^3):
//   -L3^3 - L3^2 L2 + 2 L4 L3 L1 - L5 L1^2 - L4^2 L0 + L5 L3 L0 + L5 L2 L0,
// seven nonzero coefficients placed by MonomialOrder.
template <class K>
ChowForm<K> omega_tw()
{
    const MonomialOrder& ord = MonomialOrder::get(3, 6);
    ChowForm<K> w;
    w.degree = 3;
    w.coeffs.v.assign(ord.size(), FieldTraits<K>::zero());
    auto set = [&](std::vector<int> e, long c) {
        w.coeffs[ord.index_of(e)] = FieldTraits<K>::from_int(c);
    };
    set({0, 0, 0, 3, 0, 0}, -1);
    set({0, 0, 1, 2, 0, 0}, -1);
    set({0, 1, 0, 1, 1, 0}, 2);
    set({0, 2, 0, 0, 0, 1}, -1);
    set({1, 0, 0, 0, 2, 0}, -1);
    set({1, 0, 0, 1, 0, 1}, 1);
    set({1, 0, 1, 0, 0, 1}, 1);
    return w;
}

// The cubic-Veronese conjugation rho(A) with phi(A(s:t)) = rho(A) phi(s:t);
// det rho(A) = det(A)^6. Coincides with nu_3^{1,1}(A).
template <class K>
Mat<K> rho(const Mat<K>& a)
{
    if (a.rows() != 2 || a.cols() != 2) throw Error(errc::invalid_input, "rho expects 2x2");
    const K &p = a(0, 0), &q = a(0, 1), &r = a(1, 0), &s = a(1, 1);
    const K two = FieldTraits<K>::from_int(2), three = FieldTraits<K>::from_int(3);
    return Mat<K>(4, 4,
                  {p * p * p, three * p * p * q, three * p * q * q, q * q * q,
                   p * p * r, two * p * q * r + p * p * s, two * p * q * s + q * q * r, q * q * s,
                   p * r * r, two * r * s * p + r * r * q, two * r * s * q + s * s * p, s * s * q,
                   r * r * r, three * r * r * s, three * r * s * s, s * s * s});
}

template <class K>
Mat<K> twisted_matrix(const TwistedCubicParam<K>& t)
{
    if (t.m.size() != 13) throw Error(errc::invalid_input, "twisted parameter must have length 13");
    const auto& m = t.m;
    const K z = FieldTraits<K>::zero();
    return Mat<K>(4, 4,
                  {z, m[0], m[1], m[2],
                   -m[0], z, m[3], m[4],
                   m[5], m[6], m[7], m[8],
                   m[9], m[10], m[11], m[12]});
}

template <class K>
ProjVec<K> standard_cubic_point(const K& s, const K& t)
{
    return ProjVec<K>{s * s * s, s * s * t, s * t * t, t * t * t};
}

namespace detail {

// (nu_3^{5,5}(B)^T w)_j for sparse w: accumulate the expansions of the
// monomials in supp(w) applied to the linear forms B_i . L.
template <class K>
ProjVec<K> veronese3_pullback_sparse(const Mat<K>& b, const ChowForm<K>& w)
{
    const MonomialOrder& ord = MonomialOrder::get(3, 6);
    ProjVec<K> out;
    out.v.assign(ord.size(), FieldTraits<K>::zero());
    for (int i = 0; i < ord.size(); ++i) {
        if (FieldTraits<K>::is_zero(w.coeffs[i])) continue;
        // expand prod_k (B_k . L)^{e_k}
        std::map<std::vector<int>, K> poly;
        poly[std::vector<int>(6, 0)] = w.coeffs[i];
        for (int k = 0; k < 6; ++k) {
            for (int rep = 0; rep < ord.exps[i][k]; ++rep) {
                std::map<std::vector<int>, K> next;
                for (const auto& [mono, coef] : poly)
                    for (int j = 0; j < 6; ++j) {
                        if (FieldTraits<K>::is_zero(b(k, j))) continue;
                        std::vector<int> m2 = mono;
                        ++m2[j];
                        auto [it, fresh] = next.try_emplace(std::move(m2), FieldTraits<K>::zero());
                        it->second += coef * b(k, j);
                    }
                poly = std::move(next);
            }
        }
        for (const auto& [mono, coef] : poly) out[ord.index_of(mono)] += coef;
    }
    return out;
}

}  // namespace detail

// iota_tw(m) = nu_3^{5,5}(Sigma wedge2(M(m)^T) Sigma)^T omega_tw; degree 6
// in m, vanishes exactly on every line meeting the curve M(m) phi(P^1).
template <class K>
ChowForm<K> iota_tw(const TwistedCubicParam<K>& t)
{
    Mat<K> mm = twisted_matrix(t);
    if constexpr (FieldTraits<K>::is_exact) {
        if (FieldTraits<K>::is_zero(det(mm)))
            throw Error(errc::degenerate_parameter, "M(m) is rank deficient");
    }
    Mat<K> s = sigma_matrix<K>();
    Mat<K> b = s * wedge2(mm.transpose()) * s;
    ChowForm<K> out;
    out.degree = 3;
    out.coeffs = detail::veronese3_pullback_sparse(b, omega_tw<K>());
    if (out.coeffs.is_zero())
        throw Error(errc::degenerate_parameter, "M(m) is rank deficient");
    return out;
}

// Re-encode a matrix of M(m) pattern (zero (1,1),(2,2); (1,2)+(2,1)=0) as a
// twisted parameter.
template <class K>
TwistedCubicParam<K> twisted_param_from_matrix(const Mat<K>& mm)
{
    TwistedCubicParam<K> t;
    t.m.v = {mm(0, 1), mm(0, 2), mm(0, 3), mm(1, 2), mm(1, 3),
             mm(2, 0), mm(2, 1), mm(2, 2), mm(2, 3),
             mm(3, 0), mm(3, 1), mm(3, 2), mm(3, 3)};
    return t;
}

// ---------------------------------------------------------------------------
// Fiber of iota_tw: reparametrizations A with M(m) rho(A) again of M(m')
// pattern. The three pattern constraints, expanded directly (the displayed
// system in the source material has sign/variable slips; the zero-pattern
// postcondition is the ground truth here), with a = 1:
//   c (m0 + m1 c + m2 c^2) = 0
//   b (c^2 m3 - 3 m0) + d (2 c m3 + 3 c^2 m4) = 0
//   b (2 c m0 + c^2 m1) + d (m0 + 2 c m1 + 3 c^2 m2) = m0 - c^2 m3 - c^3 m4
// The a = 0 branch forces c = 0 for generic m and is never invertible.

template <class K>
struct TwFiberResult {
    std::vector<Mat<K>> solutions;   // 2x2 reparametrizations, a normalized to 1
    bool generic = true;
    std::string diagnostic;
};

namespace detail {

template <class K>
std::optional<Mat<K>> fiber_bd_solve(const ProjVec<K>& m, const K& c)
{
    const K one = FieldTraits<K>::one();
    const K two = FieldTraits<K>::from_int(2), three = FieldTraits<K>::from_int(3);
    K a11 = c * c * m[3] - three * m[0];
    K a12 = two * c * m[3] + three * c * c * m[4];
    K a21 = two * c * m[0] + c * c * m[1];
    K a22 = m[0] + two * c * m[1] + three * c * c * m[2];
    K rhs = m[0] - c * c * m[3] - c * c * c * m[4];
    K dd = a11 * a22 - a12 * a21;
    if (FieldTraits<K>::is_zero(dd)) return std::nullopt;
    // Cramer on [a11 a12; a21 a22] (b,d)^T = (0, rhs)^T
    K b = (-a12 * rhs) / dd;
    K d = (a11 * rhs) / dd;
    Mat<K> a(2, 2, {one, b, c, d});
    if (FieldTraits<K>::is_zero(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0))) return std::nullopt;
    return a;
}

}  // namespace detail

// Float fiber solver: generically exactly three full-rank solutions, one of
// them the identity.
inline TwFiberResult<double> tw_fiber(const TwistedCubicParam<double>& t)
{
    TwFiberResult<double> res;
    const auto& m = t.m;
    if (m.size() != 13) throw Error(errc::invalid_input, "twisted parameter must have length 13");
    double scale = 0.0;
    for (int i = 0; i < 13; ++i) scale = std::max(scale, std::fabs(m[i]));
    if (scale == 0.0) throw Error(errc::degenerate_parameter, "zero parameter");
    if (std::fabs(m[2]) <= 1e-12 * scale) {
        res.generic = false;
        res.diagnostic = "fiber cubic degenerates: m2 = 0 loses a root";
        return res;
    }
    std::vector<double> croots = {0.0};
    double disc = m[1] * m[1] - 4.0 * m[2] * m[0];
    if (std::fabs(disc) <= 1e-12 * (m[1] * m[1] + 4.0 * std::fabs(m[2] * m[0]))) {
        res.generic = false;
        res.diagnostic = "fiber quadratic has a (near) double root";
        return res;
    }
    if (disc > 0) {
        double sq = std::sqrt(disc);
        croots.push_back((-m[1] + sq) / (2.0 * m[2]));
        croots.push_back((-m[1] - sq) / (2.0 * m[2]));
    } else {
        // complex pair: only the trivial real solution survives
        res.generic = false;
        res.diagnostic = "fiber quadratic has complex roots; one real solution";
    }
    for (double c : croots) {
        auto a = detail::fiber_bd_solve(t.m, c);
        if (!a) {
            res.generic = false;
            res.diagnostic = "fiber linear system singular at a root";
            continue;
        }
        res.solutions.push_back(*a);
    }
    return res;
}

struct TwFiberExact {
    std::vector<Mat<Rat>> solutions;
    bool splits = true;   // quadratic factor splits over Q
    bool generic = true;
    std::string diagnostic;
};

// Exact fiber: solved over Q only when the quadratic factor splits
// (fibers are generically irrational even for rational m).
inline TwFiberExact tw_fiber(const TwistedCubicParam<Rat>& t)
{
    TwFiberExact res;
    const auto& m = t.m;
    if (m.size() != 13) throw Error(errc::invalid_input, "twisted parameter must have length 13");
    if (m[2].is_zero()) {
        res.generic = false;
        res.diagnostic = "fiber cubic degenerates: m2 = 0 loses a root";
        return res;
    }
    Rat disc = m[1] * m[1] - Rat(4) * m[2] * m[0];
    if (disc.is_zero()) {
        res.generic = false;
        res.diagnostic = "fiber quadratic has a double root";
        return res;
    }
    std::vector<Rat> croots = {Rat(0)};
    if (disc.sign() > 0) {
        // rational square root test on num/den
        mpz_class num = disc.raw().get_num(), den = disc.raw().get_den();
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        if (rn * rn == num && rd * rd == den) {
            Rat sq{mpq_class(rn, rd)};
            croots.push_back((-m[1] + sq) / (Rat(2) * m[2]));
            croots.push_back((-m[1] - sq) / (Rat(2) * m[2]));
        } else {
            res.splits = false;
        }
    } else {
        res.splits = false;
    }
    for (const Rat& c : croots) {
        auto a = detail::fiber_bd_solve(t.m, c);
        if (!a) {
            res.generic = false;
            res.diagnostic = "fiber linear system singular at a root";
            continue;
        }
        res.solutions.push_back(*a);
    }
    return res;
}

}  // namespace cmv
