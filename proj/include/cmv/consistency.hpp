#pragma once

#include <Eigen/Eigenvalues>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmv/binform.hpp"
#include "cmv/projection.hpp"

namespace cmv {

// ---------------------------------------------------------------------------
// Two-view ideal of the conic multiview variety (canonical pair).

template <class K>
struct TwoViewMatrix {
    Mat<K> entries;  // 2x3; row 1 depends only on gamma, row 2 only on delta
};

template <class K>
TwoViewMatrix<K> two_view_matrix(const ImageCurve<K>& g, const ImageCurve<K>& dl)
{
    if (g.degree != 2 || dl.degree != 2)
        throw Error(errc::invalid_degree, "two-view matrix is defined for conics");
    const auto& a = g.coeffs;
    const auto& b = dl.coeffs;
    const K two = FieldTraits<K>::from_int(2), four = FieldTraits<K>::from_int(4);
    return {Mat<K>(2, 3,
                   {a[4] * a[4] - four * a[3] * a[5], a[2] * a[4] - two * a[1] * a[5],
                    a[2] * a[2] - four * a[0] * a[5],
                    b[2] * b[2] - four * b[0] * b[5], b[1] * b[2] - two * b[0] * b[4],
                    b[1] * b[1] - four * b[0] * b[3]})};
}

template <class K>
std::array<K, 3> two_view_minors(const TwoViewMatrix<K>& t)
{
    const Mat<K>& m = t.entries;
    return {m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0), m(0, 0) * m(1, 2) - m(0, 2) * m(1, 0),
            m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)};
}

template <class K>
struct TwoViewVerdict {
    bool ok = false;
    int case_index = 0;
    // Rows of the two-view matrix vanish identically exactly when the view's
    // conic is a double line or two lines through the epipole.
    bool view1_degenerate = false;
    bool view2_degenerate = false;
};

namespace detail {

template <class K>
bool near_zero(const K& x, double scale, double tol)
{
    if constexpr (FieldTraits<K>::is_exact) {
        (void)scale;
        (void)tol;
        return FieldTraits<K>::is_zero(x);
    } else {
        return FieldTraits<K>::magnitude(x) <= tol * std::max(1.0, scale);
    }
}

template <class K>
double row_scale(const Mat<K>& m, int row)
{
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s = std::max(s, FieldTraits<K>::magnitude(m(row, j)));
    return s;
}

}  // namespace detail

// Membership test for a general pair: compute the standard solution
// C1' = A1 [0 I], C2' = A2 [I 0] of the pair's fundamental matrix, apply the
// coordinate change gamma -> nu(A1)^T gamma, delta -> nu(A2)^T delta, and
// test the rank-1 condition of the canonical two-view ideal.
template <class K>
TwoViewVerdict<K> two_view_check(const Camera<K>& c1, const Camera<K>& c2,
                                 const ImageCurve<K>& g, const ImageCurve<K>& dl,
                                 double tol = 1e-8)
{
    if (g.degree != 2 || dl.degree != 2)
        throw Error(errc::invalid_degree, "two-view check is defined for conics");
    FundamentalMatrix<K> f = fundamental(c1, c2);
    auto [e12, e21] = epipoles(f);

    std::vector<int> cases;
    {
        int preferred = -1;
        if constexpr (FieldTraits<K>::is_exact) {
            for (int k = 0; k < 3; ++k)
                if (!FieldTraits<K>::is_zero(e21[k])) { preferred = k; break; }
        } else {
            double best = -1.0;
            for (int k = 0; k < 3; ++k)
                if (FieldTraits<K>::magnitude(e21[k]) > best) {
                    best = FieldTraits<K>::magnitude(e21[k]);
                    preferred = k;
                }
        }
        cases.push_back(preferred);
        for (int k = 0; k < 3; ++k)
            if (k != preferred && !FieldTraits<K>::is_zero(e21[k])) cases.push_back(k);
    }

    std::optional<StdSolution<K>> sol;
    for (int k : cases) {
        StdSolution<K> s = std_solution(f, k);
        if (!FieldTraits<K>::is_zero(det(s.a1)) && !FieldTraits<K>::is_zero(det(s.a2))) {
            sol = std::move(s);
            break;
        }
    }
    if (!sol) throw Error(errc::non_generic_epipole, "no standard-solution case has invertible blocks");

    ImageCurve<K> gc{2, ProjVec<K>(veronese_matrix(2, sol->a1).transpose() * g.coeffs)};
    ImageCurve<K> dc{2, ProjVec<K>(veronese_matrix(2, sol->a2).transpose() * dl.coeffs)};
    if constexpr (!FieldTraits<K>::is_exact) {
        gc.coeffs = gc.coeffs.normalized();
        dc.coeffs = dc.coeffs.normalized();
    }
    TwoViewMatrix<K> t = two_view_matrix(gc, dc);
    auto minors = two_view_minors(t);
    double scale = detail::row_scale(t.entries, 0) * detail::row_scale(t.entries, 1);

    TwoViewVerdict<K> v;
    v.case_index = sol->case_index;
    v.ok = true;
    for (const K& m : minors)
        if (!detail::near_zero(m, scale, tol)) v.ok = false;
    double s1 = detail::row_scale(t.entries, 0), s2 = detail::row_scale(t.entries, 1);
    v.view1_degenerate = true;
    v.view2_degenerate = true;
    for (int j = 0; j < 3; ++j) {
        if (!detail::near_zero(t.entries(0, j), s1 * 0 + 1.0, tol)) v.view1_degenerate = false;
        if (!detail::near_zero(t.entries(1, j), s2 * 0 + 1.0, tol)) v.view2_degenerate = false;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Reducibility of a conic.

template <class K>
Mat<K> conic_symmetric_matrix(const ProjVec<K>& g)
{
    const K two = FieldTraits<K>::from_int(2);
    return Mat<K>(3, 3,
                  {g[0], g[1] / two, g[2] / two,
                   g[1] / two, g[3], g[4] / two,
                   g[2] / two, g[4] / two, g[5]});
}

// (reducible?, det). Also cross-checks that the displayed quintic-free
// reducibility expression equals -4 det for exact inputs.
template <class K>
std::pair<bool, K> conic_reducible(const ImageCurve<K>& g)
{
    if (g.degree != 2) throw Error(errc::invalid_degree, "reducibility test is for conics");
    K d = det(conic_symmetric_matrix(g.coeffs));
    const auto& b = g.coeffs;
    const K four = FieldTraits<K>::from_int(4);
    K expr = b[2] * b[2] * b[3] - b[1] * b[2] * b[4] + b[0] * b[4] * b[4] + b[1] * b[1] * b[5] -
             four * b[0] * b[3] * b[5];
    if constexpr (FieldTraits<K>::is_exact) {
        if (!(expr == -four * d))
            throw Error(errc::invalid_input, "reducibility identity failed");
        return {d.is_zero(), d};
    } else {
        double scale = 0.0;
        for (int i = 0; i < 6; ++i) scale = std::max(scale, FieldTraits<K>::magnitude(b[i]));
        scale = scale * scale * scale;
        return {FieldTraits<K>::magnitude(d) <= 1e-10 * std::max(1.0, scale), d};
    }
}

// ---------------------------------------------------------------------------
// Simplicity of an arrangement (Theorem set-theo regime).

enum class ViolationKind { EqualCenters, ThreeCollinear, EightOnConic };

struct Violation {
    ViolationKind kind;
    std::vector<int> indices;
};

struct SimplicityReport {
    bool verdict = true;
    std::vector<Violation> violations;
};

template <class K>
SimplicityReport arrangement_simple(const std::vector<ProjVec<K>>& centers, bool parallel = true)
{
    int n = static_cast<int>(centers.size());
    if (n < 1) throw Error(errc::invalid_input, "arrangement needs at least one center");
    SimplicityReport rep;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (proj_eq(centers[i], centers[j]))
                rep.violations.push_back({ViolationKind::EqualCenters, {i, j}});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Mat<K> s(3, 4);
                for (int c = 0; c < 4; ++c) {
                    s(0, c) = centers[i][c];
                    s(1, c) = centers[j][c];
                    s(2, c) = centers[k][c];
                }
                if (rank_or_numrank(s) <= 2)
                    rep.violations.push_back({ViolationKind::ThreeCollinear, {i, j, k}});
            }
    if (n >= 8) {
        // enumerate 8-subsets; coplanar ones are checked for a common conic
        std::vector<std::vector<int>> subsets;
        std::vector<int> pick;
        std::function<void(int)> gen = [&](int from) {
            if (static_cast<int>(pick.size()) == 8) {
                subsets.push_back(pick);
                return;
            }
            for (int i = from; i < n; ++i) {
                pick.push_back(i);
                gen(i + 1);
                pick.pop_back();
            }
        };
        gen(0);
        std::vector<char> flagged(subsets.size(), 0);
        auto check_subset = [&](int si) {
            const auto& sub = subsets[si];
            Mat<K> stack(8, 4);
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 4; ++c) stack(r, c) = centers[sub[r]][c];
            if (rank_or_numrank(stack) > 3) return;
            // plane through the eight points, then plane coordinates via the
            // last three rows of the permuted H(h) chart
            auto ker = kernel_basis(stack);
            if (ker.empty()) return;
            ProjVec<K> h(ker[0]);
            PlaneChart<K> chart = plane_chart(h);
            Mat<K> pinvperm = chart.perm;  // involution
            Mat<K> vstack(8, 6);
            for (int r = 0; r < 8; ++r) {
                std::vector<K> cp = pinvperm * centers[sub[r]].v;
                ProjVec<K> x{cp[1], cp[2], cp[3]};
                ProjVec<K> nu = veronese(2, x);
                for (int c = 0; c < 6; ++c) vstack(r, c) = nu[c];
            }
            if (rank_or_numrank(vstack) <= 5) flagged[si] = 1;
        };
        int total = static_cast<int>(subsets.size());
        if (parallel) {
#pragma omp parallel for schedule(dynamic)
            for (int si = 0; si < total; ++si) check_subset(si);
        } else {
            for (int si = 0; si < total; ++si) check_subset(si);
        }
        for (int si = 0; si < total; ++si)
            if (flagged[si]) rep.violations.push_back({ViolationKind::EightOnConic, subsets[si]});
    }
    rep.verdict = rep.violations.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Blowup classification (which cones legitimately pair with a conic).

enum class BlowupCase { Case1, Case2, Case3, NotMember };

namespace detail {

// Recover h' from a rank<=2 quadric Q known to contain the plane h, with
// Q ~ (h h'^T + h' h^T)/2. Returns nullopt if h is not a factor.
template <class K>
std::optional<ProjVec<K>> cofactor_plane(const Mat<K>& q, const ProjVec<K>& h, double tol)
{
    // restriction of Q to the plane must vanish
    Mat<K> e = plane_embedding(h);
    Mat<K> restr = e.transpose() * q * e;
    double qs = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) qs = std::max(qs, FieldTraits<K>::magnitude(q(i, j)));
    double hs = 0.0;
    for (int i = 0; i < 4; ++i) hs = std::max(hs, FieldTraits<K>::magnitude(h[i]));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!near_zero(restr(i, j), qs * hs * hs, tol)) return std::nullopt;
    int k = 0;
    if constexpr (FieldTraits<K>::is_exact) {
        while (FieldTraits<K>::is_zero(h[k])) ++k;
    } else {
        double best = 0;
        for (int i = 0; i < 4; ++i)
            if (FieldTraits<K>::magnitude(h[i]) > best) { best = FieldTraits<K>::magnitude(h[i]); k = i; }
    }
    const K two = FieldTraits<K>::from_int(2);
    K hk = h[k];
    K hpk = q(k, k) / hk;
    ProjVec<K> hp;
    hp.v.resize(4);
    for (int i = 0; i < 4; ++i) hp[i] = (two * q(i, k) - hpk * h[i]) / hk;
    // verify Q ~ (h hp^T + hp h^T)/2
    Mat<K> model(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) model(i, j) = h[i] * hp[j] + hp[i] * h[j];
    Mat<K> scaled = q.scaled(two);
    if (!proj_eq_mat(scaled, model, tol)) return std::nullopt;
    if (hp.is_zero()) return std::nullopt;
    return hp;
}

}  // namespace detail

// Plane coordinates of a point lying in the plane of h.
template <class K>
ProjVec<K> plane_coordinates(const ProjVec<K>& h, const ProjVec<K>& p)
{
    PlaneChart<K> chart = plane_chart(h);
    std::vector<K> cp = chart.perm * p.v;
    return ProjVec<K>{cp[1], cp[2], cp[3]};
}

template <class K>
BlowupCase classify_blowup(const PlaneCurveParam<K>& pc, const ProjVec<K>& c, const Cone<K>& cone,
                           double tol = 1e-8, std::string* diagnostic = nullptr)
{
    auto note = [&](const char* msg) {
        if (diagnostic) *diagnostic = msg;
    };
    if (pc.degree != 2 || cone.degree != 2)
        throw Error(errc::invalid_degree, "blowup classification is for conics");
    if (pc.alpha.is_zero() || cone.coeffs.is_zero())
        throw Error(errc::invalid_input, "degenerate curve or cone");

    K hc = FieldTraits<K>::zero();
    for (int i = 0; i < 4; ++i) hc += pc.h[i] * c[i];
    double hs = 0, cs = 0;
    for (int i = 0; i < 4; ++i) {
        hs = std::max(hs, FieldTraits<K>::magnitude(pc.h[i]));
        cs = std::max(cs, FieldTraits<K>::magnitude(c[i]));
    }
    bool on_plane = detail::near_zero(hc, hs * cs, tol);
    ImageCurve<K> curve_in_plane{2, pc.alpha};
    ProjVec<K> xc;
    bool on_curve = false;
    if (on_plane) {
        xc = plane_coordinates(pc.h, c);
        double as = 0;
        for (int i = 0; i < 6; ++i) as = std::max(as, FieldTraits<K>::magnitude(pc.alpha[i]));
        double xs = 0;
        for (int i = 0; i < 3; ++i) xs = std::max(xs, FieldTraits<K>::magnitude(xc[i]));
        on_curve = detail::near_zero(curve_in_plane.eval(xc), as * xs * xs, tol);
    }

    if (!on_curve) {
        Cone<K> join = cone_join(c, iota_plane(pc));
        if (proj_eq(cone.coeffs, join.coeffs, tol)) return BlowupCase::Case1;
        note("cone is not the join of the center with the curve");
        return BlowupCase::NotMember;
    }

    Mat<K> sym = conic_symmetric_matrix(pc.alpha);
    int r = rank_or_numrank(sym, tol);
    Mat<K> q = cone.quadric_matrix();

    bool two_lines_through_c = false;
    if (r == 1) {
        two_lines_through_c = true;  // double line through c (c is on the curve)
    } else if (r == 2) {
        auto ker = kernel_basis(sym);
        if (!ker.empty() && proj_eq(ProjVec<K>(ker[0]), xc, tol)) two_lines_through_c = true;
    }

    if (two_lines_through_c) {
        // Case 3: any cone with vertex c containing the curve
        std::vector<K> qc = q * c.v;
        double qs = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) qs = std::max(qs, FieldTraits<K>::magnitude(q(i, j)));
        for (const K& x : qc)
            if (!detail::near_zero(x, qs * cs, tol)) {
                note("cone is not singular at the center");
                return BlowupCase::NotMember;
            }
        Mat<K> e = plane_embedding(pc.h);
        Mat<K> nu = veronese_matrix(2, e);
        ProjVec<K> restr(nu.transpose() * cone.coeffs);
        if (restr.is_zero() || proj_eq(restr, pc.alpha, tol)) return BlowupCase::Case3;
        note("cone does not contain the two lines");
        return BlowupCase::NotMember;
    }

    // Case 2: cone = plane(h) union a plane through the tangent at c
    if (rank_or_numrank(q, tol) > 2) {
        note("center lies on the curve but the cone is not a union of two planes");
        return BlowupCase::NotMember;
    }
    auto hp = detail::cofactor_plane(q, pc.h, tol);
    if (!hp) {
        note("the plane of the curve is not a component of the cone");
        return BlowupCase::NotMember;
    }
    // tangent line at c: polar line of x_c, embedded into P^3
    std::vector<K> polar = sym * xc.v;
    Mat<K> polarrow(1, 3);
    for (int i = 0; i < 3; ++i) polarrow(0, i) = polar[i];
    auto tangent_dirs = kernel_basis(polarrow);  // 2-dim
    Mat<K> e = plane_embedding(pc.h);
    double hps = 0;
    for (int i = 0; i < 4; ++i) hps = std::max(hps, FieldTraits<K>::magnitude((*hp)[i]));
    for (const auto& y : tangent_dirs) {
        std::vector<K> pt = e * y;
        K val = FieldTraits<K>::zero();
        double pts = 0;
        for (int i = 0; i < 4; ++i) {
            val += (*hp)[i] * pt[i];
            pts = std::max(pts, FieldTraits<K>::magnitude(pt[i]));
        }
        if (!detail::near_zero(val, hps * pts, tol)) {
            note("second plane does not contain the tangent line at the center");
            return BlowupCase::NotMember;
        }
    }
    return BlowupCase::Case2;
}

// ---------------------------------------------------------------------------
// Exact two-view conic reconstruction through the quadric pencil.

template <class K>
struct PlaneSplit {
    ProjVec<K> p1, p2;
    bool double_plane = false;
};

namespace detail {

// Factor a symmetric rank<=2 quadric into two planes over the same field.
// Exact mode returns nullopt when the planes are irrational (or complex);
// float mode returns nullopt only for definite (complex-plane) forms.
inline std::optional<PlaneSplit<Rat>> split_planes(const Mat<Rat>& w_in)
{
    Mat<Rat> w = w_in;
    int n = w.rows();
    if (w.is_zero()) return std::nullopt;
    // congruence fix when the diagonal vanishes entirely
    Mat<Rat> basis = Mat<Rat>::identity(n);  // columns express new coords in old
    int i = -1;
    for (int k = 0; k < n; ++k)
        if (!w(k, k).is_zero()) { i = k; break; }
    if (i < 0) {
        int a = -1, b = -1;
        for (int r = 0; r < n && a < 0; ++r)
            for (int c = r + 1; c < n && a < 0; ++c)
                if (!w(r, c).is_zero()) { a = r; b = c; }
        if (a < 0) return std::nullopt;
        Mat<Rat> s = Mat<Rat>::identity(n);
        s(b, a) = Rat(1);  // x(new_a) enters through e_a + e_b
        w = s.transpose() * w * s;
        basis = basis * s;
        i = a;
    }
    std::vector<Rat> l1 = w.row(i);
    Rat a_coef = Rat(1) / w(i, i);
    Mat<Rat> w2 = w;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) w2(r, c) -= w(r, i) * w(i, c) / w(i, i);
    PlaneSplit<Rat> out;
    if (w2.is_zero()) {
        out.double_plane = true;
        out.p1 = ProjVec<Rat>(l1);
        out.p2 = out.p1;
    } else {
        int j = -1;
        for (int k = 0; k < n; ++k)
            if (!w2(k, k).is_zero()) { j = k; break; }
        if (j < 0) return std::nullopt;  // rank-1 symmetric must have a diagonal entry
        Mat<Rat> w3 = w2;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) w3(r, c) -= w2(r, j) * w2(j, c) / w2(j, j);
        if (!w3.is_zero()) return std::nullopt;  // rank > 2
        std::vector<Rat> l2 = w2.row(j);
        Rat b_coef = Rat(1) / w2(j, j);
        // q = a L1^2 + b L2^2 = a (L1 - s L2)(L1 + s L2), s^2 = -b/a
        Rat ratio = -(b_coef / a_coef);
        auto s = rat_sqrt(ratio);
        if (!s) return std::nullopt;  // irrational or complex planes
        out.p1.v.resize(n);
        out.p2.v.resize(n);
        for (int k = 0; k < n; ++k) {
            out.p1[k] = l1[k] - *s * l2[k];
            out.p2[k] = l1[k] + *s * l2[k];
        }
        out.double_plane = proj_eq(out.p1, out.p2);
    }
    // undo the congruence: planes act on new coords y with x = basis * y
    Mat<Rat> bt = basis.transpose();
    auto pull = [&](ProjVec<Rat>& p) {
        // form p.y = p.(basis^{-1} x); basis is unit lower-triangular here,
        // so invert by solving
        Mat<Rat> binv = inverse(basis);
        p = ProjVec<Rat>(binv.transpose() * p.v);
    };
    (void)bt;
    pull(out.p1);
    pull(out.p2);
    return out;
}

inline std::optional<PlaneSplit<double>> split_planes(const Mat<double>& w, double rank_tol = 1e-6)
{
    Eigen::MatrixXd ew(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ew(i, j) = w(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ew);
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::fabs(es.eigenvalues()(a)) > std::fabs(es.eigenvalues()(b));
    });
    double l0 = es.eigenvalues()(idx[0]), l1 = es.eigenvalues()(idx[1]);
    if (std::fabs(l0) == 0.0) return std::nullopt;
    PlaneSplit<double> out;
    auto column = [&](int k) {
        ProjVec<double> v;
        v.v.resize(4);
        for (int i = 0; i < 4; ++i) v[i] = es.eigenvectors()(i, k);
        return v;
    };
    if (std::fabs(l1 / l0) <= rank_tol) {
        out.double_plane = true;
        out.p1 = column(idx[0]);
        out.p2 = out.p1;
        return out;
    }
    if (l0 * l1 > 0) return std::nullopt;  // definite rank-2 part: complex planes
    double sp = std::sqrt(std::fabs(std::max(l0, l1)));
    double sm = std::sqrt(std::fabs(std::min(l0, l1)));
    ProjVec<double> up = (l0 > 0) ? column(idx[0]) : column(idx[1]);
    ProjVec<double> um = (l0 > 0) ? column(idx[1]) : column(idx[0]);
    out.p1.v.resize(4);
    out.p2.v.resize(4);
    for (int i = 0; i < 4; ++i) {
        out.p1[i] = sp * up[i] - sm * um[i];
        out.p2[i] = sp * up[i] + sm * um[i];
    }
    out.double_plane = false;
    return out;
}

// det(lam Q1 + mu Q2) = sum_k c[k] lam^k mu^{4-k}, by exact evaluation at
// five pencil points.
template <class K>
std::array<K, 5> pencil_quartic(const Mat<K>& q1, const Mat<K>& q2)
{
    auto member = [&](long l, long mu) {
        Mat<K> m(4, 4);
        K kl = FieldTraits<K>::from_int(l), km = FieldTraits<K>::from_int(mu);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = kl * q1(i, j) + km * q2(i, j);
        return det(m);
    };
    std::array<K, 5> c{};
    c[4] = member(1, 0);
    c[0] = member(0, 1);
    K d11 = member(1, 1), d1m = member(1, -1), d21 = member(2, 1);
    const K two = FieldTraits<K>::from_int(2), four = FieldTraits<K>::from_int(4);
    const K six = FieldTraits<K>::from_int(6), sixteen = FieldTraits<K>::from_int(16);
    K s1 = d11 - c[0] - c[4];
    K s2 = d1m - c[0] - c[4];
    K s3 = d21 - c[0] - sixteen * c[4];
    c[2] = (s1 + s2) / two;
    K t1 = (s1 - s2) / two;              // c1 + c3
    K t2 = s3 - four * c[2];             // 2 c1 + 8 c3
    c[3] = (t2 - two * t1) / six;
    c[1] = t1 - c[3];
    return c;
}

}  // namespace detail

template <class K>
struct Reconstruction {
    std::vector<PlaneCurveParam<K>> candidates;
    bool multiplicity = false;           // a pencil member collapsed (double plane / repeated root)
    bool used_float_fallback = false;    // exact input, irrational pencil root or plane split
    std::vector<PlaneCurveParam<double>> float_candidates;
};

namespace detail {

// Validate a candidate plane: recover alpha from view 1, keep iff the
// re-projection to view 2 matches delta.
template <class K>
std::optional<PlaneCurveParam<K>> candidate_from_plane(const Camera<K>& c1, const Camera<K>& c2,
                                                       const ImageCurve<K>& g,
                                                       const ImageCurve<K>& dl,
                                                       const ProjVec<K>& h, double tol)
{
    if (h.is_zero()) return std::nullopt;
    Mat<K> e;
    try {
        e = plane_embedding(h);
    } catch (const Error&) {
        return std::nullopt;
    }
    Mat<K> n1 = veronese_matrix(2, c1.matrix * e);
    Mat<K> n2 = veronese_matrix(2, c2.matrix * e);
    if (FieldTraits<K>::is_zero(det(n1)) || FieldTraits<K>::is_zero(det(n2))) return std::nullopt;
    PlaneCurveParam<K> pc;
    pc.degree = 2;
    pc.h = h;
    pc.alpha = ProjVec<K>(n1.transpose() * g.coeffs);
    if (pc.alpha.is_zero()) return std::nullopt;
    ProjVec<K> dhat(adjugate(n2).transpose() * pc.alpha);
    if (!proj_eq(dhat, dl.coeffs, tol)) return std::nullopt;
    return pc;
}

template <class K>
void push_unique_candidate(std::vector<PlaneCurveParam<K>>& list, PlaneCurveParam<K> pc,
                           bool& multiplicity, double tol)
{
    for (const auto& c : list)
        if (proj_eq(c.h, pc.h, tol) && proj_eq(c.alpha, pc.alpha, tol)) {
            multiplicity = true;
            return;
        }
    list.push_back(std::move(pc));
}

}  // namespace detail

inline Reconstruction<double> reconstruct_two_view(const Camera<double>& c1,
                                                   const Camera<double>& c2,
                                                   const ImageCurve<double>& g,
                                                   const ImageCurve<double>& dl,
                                                   double tol = 1e-8)
{
    if (g.degree != 2 || dl.degree != 2)
        throw Error(errc::invalid_degree, "reconstruction is defined for conics");
    if (proj_eq(c1.center, c2.center)) throw Error(errc::degenerate_pair, "cameras share a center");
    ImageCurve<double> gn{2, g.coeffs.normalized()}, dn{2, dl.coeffs.normalized()};
    Mat<double> q1 = back_project_cone(c1, gn).quadric_matrix();
    Mat<double> q2 = back_project_cone(c2, dn).quadric_matrix();
    auto c = detail::pencil_quartic(q1, q2);
    double scale = 0.0;
    for (const double& x : c) scale = std::max(scale, std::fabs(x));
    Reconstruction<double> rec;

    std::vector<std::pair<double, double>> roots;  // (lam, mu)
    if (scale <= 1e-13) {
        // degenerate pencil: every member singular; scan a nonzero 3x3 minor
        // system for rank<=2 members
        std::vector<BinForm<double>> cubics;
        for (int ri = 0; ri < 4; ++ri)
            for (int ci = 0; ci < 4; ++ci) {
                BinForm<double> f(4, 0.0);
                // det of 3x3 minor of lam q1 + mu q2: evaluate at 4 points and interpolate
                auto minor_at = [&](double l, double m) {
                    Mat<double> w(3, 3);
                    for (int r = 0, rr = 0; r < 4; ++r) {
                        if (r == ri) continue;
                        for (int cc = 0, ww = 0; cc < 4; ++cc) {
                            if (cc == ci) continue;
                            w(rr, ww) = l * q1(r, cc) + m * q2(r, cc);
                            ++ww;
                        }
                        ++rr;
                    }
                    return det(w);
                };
                // f = a s^3 + b s^2 t + c s t^2 + d t^3
                double f10 = minor_at(1, 0), f01 = minor_at(0, 1);
                double f11 = minor_at(1, 1), f1m = minor_at(1, -1);
                f[0] = f10;
                f[3] = f01;
                f[1] = (f11 - f1m) / 2.0 - f01;
                f[2] = (f11 + f1m) / 2.0 - f10;
                cubics.push_back(std::move(f));
            }
        double cs = 0.0;
        for (auto& f : cubics)
            for (double x : f) cs = std::max(cs, std::fabs(x));
        if (cs == 0.0) throw Error(errc::no_planar_solution, "pencil is identically rank deficient");
        int lead = 0;
        while (binform_is_zero(cubics[lead])) ++lead;
        std::vector<double> asc(cubics[lead].rbegin(), cubics[lead].rend());
        for (double r : real_poly_roots(asc)) {
            bool common = true;
            for (const auto& f : cubics)
                if (std::fabs(binform_eval(f, r, 1.0)) > 1e-6 * cs * std::pow(std::max(1.0, std::fabs(r)), 3))
                    common = false;
            if (common) roots.push_back({r, 1.0});
        }
        if (std::fabs(cubics[lead][0]) <= 1e-10 * cs) {
            bool common = true;
            for (const auto& f : cubics)
                if (std::fabs(f[0]) > 1e-6 * cs) common = false;
            if (common) roots.push_back({1.0, 0.0});
        }
        rec.multiplicity = true;
    } else {
        // structural roots (1:0),(0:1) are the cones themselves
        double c3 = c[3] / scale, c2c = c[2] / scale, c1c = c[1] / scale;
        double disc = c2c * c2c - 4.0 * c3 * c1c;
        if (std::fabs(c3) <= 1e-12) {
            if (std::fabs(c2c) > 1e-12) roots.push_back({-c1c / c2c, 1.0});
        } else if (disc >= -1e-12 * (c2c * c2c + std::fabs(4.0 * c3 * c1c))) {
            double sq = std::sqrt(std::max(0.0, disc));
            roots.push_back({(-c2c + sq) / (2 * c3), 1.0});
            roots.push_back({(-c2c - sq) / (2 * c3), 1.0});
        }
    }

    bool found_rank2 = false;
    for (auto [l, m] : roots) {
        Mat<double> w(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) w(i, j) = l * q1(i, j) + m * q2(i, j);
        std::vector<double> sv = singular_values(w);
        if (sv[0] == 0.0 || sv[2] / sv[0] > 1e-6) continue;  // not rank <= 2
        found_rank2 = true;
        auto split = detail::split_planes(w);
        if (!split) continue;
        if (split->double_plane) rec.multiplicity = true;
        for (const ProjVec<double>* h : {&split->p1, &split->p2}) {
            auto cand = detail::candidate_from_plane(c1, c2, gn, dn, *h, tol);
            if (cand) detail::push_unique_candidate(rec.candidates, std::move(*cand), rec.multiplicity, 1e-6);
            if (split->double_plane) break;
        }
    }
    if (rec.candidates.empty()) {
        throw Error(errc::no_planar_solution,
                    found_rank2 ? "no pencil plane reproduces both views"
                                : "pencil has no rank-2 member");
    }
    return rec;
}

inline Reconstruction<Rat> reconstruct_two_view(const Camera<Rat>& c1, const Camera<Rat>& c2,
                                                const ImageCurve<Rat>& g, const ImageCurve<Rat>& dl,
                                                double tol = 1e-8)
{
    if (g.degree != 2 || dl.degree != 2)
        throw Error(errc::invalid_degree, "reconstruction is defined for conics");
    if (proj_eq(c1.center, c2.center)) throw Error(errc::degenerate_pair, "cameras share a center");
    Mat<Rat> q1 = back_project_cone(c1, g).quadric_matrix();
    Mat<Rat> q2 = back_project_cone(c2, dl).quadric_matrix();
    auto c = detail::pencil_quartic(q1, q2);
    Reconstruction<Rat> rec;

    auto to_double_fallback = [&]() {
        auto cam1 = make_camera(convert_mat<double>(c1.matrix));
        auto cam2 = make_camera(convert_mat<double>(c2.matrix));
        ImageCurve<double> gd{2, convert_vec<double>(g.coeffs)};
        ImageCurve<double> dd{2, convert_vec<double>(dl.coeffs)};
        Reconstruction<double> fr = reconstruct_two_view(cam1, cam2, gd, dd, tol);
        rec.used_float_fallback = true;
        rec.multiplicity = fr.multiplicity;
        rec.float_candidates = std::move(fr.candidates);
    };

    bool all_zero = true;
    for (const Rat& x : c)
        if (!x.is_zero()) all_zero = false;

    std::vector<std::pair<Rat, Rat>> roots;
    if (all_zero) {
        // every member is singular; common roots of the 3x3 minor cubics
        std::vector<BinForm<Rat>> cubics;
        for (int ri = 0; ri < 4; ++ri)
            for (int ci = 0; ci < 4; ++ci) {
                auto minor_at = [&](long l, long m) {
                    Mat<Rat> w(3, 3);
                    for (int r = 0, rr = 0; r < 4; ++r) {
                        if (r == ri) continue;
                        for (int cc = 0, ww = 0; cc < 4; ++cc) {
                            if (cc == ci) continue;
                            w(rr, ww) = Rat(l) * q1(r, cc) + Rat(m) * q2(r, cc);
                            ++ww;
                        }
                        ++rr;
                    }
                    return det(w);
                };
                BinForm<Rat> f(4, Rat(0));
                Rat f10 = minor_at(1, 0), f01 = minor_at(0, 1);
                Rat f11 = minor_at(1, 1), f1m = minor_at(1, -1);
                f[0] = f10;
                f[3] = f01;
                f[1] = (f11 - f1m) / Rat(2) - f01;
                f[2] = (f11 + f1m) / Rat(2) - f10;
                cubics.push_back(std::move(f));
            }
        BinFormGcd gcd = binform_gcd(cubics);
        if (gcd.all_zero) throw Error(errc::no_planar_solution, "pencil is identically rank deficient");
        if (gcd.t_mult > 0) roots.push_back({Rat(1), Rat(0)});
        if (gcd.poly.size() > 1) {
            auto rr = rational_roots_deg2(gcd.poly);
            if (!rr) {
                to_double_fallback();
                if (rec.float_candidates.empty())
                    throw Error(errc::no_planar_solution, "no rational or float pencil member found");
                return rec;
            }
            for (const Rat& r : *rr) roots.push_back({r, Rat(1)});
        }
        rec.multiplicity = true;
    } else {
        if (!c[4].is_zero() || !c[0].is_zero())
            throw Error(errc::invalid_input, "back-projected cones must be singular quadrics");
        std::vector<Rat> quad = {c[1], c[2], c[3]};  // in x = lam/mu
        auto rr = rational_roots_deg2(quad);
        if (!rr) {
            to_double_fallback();
            if (rec.float_candidates.empty())
                throw Error(errc::no_planar_solution, "residual quadratic is irrational and float found nothing");
            return rec;
        }
        for (const Rat& r : *rr) roots.push_back({r, Rat(1)});
        if (c[3].is_zero()) roots.push_back({Rat(1), Rat(0)});
        // deduplicate projectively
        std::vector<std::pair<Rat, Rat>> uniq;
        for (auto& r : roots) {
            bool dup = false;
            for (auto& u : uniq)
                if ((r.first * u.second - r.second * u.first).is_zero()) dup = true;
            if (!dup) uniq.push_back(r);
        }
        roots = std::move(uniq);
    }

    bool found_rank2 = false;
    bool irrational_split = false;
    for (auto& [l, m] : roots) {
        Mat<Rat> w(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) w(i, j) = l * q1(i, j) + m * q2(i, j);
        if (w.is_zero() || rank(w) > 2) continue;
        found_rank2 = true;
        auto split = detail::split_planes(w);
        if (!split) {
            irrational_split = true;
            continue;
        }
        if (split->double_plane) rec.multiplicity = true;
        for (const ProjVec<Rat>* h : {&split->p1, &split->p2}) {
            auto cand = detail::candidate_from_plane(c1, c2, g, dl, *h, tol);
            if (cand) detail::push_unique_candidate(rec.candidates, std::move(*cand), rec.multiplicity, tol);
            if (split->double_plane) break;
        }
    }
    if (rec.candidates.empty()) {
        if (irrational_split) {
            to_double_fallback();
            if (!rec.float_candidates.empty()) return rec;
        }
        throw Error(errc::no_planar_solution,
                    found_rank2 ? "no pencil plane reproduces both views"
                                : "pencil has no rank-2 member");
    }
    return rec;
}

// ---------------------------------------------------------------------------
// n-view membership verdict.

template <class K>
struct NViewVerdict {
    bool verdict = false;
    std::optional<PlaneCurveParam<K>> witness;
    std::vector<std::string> diagnostics;
};

template <class K>
NViewVerdict<K> n_view_check(const Arrangement<K>& arr, const std::vector<ImageCurve<K>>& views,
                             double tol = 1e-8)
{
    int n = static_cast<int>(arr.cameras.size());
    if (n < 2 || static_cast<int>(views.size()) != n)
        throw Error(errc::invalid_input, "need n >= 2 cameras with one view each");
    for (const auto& v : views)
        if (v.degree != 2) throw Error(errc::invalid_degree, "n-view check is for conics");

    NViewVerdict<K> out;
    std::vector<ProjVec<K>> centers;
    for (const auto& cam : arr.cameras) centers.push_back(cam.center);
    SimplicityReport simple = arrangement_simple(centers);
    if (!simple.verdict)
        out.diagnostics.push_back(
            "unsupported-regime: arrangement is not simple, the membership "
            "characterization is only an iff for simple arrangements");

    // first pair with distinct centers
    int pi = -1, pj = -1;
    for (int i = 0; i < n && pi < 0; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!proj_eq(arr.cameras[i].center, arr.cameras[j].center)) {
                pi = i;
                pj = j;
                break;
            }
    if (pi < 0) throw Error(errc::no_valid_pair, "all camera centers coincide");

    TwoViewVerdict<K> pair = two_view_check(arr.cameras[pi], arr.cameras[pj], views[pi], views[pj], tol);
    if (!pair.ok) {
        out.diagnostics.push_back("pair (" + std::to_string(pi) + "," + std::to_string(pj) +
                                  ") fails the two-view ideal");
        return out;
    }

    Reconstruction<K> rec;
    try {
        rec = reconstruct_two_view(arr.cameras[pi], arr.cameras[pj], views[pi], views[pj], tol);
    } catch (const Error& e) {
        out.diagnostics.push_back(std::string("reconstruction failed: ") + e.what());
        return out;
    }
    if (rec.used_float_fallback)
        out.diagnostics.push_back("irrational pencil: candidates evaluated in float");

    for (const auto& cand : rec.candidates) {
        bool all_ok = true;
        for (int k = 0; k < n && all_ok; ++k) {
            Cone<K> cone = back_project_cone(arr.cameras[k], views[k]);
            std::string why;
            BlowupCase bc = classify_blowup(cand, arr.cameras[k].center, cone, tol, &why);
            if (bc == BlowupCase::NotMember) {
                all_ok = false;
                out.diagnostics.push_back("candidate rejected at view " + std::to_string(k) + ": " + why);
            }
        }
        if (all_ok) {
            out.verdict = true;
            out.witness = cand;
            return out;
        }
    }
    return out;
}

}  // namespace cmv
