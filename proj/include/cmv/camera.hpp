#pragma once

#include <array>
#include <optional>

#include "cmv/chow.hpp"
#include "cmv/multilinear.hpp"
#include "cmv/numrank.hpp"

namespace cmv {

// Exact rank for exact fields, SVD rank for floats.
template <class K>
int rank_or_numrank(const Mat<K>& m, double tol = 1e-8)
{
    if constexpr (FieldTraits<K>::is_exact) {
        (void)tol;
        return rank(m);
    } else {
        Mat<double> d(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) d(i, j) = FieldTraits<K>::to_double(m(i, j));
        return numerical_rank(d, tol);
    }
}

// E(c): the 6x4 matrix with E(c) X = pl(c, X) up to one global sign
// (entrywise it equals -pl(c, X)); E(c) c = 0.
template <class K>
Mat<K> e_matrix(const ProjVec<K>& c)
{
    if (c.size() != 4 || c.is_zero())
        throw Error(errc::invalid_input, "center must be a nonzero point of P^3");
    const K z = FieldTraits<K>::zero();
    return Mat<K>(6, 4,
                  {c[1], -c[0], z, z,
                   c[2], z, -c[0], z,
                   c[3], z, z, -c[0],
                   z, c[2], -c[1], z,
                   z, c[3], z, -c[1],
                   z, z, c[3], -c[2]});
}

// Full-rank 3x4 camera with cached center, right pseudo-inverse and the
// 6x3 back-projection matrix Chat = E(c) C^dagger. Immutable after
// construction; Chat C = E(c) holds exactly and is asserted here, which also
// makes Chat independent of the pseudo-inverse choice.
template <class K>
struct Camera {
    Mat<K> matrix;    // 3x4
    ProjVec<K> center;
    Mat<K> pinv;      // 4x3
    Mat<K> chat;      // 6x3
};

template <class K>
Camera<K> make_camera(const Mat<K>& m)
{
    if (m.rows() != 3 || m.cols() != 4)
        throw Error(errc::invalid_camera, "camera matrix must be 3x4");
    if constexpr (FieldTraits<K>::is_exact) {
        if (rank(m) < 3) throw Error(errc::invalid_camera, "camera matrix must have rank 3");
    }
    Camera<K> cam;
    cam.matrix = m;
    auto ker = kernel_basis(m);
    if (ker.size() != 1) throw Error(errc::invalid_camera, "camera matrix must have rank 3");
    cam.center = ProjVec<K>(ker[0]);
    cam.pinv = right_pseudo_inverse(m);
    cam.chat = e_matrix(cam.center) * cam.pinv;
    if constexpr (FieldTraits<K>::is_exact) {
        if (!(cam.chat * cam.matrix == e_matrix(cam.center)))
            throw Error(errc::invalid_camera, "Chat C = E(c) identity failed");
    }
    return cam;
}

template <class K>
struct FundamentalMatrix {
    Mat<K> f;  // 3x3, rank 2
};

// F^12 extracted from det [[C1 y1 0],[C2 0 y2]] by evaluating the bilinear
// form on the nine basis pairs; immune to cofactor sign slips.
template <class K>
FundamentalMatrix<K> fundamental(const Camera<K>& c1, const Camera<K>& c2)
{
    if (proj_eq(c1.center, c2.center))
        throw Error(errc::degenerate_pair, "cameras share a center");
    Mat<K> m(6, 6);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) {
            m(r, c) = c1.matrix(r, c);
            m(3 + r, c) = c2.matrix(r, c);
        }
    FundamentalMatrix<K> fm{Mat<K>(3, 3)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Mat<K> s = m;
            s(i, 4) = FieldTraits<K>::one();
            s(3 + j, 5) = FieldTraits<K>::one();
            fm.f(i, j) = det(s);
        }
    return fm;
}

// e21 = ker F^12, e12 = ker (F^12)^T; the images of the opposite centers.
template <class K>
std::pair<ProjVec<K>, ProjVec<K>> epipoles(const FundamentalMatrix<K>& f)
{
    auto k = kernel_basis(f.f);
    auto kt = kernel_basis(f.f.transpose());
    if (k.size() != 1 || kt.size() != 1)
        throw Error(errc::invalid_fundamental, "fundamental matrix must have rank 2");
    return {ProjVec<K>(kt[0]), ProjVec<K>(k[0])};  // (e12, e21)
}

template <class K>
Mat<K> cross_matrix(const ProjVec<K>& e)
{
    const K z = FieldTraits<K>::zero();
    return Mat<K>(3, 3, {z, -e[2], e[1], e[2], z, -e[0], -e[1], e[0], z});
}

// Standard solution of a fundamental matrix: cameras C1 = [0 | A1] and
// C2 = [A2 | 0] with fundamental(C1, C2) projectively equal to F. The case
// index i picks the nonzero coordinate of e21 that goes into A2's first
// column; A2 is then invertible by construction and A1 generically so.
template <class K>
struct StdSolution {
    Camera<K> c1, c2;
    int case_index = 0;
    Mat<K> a1, a2;  // 3x3 blocks, C1 = A1 [0 I], C2 = A2 [I 0]
};

template <class K>
StdSolution<K> std_solution(const FundamentalMatrix<K>& f,
                            std::optional<int> case_override = std::nullopt)
{
    if (f.f.rows() != 3 || f.f.cols() != 3 || rank_or_numrank(f.f) != 2)
        throw Error(errc::invalid_fundamental, "fundamental matrix must be 3x3 of rank 2");
    auto [e12, e21] = epipoles(f);
    int i = -1;
    if (case_override) {
        i = *case_override;
        if (i < 0 || i > 2 || FieldTraits<K>::is_zero(e21[i]))
            throw Error(errc::non_generic_epipole, "requested case has zero epipole coordinate");
    } else if constexpr (FieldTraits<K>::is_exact) {
        for (int k = 0; k < 3; ++k)
            if (!FieldTraits<K>::is_zero(e21[k])) { i = k; break; }
    } else {
        double best = -1.0;
        for (int k = 0; k < 3; ++k)
            if (FieldTraits<K>::magnitude(e21[k]) > best) {
                best = FieldTraits<K>::magnitude(e21[k]);
                i = k;
            }
    }
    Mat<K> b = cross_matrix(e12) * f.f;
    std::array<int, 2> rest{};
    for (int k = 0, w = 0; k < 3; ++k)
        if (k != i) rest[w++] = k;

    StdSolution<K> s;
    s.case_index = i;
    s.a1 = from_cols<K>({b.col(rest[0]), b.col(rest[1]), e12.v});
    std::vector<K> unit0(3, FieldTraits<K>::zero()), unit1(3, FieldTraits<K>::zero());
    unit0[rest[0]] = FieldTraits<K>::one();
    unit1[rest[1]] = FieldTraits<K>::one();
    s.a2 = from_cols<K>({e21.v, unit0, unit1});

    Mat<K> zero_col(3, 1);
    s.c1 = make_camera(hstack(zero_col, s.a1));
    s.c2 = make_camera(hstack(s.a2, zero_col));
    return s;
}

// Plane-induced homography H_{2,1}(h) = (C2 H(h)) (C1 H(h))^{-1}; transfers
// first-view images of points on the plane of h to the second view.
template <class K>
Mat<K> homography(const Camera<K>& c1, const Camera<K>& c2, const ProjVec<K>& h)
{
    Mat<K> e = plane_embedding(h);
    Mat<K> m1 = c1.matrix * e;
    Mat<K> m2 = c2.matrix * e;
    auto inv1 = try_inverse(m1);
    if (!inv1 || !try_inverse(m2))
        throw Error(errc::plane_through_center, "plane passes through a camera center");
    return m2 * (*inv1);
}

}  // namespace cmv
