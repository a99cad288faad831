#pragma once

#include "cmv/linalg.hpp"
#include "cmv/rng.hpp"

namespace cmv::testutil {

inline Mat<Rat> rand_mat(Rng& rng, int r, int c, long lo = -9, long hi = 9)
{
    Mat<Rat> m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.rat_int(lo, hi);
    return m;
}

inline ProjVec<Rat> rand_vec(Rng& rng, int n, long lo = -9, long hi = 9)
{
    ProjVec<Rat> v;
    v.v.resize(n);
    for (auto& x : v.v) x = rng.rat_int(lo, hi);
    return v;
}

inline ProjVec<Rat> rand_nonzero_vec(Rng& rng, int n, long lo = -9, long hi = 9)
{
    for (;;) {
        ProjVec<Rat> v = rand_vec(rng, n, lo, hi);
        if (!v.is_zero()) return v;
    }
}

inline Mat<Rat> rand_invertible(Rng& rng, int n, long lo = -9, long hi = 9)
{
    for (;;) {
        Mat<Rat> m = rand_mat(rng, n, n, lo, hi);
        if (!det(m).is_zero()) return m;
    }
}

inline Mat<Rat> rand_camera_matrix(Rng& rng)
{
    for (;;) {
        Mat<Rat> m = rand_mat(rng, 3, 4);
        if (rank(m) == 3) return m;
    }
}

}  // namespace cmv::testutil
