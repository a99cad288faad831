#pragma once

#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "cmv/linalg.hpp"

namespace cmv {

// Graded lexicographic monomial order with x0 > x1 > ... > xN. Within one
// degree this is descending lex on exponent tuples, so for d=2, N=2 the
// order is x0^2, x0x1, x0x2, x1^2, x1x2, x2^2 and for d=3, N=1 it is
// s^3, s^2 t, s t^2, t^3, matching the displayed two-view equations and the
// standard twisted cubic parametrization.
class MonomialOrder {
  public:
    int degree;
    int nvars;
    std::vector<std::vector<int>> exps;

    static const MonomialOrder& get(int degree, int nvars)
    {
        static std::map<std::pair<int, int>, MonomialOrder> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(degree, nvars);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, MonomialOrder(degree, nvars)).first;
        return it->second;
    }

    int size() const { return static_cast<int>(exps.size()); }

    int index_of(const std::vector<int>& e) const
    {
        auto it = index_.find(e);
        if (it == index_.end()) throw Error(errc::invalid_input, "exponent not in monomial order");
        return it->second;
    }

  private:
    MonomialOrder(int d, int n) : degree(d), nvars(n)
    {
        if (d < 0 || n < 1) throw Error(errc::invalid_input, "bad monomial order parameters");
        std::vector<int> cur(n, 0);
        build(cur, d, 0);
        for (int i = 0; i < size(); ++i) index_[exps[i]] = i;
    }

    void build(std::vector<int>& cur, int rem, int k)
    {
        if (k == nvars - 1) {
            cur[k] = rem;
            exps.push_back(cur);
            return;
        }
        for (int e = rem; e >= 0; --e) {
            cur[k] = e;
            build(cur, rem - e, k + 1);
        }
    }

    std::map<std::vector<int>, int> index_;
};

inline long binom(int n, int k)
{
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// nu_d^N(X): all degree-d monomials of X in MonomialOrder.
template <class K>
ProjVec<K> veronese(int d, const ProjVec<K>& x)
{
    if (d < 1) throw Error(errc::invalid_input, "veronese degree must be >= 1");
    const MonomialOrder& ord = MonomialOrder::get(d, x.size());
    ProjVec<K> out;
    out.v.resize(ord.size(), FieldTraits<K>::zero());
    for (int i = 0; i < ord.size(); ++i) {
        K p = FieldTraits<K>::one();
        for (int j = 0; j < x.size(); ++j)
            for (int e = 0; e < ord.exps[i][j]; ++e) p = p * x[j];
        out[i] = p;
    }
    return out;
}

// nu_d^{h,N}(A): the induced matrix with nu_d^h(AX) = nu_d^{h,N}(A) nu_d^N(X).
// Row i is the multinomial expansion of prod_k (row_k(A) . x)^{e_k} for the
// i-th monomial, collected onto the target basis. Exact, no interpolation.
template <class K>
Mat<K> veronese_matrix(int d, const Mat<K>& a)
{
    if (d < 1) throw Error(errc::invalid_input, "veronese degree must be >= 1");
    const MonomialOrder& rows = MonomialOrder::get(d, a.rows());
    const MonomialOrder& cols = MonomialOrder::get(d, a.cols());
    Mat<K> m(rows.size(), cols.size());
    for (int r = 0; r < rows.size(); ++r) {
        std::map<std::vector<int>, K> poly;
        poly[std::vector<int>(a.cols(), 0)] = FieldTraits<K>::one();
        for (int k = 0; k < a.rows(); ++k) {
            for (int rep = 0; rep < rows.exps[r][k]; ++rep) {
                std::map<std::vector<int>, K> next;
                for (const auto& [mono, coef] : poly) {
                    for (int j = 0; j < a.cols(); ++j) {
                        if (FieldTraits<K>::is_zero(a(k, j))) continue;
                        std::vector<int> m2 = mono;
                        ++m2[j];
                        auto [it, fresh] = next.try_emplace(std::move(m2), FieldTraits<K>::zero());
                        it->second += coef * a(k, j);
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto& [mono, coef] : poly) m(r, cols.index_of(mono)) = coef;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Pluecker coordinates, minor order [12],[13],[14],[23],[24],[34].

inline constexpr std::array<std::pair<int, int>, 6> kMinorPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

template <class K>
struct PlueckerLine {
    ProjVec<K> coords;  // length 6
};

// pl(X0, X1): minor [ij] = X0_i X1_j - X0_j X1_i (1-based columns).
template <class K>
PlueckerLine<K> plucker(const ProjVec<K>& x0, const ProjVec<K>& x1)
{
    if (x0.size() != 4 || x1.size() != 4)
        throw Error(errc::invalid_input, "pluecker embedding needs points in P^3");
    PlueckerLine<K> l;
    l.coords.v.resize(6);
    for (int k = 0; k < 6; ++k) {
        auto [i, j] = kMinorPairs[k];
        l.coords[k] = x0[i] * x1[j] - x0[j] * x1[i];
    }
    if (l.coords.is_zero())
        throw Error(errc::degenerate_span, "points do not span a line");
    return l;
}

// The signed permutation Sigma exchanging point-span and hyperplane-pair
// coordinates of a line; Sigma^2 = I.
template <class K>
Mat<K> sigma_matrix()
{
    Mat<K> s(6, 6);
    const K one = FieldTraits<K>::one();
    s(0, 5) = one;
    s(1, 4) = -one;
    s(2, 3) = one;
    s(3, 2) = one;
    s(4, 1) = -one;
    s(5, 0) = one;
    return s;
}

template <class K>
PlueckerLine<K> dual_line(const PlueckerLine<K>& l)
{
    PlueckerLine<K> d;
    d.coords = ProjVec<K>(sigma_matrix<K>() * l.coords);
    return d;
}

// wedge^2 M: the 6x6 matrix with pl(M X0, M X1) = (wedge^2 M) pl(X0, X1).
template <class K>
Mat<K> wedge2(const Mat<K>& m)
{
    if (m.rows() != 4 || m.cols() != 4)
        throw Error(errc::invalid_input, "wedge2 expects a 4x4 matrix");
    Mat<K> w(6, 6);
    for (int a = 0; a < 6; ++a) {
        auto [i, j] = kMinorPairs[a];
        for (int b = 0; b < 6; ++b) {
            auto [k, l] = kMinorPairs[b];
            w(a, b) = m(i, k) * m(j, l) - m(i, l) * m(j, k);
        }
    }
    return w;
}

// Grassmann-Pluecker form L0 L5 - L1 L4 + L2 L3; zero exactly on Gr(1,P^3).
template <class K>
K grassmann_pluecker(const PlueckerLine<K>& l)
{
    const auto& c = l.coords;
    return c[0] * c[5] - c[1] * c[4] + c[2] * c[3];
}

}  // namespace cmv
