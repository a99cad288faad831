#pragma once

#include <optional>
#include <vector>

#include "cmv/rat.hpp"

namespace cmv {

// Homogeneous binary form in (s, t): f = sum_k c[k] s^{deg-k} t^k with
// coefficients stored by descending s-degree.
template <class K>
using BinForm = std::vector<K>;

template <class K>
bool binform_is_zero(const BinForm<K>& f)
{
    for (const K& c : f)
        if (!FieldTraits<K>::is_zero(c)) return false;
    return true;
}

template <class K>
K binform_eval(const BinForm<K>& f, const K& s, const K& t)
{
    int deg = static_cast<int>(f.size()) - 1;
    K v = FieldTraits<K>::zero();
    for (int k = 0; k <= deg; ++k) {
        K term = f[k];
        for (int a = 0; a < deg - k; ++a) term = term * s;
        for (int a = 0; a < k; ++a) term = term * t;
        v += term;
    }
    return v;
}

// Gcd over Q of a family of binary forms, split into the shared power of t
// and the univariate gcd in s (ascending coefficients, normalized monic-ish).
struct BinFormGcd {
    std::vector<Rat> poly;  // univariate in s, ascending; empty means all forms were 0
    int t_mult = 0;
    bool all_zero = false;

    int degree() const
    {
        if (all_zero) return 1 << 20;
        return (poly.size() > 1 ? static_cast<int>(poly.size()) - 1 : 0) + t_mult;
    }
};

inline BinFormGcd binform_gcd(const std::vector<BinForm<Rat>>& forms)
{
    BinFormGcd out;
    auto trim = [](std::vector<Rat>& p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
    };
    std::vector<std::vector<Rat>> polys;
    int t_shared = 1 << 20;
    for (const auto& f : forms) {
        if (binform_is_zero(f)) continue;
        int deg = static_cast<int>(f.size()) - 1;
        int tmul = 0;
        while (tmul <= deg && f[tmul].is_zero()) ++tmul;  // t^j | f iff c[0..j-1] = 0
        t_shared = std::min(t_shared, tmul);
        std::vector<Rat> p(deg + 1);
        for (int j = 0; j <= deg; ++j) p[j] = f[deg - j];
        trim(p);
        polys.push_back(std::move(p));
    }
    if (polys.empty()) {
        out.all_zero = true;
        return out;
    }
    out.t_mult = t_shared;
    auto polymod = [&](std::vector<Rat> a, const std::vector<Rat>& b) {
        while (a.size() >= b.size() && !a.empty()) {
            Rat f = a.back() / b.back();
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
            trim(a);
        }
        return a;
    };
    std::vector<Rat> g = polys[0];
    for (size_t i = 1; i < polys.size() && g.size() > 1; ++i) {
        std::vector<Rat> b = polys[i];
        while (!b.empty()) {
            std::vector<Rat> r = polymod(g, b);
            g = b;
            b = r;
        }
    }
    if (!g.empty()) {
        Rat lead = g.back();
        for (Rat& c : g) c /= lead;
    }
    out.poly = std::move(g);
    return out;
}

inline std::optional<Rat> rat_sqrt(const Rat& x)
{
    if (x.sign() < 0) return std::nullopt;
    mpz_class num = x.raw().get_num(), den = x.raw().get_den();
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    if (rn * rn == num && rd * rd == den) return Rat(mpq_class(rn, rd));
    return std::nullopt;
}

// Rational roots of a univariate rational polynomial of degree <= 2
// (ascending coefficients). nullopt means roots exist but are irrational.
inline std::optional<std::vector<Rat>> rational_roots_deg2(const std::vector<Rat>& p)
{
    std::vector<Rat> q = p;
    while (!q.empty() && q.back().is_zero()) q.pop_back();
    if (q.empty()) throw Error(errc::invalid_input, "zero polynomial has no root list");
    if (q.size() == 1) return std::vector<Rat>{};
    if (q.size() == 2) return std::vector<Rat>{-q[0] / q[1]};
    if (q.size() == 3) {
        Rat disc = q[1] * q[1] - Rat(4) * q[2] * q[0];
        if (disc.sign() < 0) return std::vector<Rat>{};
        auto sq = rat_sqrt(disc);
        if (!sq) return std::nullopt;
        Rat two_a = Rat(2) * q[2];
        return std::vector<Rat>{(-q[1] + *sq) / two_a, (-q[1] - *sq) / two_a};
    }
    return std::nullopt;  // higher degree: not handled exactly
}

}  // namespace cmv
