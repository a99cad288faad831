#pragma once

#include <array>
#include <cmath>

#include "cmv/rat.hpp"

namespace cmv {

// Forward-mode scalar: value plus a gradient of up to kMaxDualVars partials.
// All parameter vectors in this project have at most 13 free coordinates, so
// a fixed-size gradient keeps residual/Jacobian evaluation allocation-free.
inline constexpr int kMaxDualVars = 16;

struct Dual {
    double v = 0.0;
    std::array<double, kMaxDualVars> g{};

    Dual() = default;
    Dual(double value) : v(value) {}
    static Dual variable(double value, int index)
    {
        Dual d(value);
        d.g[index] = 1.0;
        return d;
    }

    Dual operator-() const
    {
        Dual r(-v);
        for (int i = 0; i < kMaxDualVars; ++i) r.g[i] = -g[i];
        return r;
    }
    Dual& operator+=(const Dual& o)
    {
        v += o.v;
        for (int i = 0; i < kMaxDualVars; ++i) g[i] += o.g[i];
        return *this;
    }
    Dual& operator-=(const Dual& o)
    {
        v -= o.v;
        for (int i = 0; i < kMaxDualVars; ++i) g[i] -= o.g[i];
        return *this;
    }
    Dual& operator*=(const Dual& o)
    {
        for (int i = 0; i < kMaxDualVars; ++i) g[i] = g[i] * o.v + v * o.g[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o)
    {
        double inv = 1.0 / o.v;
        for (int i = 0; i < kMaxDualVars; ++i) g[i] = (g[i] - v * inv * o.g[i]) * inv;
        v *= inv;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }

    friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
    friend bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }
    friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
    friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
};

inline Dual sqrt(const Dual& a)
{
    Dual r(std::sqrt(a.v));
    double f = 0.5 / r.v;
    for (int i = 0; i < kMaxDualVars; ++i) r.g[i] = a.g[i] * f;
    return r;
}

template <>
struct FieldTraits<Dual> {
    static constexpr bool is_exact = false;
    static Dual zero() { return Dual(0.0); }
    static Dual one() { return Dual(1.0); }
    static bool is_zero(const Dual& x) { return x.v == 0.0; }
    static double magnitude(const Dual& x) { return std::fabs(x.v); }
    static double to_double(const Dual& x) { return x.v; }
    static Dual from_int(long n) { return Dual(static_cast<double>(n)); }
};

}  // namespace cmv
