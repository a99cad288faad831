#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "cmv/error.hpp"

namespace cmv {

// Arbitrary-precision rational scalar. mpq_class keeps values canonical
// (reduced, positive denominator), which is exactly the serialization
// contract "p/q".
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long n, long d) : v_(n, d)
    {
        if (d == 0) throw Error(errc::invalid_input, "rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rat parse(std::string_view s)
    {
        try {
            mpq_class q(std::string(s), 10);
            if (q.get_den() == 0)
                throw Error(errc::parse_error, "zero denominator in rational literal");
            q.canonicalize();
            return Rat(q);
        } catch (const std::invalid_argument&) {
            throw Error(errc::parse_error, "bad rational literal: " + std::string(s));
        }
    }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o)
    {
        if (o.is_zero()) throw Error(errc::invalid_input, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }
    Rat abs() const { return Rat(mpq_class(::abs(v_))); }

    double to_double() const { return v_.get_d(); }
    std::string str() const { return v_.get_str(); }  // "p" or "p/q", reduced, q > 0

    const mpq_class& raw() const { return v_; }

  private:
    mpq_class v_;
};

// Uniform scalar interface for the templated linear algebra. Exact fields
// get structural zero tests and first-nonzero pivoting; floating types get
// magnitude pivoting.
template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
    static constexpr bool is_exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static bool is_zero(const Rat& x) { return x.is_zero(); }
    static double magnitude(const Rat& x) { return std::fabs(x.to_double()); }
    static double to_double(const Rat& x) { return x.to_double(); }
    static Rat from_int(long n) { return Rat(n); }
};

template <>
struct FieldTraits<double> {
    static constexpr bool is_exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double x) { return x == 0.0; }
    static double magnitude(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
    static double from_int(long n) { return static_cast<double>(n); }
};

}  // namespace cmv
