#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <vector>

#include "cmv/error.hpp"
#include "cmv/rat.hpp"

namespace cmv {

// Small dense row-major matrix over an exact or floating scalar field.
// Everything here is immutable-by-convention after construction and all
// free functions are pure, so concurrent use needs no synchronization.
template <class K>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, FieldTraits<K>::zero())
    {
        if (rows < 0 || cols < 0) throw Error(errc::invalid_input, "negative matrix dimension");
    }
    Mat(int rows, int cols, std::initializer_list<K> entries) : Mat(rows, cols)
    {
        if (static_cast<int>(entries.size()) != rows * cols)
            throw Error(errc::invalid_input, "matrix initializer size mismatch");
        std::copy(entries.begin(), entries.end(), e_.begin());
    }

    static Mat identity(int n)
    {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = FieldTraits<K>::one();
        return m;
    }
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    K& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const K& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<K>& data() const { return e_; }
    std::vector<K>& data() { return e_; }

    Mat transpose() const
    {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat operator*(const Mat& o) const
    {
        if (cols_ != o.rows_) throw Error(errc::invalid_input, "matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const K& a = (*this)(i, k);
                if (FieldTraits<K>::is_zero(a)) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    std::vector<K> operator*(const std::vector<K>& x) const
    {
        if (cols_ != static_cast<int>(x.size()))
            throw Error(errc::invalid_input, "matrix-vector shape mismatch");
        std::vector<K> r(rows_, FieldTraits<K>::zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
        return r;
    }

    Mat operator+(const Mat& o) const
    {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }
    Mat operator-(const Mat& o) const
    {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
        return r;
    }
    Mat scaled(const K& s) const
    {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * s;
        return r;
    }

    bool is_zero() const
    {
        for (const K& x : e_)
            if (!FieldTraits<K>::is_zero(x)) return false;
        return true;
    }

    friend bool operator==(const Mat& a, const Mat& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    std::vector<K> row(int i) const
    {
        std::vector<K> r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    std::vector<K> col(int j) const
    {
        std::vector<K> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

  private:
    int rows_, cols_;
    std::vector<K> e_;
};

template <class K>
Mat<K> hstack(const Mat<K>& a, const Mat<K>& b)
{
    if (a.rows() != b.rows()) throw Error(errc::invalid_input, "hstack row mismatch");
    Mat<K> r(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

template <class K>
Mat<K> from_cols(const std::vector<std::vector<K>>& cols)
{
    if (cols.empty()) return Mat<K>();
    Mat<K> r(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (int j = 0; j < r.cols(); ++j)
        for (int i = 0; i < r.rows(); ++i) r(i, j) = cols[j][i];
    return r;
}

namespace detail {

// Row echelon by Gaussian elimination. Exact fields take the first nonzero
// pivot in column order ("first maximal pivot set"); floats take the entry
// of largest magnitude. Returns pivot column list; `m` is reduced in place.
template <class K>
std::vector<int> echelonize(Mat<K>& m)
{
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int p = -1;
        if constexpr (FieldTraits<K>::is_exact) {
            for (int i = r; i < m.rows(); ++i)
                if (!FieldTraits<K>::is_zero(m(i, c))) { p = i; break; }
        } else {
            double best = 0.0;
            for (int i = r; i < m.rows(); ++i) {
                double mag = FieldTraits<K>::magnitude(m(i, c));
                if (mag > best) { best = mag; p = i; }
            }
        }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        K inv_piv = FieldTraits<K>::one() / m(r, c);
        for (int j = c; j < m.cols(); ++j) m(r, j) = m(r, j) * inv_piv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || FieldTraits<K>::is_zero(m(i, c))) continue;
            K f = m(i, c);
            for (int j = c; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

template <class K>
K det(const Mat<K>& m)
{
    if (m.rows() != m.cols()) throw Error(errc::invalid_input, "determinant of non-square matrix");
    if (m.rows() == 0) return FieldTraits<K>::one();
    Mat<K> a = m;
    K d = FieldTraits<K>::one();
    int n = a.rows();
    for (int c = 0; c < n; ++c) {
        int p = -1;
        if constexpr (FieldTraits<K>::is_exact) {
            for (int i = c; i < n; ++i)
                if (!FieldTraits<K>::is_zero(a(i, c))) { p = i; break; }
        } else {
            double best = 0.0;
            for (int i = c; i < n; ++i) {
                double mag = FieldTraits<K>::magnitude(a(i, c));
                if (mag > best) { best = mag; p = i; }
            }
        }
        if (p < 0) return FieldTraits<K>::zero();
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
            d = -d;
        }
        d = d * a(c, c);
        K inv_piv = FieldTraits<K>::one() / a(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (FieldTraits<K>::is_zero(a(i, c))) continue;
            K f = a(i, c) * inv_piv;
            for (int j = c; j < n; ++j) a(i, j) = a(i, j) - f * a(c, j);
        }
    }
    return d;
}

// Exact row-echelon rank. For Float64 data use numerical_rank (SVD-based,
// see numrank.hpp); structural elimination over doubles is only safe on
// exactly-representable inputs.
template <class K>
int rank(const Mat<K>& m)
{
    if (m.empty()) throw Error(errc::invalid_input, "rank of empty matrix");
    Mat<K> a = m;
    return static_cast<int>(detail::echelonize(a).size());
}

// Basis of the right null space, exact in rational mode.
template <class K>
std::vector<std::vector<K>> kernel_basis(const Mat<K>& m)
{
    Mat<K> a = m;
    std::vector<int> pivots = detail::echelonize(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<K>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<K> v(m.cols(), FieldTraits<K>::zero());
        v[free] = FieldTraits<K>::one();
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class K>
std::optional<Mat<K>> try_inverse(const Mat<K>& m)
{
    if (m.rows() != m.cols()) throw Error(errc::invalid_input, "inverse of non-square matrix");
    Mat<K> a = hstack(m, Mat<K>::identity(m.rows()));
    std::vector<int> pivots = detail::echelonize(a);
    if (static_cast<int>(pivots.size()) != m.rows()) return std::nullopt;
    Mat<K> inv(m.rows(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.rows(); ++j) inv(i, j) = a(i, m.cols() + j);
    return inv;
}

template <class K>
Mat<K> inverse(const Mat<K>& m)
{
    auto inv = try_inverse(m);
    if (!inv) throw Error(errc::invalid_input, "singular matrix has no inverse");
    return *inv;
}

// adj(M) with adj(M)·M = det(M)·I. Invertible case via det·inverse; the
// singular case falls back to cofactors.
template <class K>
Mat<K> adjugate(const Mat<K>& m)
{
    int n = m.rows();
    if (n != m.cols()) throw Error(errc::invalid_input, "adjugate of non-square matrix");
    if (n == 1) return Mat<K>::identity(1);
    K d = det(m);
    if (!FieldTraits<K>::is_zero(d)) return inverse(m).scaled(d);
    Mat<K> adj(n, n);
    Mat<K> minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc) = m(r, c);
                    ++cc;
                }
                ++rr;
            }
            K cof = det(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

// Right inverse C·X = I solved column-wise by elimination; any valid choice
// is acceptable downstream (projection results are pseudo-inverse
// independent), this one is deterministic.
template <class K>
Mat<K> right_pseudo_inverse(const Mat<K>& c)
{
    if (c.empty()) throw Error(errc::invalid_input, "pseudo-inverse of empty matrix");
    Mat<K> a = hstack(c, Mat<K>::identity(c.rows()));
    std::vector<int> pivots = detail::echelonize(a);
    if (static_cast<int>(pivots.size()) != c.rows())
        throw Error(errc::invalid_input, "right pseudo-inverse requires full row rank");
    Mat<K> x(c.cols(), c.rows());
    for (size_t r = 0; r < pivots.size(); ++r)
        for (int j = 0; j < c.rows(); ++j) x(pivots[r], j) = a(static_cast<int>(r), c.cols() + j);
    return x;
}

// ---------------------------------------------------------------------------
// Projective vectors.

template <class K>
struct ProjVec {
    std::vector<K> v;

    ProjVec() = default;
    explicit ProjVec(std::vector<K> coords) : v(std::move(coords)) {}
    ProjVec(std::initializer_list<K> coords) : v(coords) {}

    int size() const { return static_cast<int>(v.size()); }
    K& operator[](int i) { return v[static_cast<size_t>(i)]; }
    const K& operator[](int i) const { return v[static_cast<size_t>(i)]; }

    bool is_zero() const
    {
        for (const K& x : v)
            if (!FieldTraits<K>::is_zero(x)) return false;
        return true;
    }

    ProjVec scaled(const K& s) const
    {
        ProjVec r = *this;
        for (K& x : r.v) x = x * s;
        return r;
    }

    // Exact mode: first nonzero coordinate becomes 1. Float mode: unit
    // 2-norm with the first significant coordinate positive.
    ProjVec normalized() const
    {
        if (is_zero()) throw Error(errc::invalid_input, "cannot normalize the zero vector");
        ProjVec r = *this;
        if constexpr (FieldTraits<K>::is_exact) {
            K lead = FieldTraits<K>::zero();
            for (const K& x : r.v)
                if (!FieldTraits<K>::is_zero(x)) { lead = x; break; }
            for (K& x : r.v) x = x / lead;
        } else {
            double n2 = 0.0;
            for (const K& x : r.v) n2 += FieldTraits<K>::to_double(x) * FieldTraits<K>::to_double(x);
            double inv = 1.0 / std::sqrt(n2);
            double maxmag = 0.0;
            for (const K& x : r.v) maxmag = std::max(maxmag, FieldTraits<K>::magnitude(x));
            double flip = 1.0;
            for (const K& x : r.v) {
                if (FieldTraits<K>::magnitude(x) > 1e-12 * maxmag) {
                    flip = FieldTraits<K>::to_double(x) < 0 ? -1.0 : 1.0;
                    break;
                }
            }
            for (K& x : r.v) x = x * K(inv * flip);
        }
        return r;
    }
};

template <class K>
std::vector<K> operator*(const Mat<K>& m, const ProjVec<K>& x)
{
    return m * x.v;
}

inline double sine_distance(const std::vector<double>& u, const std::vector<double>& v)
{
    double uu = 0, vv = 0, uv = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        uu += u[i] * u[i];
        vv += v[i] * v[i];
        uv += u[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) return 1.0;
    double c2 = (uv * uv) / (uu * vv);
    return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, c2)));
}

// Projective equality: all 2x2 minors of [u v] vanish (exact mode), or the
// sine of the angle between u and v is at most tol (float mode).
template <class K>
bool proj_eq(const ProjVec<K>& u, const ProjVec<K>& w, double tol = 1e-8)
{
    if (u.size() != w.size()) throw Error(errc::invalid_input, "proj_eq length mismatch");
    if constexpr (FieldTraits<K>::is_exact) {
        (void)tol;
        for (int i = 0; i < u.size(); ++i)
            for (int j = i + 1; j < u.size(); ++j)
                if (!FieldTraits<K>::is_zero(u[i] * w[j] - u[j] * w[i])) return false;
        return true;
    } else {
        std::vector<double> a(u.size()), b(u.size());
        for (int i = 0; i < u.size(); ++i) {
            a[i] = FieldTraits<K>::to_double(u[i]);
            b[i] = FieldTraits<K>::to_double(w[i]);
        }
        return sine_distance(a, b) <= tol;
    }
}

template <class K>
bool proj_eq_mat(const Mat<K>& a, const Mat<K>& b, double tol = 1e-8)
{
    ProjVec<K> u(a.data()), v(b.data());
    return proj_eq(u, v, tol);
}

template <class K>
ProjVec<K> to_proj(const std::vector<K>& v)
{
    return ProjVec<K>(v);
}

template <class To, class From>
Mat<To> convert_mat(const Mat<From>& m)
{
    Mat<To> r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = To(FieldTraits<From>::to_double(m(i, j)));
    return r;
}

template <class To, class From>
ProjVec<To> convert_vec(const ProjVec<From>& v)
{
    ProjVec<To> r;
    r.v.reserve(v.v.size());
    for (const From& x : v.v) r.v.push_back(To(FieldTraits<From>::to_double(x)));
    return r;
}

}  // namespace cmv
