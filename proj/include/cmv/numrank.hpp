#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cmv/linalg.hpp"

namespace cmv {

inline Eigen::MatrixXd to_eigen(const Mat<double>& m)
{
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Mat<double> from_eigen(const Eigen::MatrixXd& e)
{
    Mat<double> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

inline std::vector<double> singular_values(const Mat<double>& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

// Numerical rank: sigma_i counts as nonzero iff sigma_i / sigma_1 > tol.
// The 1e-8 default separates this paper's structured rank drops, which are
// exact, from float noise.
inline int numerical_rank(const Mat<double>& m, double tol = 1e-8)
{
    if (m.empty()) throw Error(errc::invalid_input, "rank of empty matrix");
    std::vector<double> s = singular_values(m);
    if (s.empty() || s[0] == 0.0) return 0;
    int r = 0;
    for (double x : s)
        if (x / s[0] > tol) ++r;
    return r;
}

// Float-mode kernel basis from the right singular vectors.
inline std::vector<std::vector<double>> numerical_kernel(const Mat<double>& m, double tol = 1e-8)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    std::vector<std::vector<double>> out;
    for (int j = 0; j < svd.matrixV().cols(); ++j) {
        bool null = j >= s.size() || (smax == 0.0) || (s(j) / smax <= tol);
        if (!null) continue;
        std::vector<double> v(m.cols());
        for (int i = 0; i < m.cols(); ++i) v[i] = svd.matrixV()(i, j);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace cmv
