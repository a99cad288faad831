#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

namespace cmv {

// Roots of sum_k coeffs[k] x^k (ascending powers) via the companion matrix.
inline std::vector<std::complex<double>> poly_roots(std::vector<double> coeffs)
{
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) return {};
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) c(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

inline std::vector<double> real_poly_roots(const std::vector<double>& coeffs,
                                           double imag_tol = 1e-9)
{
    std::vector<double> out;
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::fabs(c));
    for (const auto& r : poly_roots(coeffs))
        if (std::fabs(r.imag()) <= imag_tol * std::max(1.0, std::fabs(r.real())))
            out.push_back(r.real());
    (void)scale;
    return out;
}

}  // namespace cmv
