#pragma once

#include "cmv/triangulation.hpp"

namespace cmv {

struct DimProbeResult {
    int rank = 0;
    int expected = 0;
    double gap = 0.0;  // sigma_r / sigma_{r+1}, +inf when nothing is discarded
    std::vector<double> singular_values;
};

inline int expected_multiview_dimension(ModelKind kind, int degree)
{
    if (kind == ModelKind::TwistedCubic) return 12;
    return (degree * degree + 3 * degree) / 2 + 3;
}

// Jacobian rank of the chart-composed joint projection at a random interior
// point, taken over the full homogeneous parameters so the projective
// scaling directions show up as discarded singular values.
inline DimProbeResult dim_probe(const Arrangement<double>& arr, ModelKind kind, int degree,
                                std::uint64_t seed, double rank_tol = 1e-8)
{
    int curve_len = static_cast<int>(MonomialOrder::get(degree, 3).size());
    int n_par = (kind == ModelKind::TwistedCubic) ? 13 : 4 + curve_len;
    if (n_par > kMaxDualVars) throw Error(errc::invalid_input, "too many parameters");
    Rng rng(seed);

    auto image_charts = [&](const std::vector<Dual>& p) {
        std::vector<Dual> out;
        for (const auto& cam : arr.cameras) {
            std::vector<Dual> g;
            if (kind == ModelKind::TwistedCubic) {
                TwistedCubicParam<Dual> t;
                t.m.v = p;
                ChowForm<Dual> beta = iota_tw(t);
                Mat<Dual> chat(6, 3);
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 3; ++j) chat(i, j) = Dual(cam.chat(i, j));
                g = veronese_matrix(3, chat).transpose() * beta.coeffs.v;
            } else {
                Mat<Dual> cm(3, 4);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 4; ++j) cm(i, j) = Dual(cam.matrix(i, j));
                ProjVec<Dual> h{p[0], p[1], p[2], p[3]};
                std::vector<Dual> alpha(p.begin() + 4, p.end());
                const Dual z(0.0);
                Mat<Dual> hm(4, 3, {-h[1], -h[2], -h[3], h[0], z, z, z, h[0], z, z, z, h[0]});
                Mat<Dual> nu = veronese_matrix(degree, cm * hm);
                Dual d = det(nu);
                if (std::fabs(d.v) < 1e-12) throw Error(errc::chart_degenerate, "retry");
                g = inverse(nu).scaled(d).transpose() * alpha;
            }
            double scale = 0;
            for (const Dual& x : g) scale = std::max(scale, std::fabs(x.v));
            if (std::fabs(g[0].v) < 1e-6 * scale) throw Error(errc::chart_degenerate, "retry");
            Dual inv = Dual(1.0) / g[0];
            for (size_t i = 1; i < g.size(); ++i) out.push_back(g[i] * inv);
        }
        return out;
    };

    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Dual> p(n_par);
        for (int i = 0; i < n_par; ++i) p[i] = Dual::variable(rng.normal(), i);
        std::vector<Dual> img;
        try {
            img = image_charts(p);
        } catch (const Error&) {
            continue;
        }
        Mat<double> j(static_cast<int>(img.size()), n_par);
        for (int r = 0; r < j.rows(); ++r)
            for (int c = 0; c < n_par; ++c) j(r, c) = img[r].g[c];
        DimProbeResult res;
        res.expected = expected_multiview_dimension(kind, degree);
        res.singular_values = singular_values(j);
        res.rank = numerical_rank(j, rank_tol);
        const auto& s = res.singular_values;
        if (res.rank < static_cast<int>(s.size()) && s[res.rank] > 0)
            res.gap = s[res.rank - 1] / s[res.rank];
        else
            res.gap = std::numeric_limits<double>::infinity();
        return res;
    }
    throw Error(errc::chart_degenerate, "no interior probe point found");
}

}  // namespace cmv
