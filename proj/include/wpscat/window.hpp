#pragma once

#include <optional>

#include "spectral.hpp"

namespace wpscat {

// Smoothstep-squared radial bump on (lo, hi): zero at both edges, one at the
// midpoint.  Used to build band-limited annulus windows directly in
// frequency space.
inline double annulus_profile(double r, double lo, double hi) {
    if (r <= lo || r >= hi) return 0.0;
    const double u = (r - lo) / (hi - lo);
    const double v = u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
    const double s = v * v * (3.0 - 2.0 * v);
    return s * s;
}

struct Window {
    Field field;
    bool normalized = false;
    bool nonzero_mean = false;
    std::optional<std::pair<double, double>> band; // Fourier annulus support

    double norm() const { return l2_norm(field); }
};

// Fourier mass outside the annulus {lo < |xi| < hi}, as a fraction of total.
inline double band_leakage(const Field& f, double lo, double hi) {
    Field F = fourier_forward(f);
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = F.grid.freq_at(i);
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        const double m = std::norm(F.values[i]);
        total += m;
        if (r > lo && r < hi) inside += m;
    }
    return total > 0.0 ? (total - inside) / total : 0.0;
}

inline Window make_gaussian_scat_window(const GridSpec& g, double width = 1.0) {
    Field f = gaussian_packet(g, {0.0, 0.0}, {0.0, 0.0}, width);
    const double n = l2_norm(f);
    for (cd& v : f.values) v /= n;
    Window w{std::move(f), true, true, std::nullopt};
    return w;
}

inline Window make_fourier_annulus_window(const GridSpec& g, double band_lo, double band_hi) {
    if (!(0.0 < band_lo && band_lo < band_hi))
        throw BadBand("annulus window requires 0 < L_low < L_high");
    Field F(g);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = g.freq_at(i);
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        F.values[i] = annulus_profile(r, band_lo, band_hi);
    }
    Field f = fourier_inverse(F);
    const double n = l2_norm(f);
    if (!(n > 0.0))
        throw BadBand("annulus band contains no frequency samples on this grid");
    for (cd& v : f.values) v /= n;
    Window w{std::move(f), true, false, std::make_pair(band_lo, band_hi)};
    return w;
}

// Free evolution of the wave packet; a unitary Fourier multiplier, so the
// norm and the Fourier support metadata carry over unchanged.
inline Window evolve_window(const Window& w, double t) {
    Window out = w;
    out.field = free_propagate(w.field, t);
    return out;
}

namespace detail {
// all dim-variate multi-index pairs (alpha, beta) with |alpha|+|beta| = l
inline void sigma_terms(int dim, int l,
                        std::vector<std::array<std::array<int, 2>, 2>>& out) {
    auto split = [dim](int total, std::vector<std::array<int, 2>>& res) {
        res.clear();
        if (dim == 1) {
            res.push_back({total, 0});
        } else {
            for (int a = 0; a <= total; ++a) res.push_back({a, total - a});
        }
    };
    std::vector<std::array<int, 2>> alphas, betas;
    for (int da = 0; da <= l; ++da) {
        split(da, alphas);
        std::vector<std::array<int, 2>> a_copy = alphas;
        split(l - da, betas);
        for (const auto& a : a_copy)
            for (const auto& b : betas) out.push_back({a, b});
    }
}
} // namespace detail

// ||f||_{Sigma(l)} = sum over |alpha+beta|=l of ||x^beta d^alpha f||.
inline double sigma_norm(const Field& f, int l) {
    if (l < 0 || l > 3) throw UnsupportedOrder("sigma_norm supports l in {0,1,2,3}");
    if (l == 0) return l2_norm(f);
    std::vector<std::array<std::array<int, 2>, 2>> terms;
    detail::sigma_terms(f.grid.dim, l, terms);
    double acc = 0.0;
    for (const auto& t : terms) {
        Field g = f;
        for (int axis = 0; axis < f.grid.dim; ++axis)
            for (int k = 0; k < t[0][axis]; ++k) g = spectral_derivative(g, axis);
        for (int axis = 0; axis < f.grid.dim; ++axis)
            for (int k = 0; k < t[1][axis]; ++k) g = multiply_coordinate(g, axis);
        acc += l2_norm(g);
    }
    return acc;
}

} // namespace wpscat
