#pragma once

#include "wpt.hpp"

namespace wpscat {

enum class RegionVariant { GammaAR, GammaConeOut, KaN, TildeGamma, XiD, XiDR };

// Phase-space regions with closed boundary conditions (nodes exactly on a
// boundary are members):
//   GammaAR(a, R)             : |xi| <= a  or  |x| >= R
//   GammaConeOut(a, b, sign)  : |xi| >= a and |x| >= b and sign*(x.xi) >= 0
//   KaN(a, N)                 : |xi| <= a  or  |x| <= N
//   TildeGamma(a, sigma, sign): |xi| <= a  or  -sign*cos(x,xi) >= sigma; dim >= 2
//   XiD(d)                    : |xi| <= d
//   XiDR(d, r)                : |xi| > d and |x| <= r
struct RegionSpec {
    RegionVariant variant = RegionVariant::GammaAR;
    double a = 0.0;      // momentum threshold (GammaAR/ConeOut/KaN/TildeGamma)
    double b = 0.0;      // GammaAR R / ConeOut b / KaN N / XiDR r
    double sigma = 1.0;  // TildeGamma aperture, in (0, 1]
    int sign = +1;       // outgoing (+) or incoming (-) half

    static RegionSpec gamma_ar(double a, double R) {
        return {RegionVariant::GammaAR, a, R, 1.0, +1};
    }
    static RegionSpec cone_out(double a, double b, int sign) {
        return {RegionVariant::GammaConeOut, a, b, 1.0, sign};
    }
    static RegionSpec kan(double a, double N) {
        return {RegionVariant::KaN, a, N, 1.0, +1};
    }
    static RegionSpec tilde_gamma(double a, double sigma, int sign) {
        return {RegionVariant::TildeGamma, a, 0.0, sigma, sign};
    }
    static RegionSpec xi_d(double d) { return {RegionVariant::XiD, d, 0.0, 1.0, +1}; }
    static RegionSpec xi_dr(double d, double r) {
        return {RegionVariant::XiDR, d, r, 1.0, +1};
    }
};

inline const char* region_name(RegionVariant v) {
    switch (v) {
        case RegionVariant::GammaAR: return "gamma_ar";
        case RegionVariant::GammaConeOut: return "cone_out";
        case RegionVariant::KaN: return "kan";
        case RegionVariant::TildeGamma: return "tilde_gamma";
        case RegionVariant::XiD: return "xi_d";
        case RegionVariant::XiDR: return "xi_dr";
    }
    return "?";
}

inline bool region_contains(const RegionSpec& r, std::array<double, 2> x,
                            std::array<double, 2> xi, int dim) {
    const double xn = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
    const double kn = dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
    const double dot = x[0] * xi[0] + x[1] * xi[1];
    switch (r.variant) {
        case RegionVariant::GammaAR:
            return kn <= r.a || xn >= r.b;
        case RegionVariant::GammaConeOut:
            return kn >= r.a && xn >= r.b && r.sign * dot >= 0.0;
        case RegionVariant::KaN:
            return kn <= r.a || xn <= r.b;
        case RegionVariant::TildeGamma:
            if (kn <= r.a) return true;
            // cos(theta) undefined at x = 0; only the |xi| <= a clause applies
            if (xn == 0.0) return false;
            return -r.sign * dot / (xn * kn) >= r.sigma;
        case RegionVariant::XiD:
            return kn <= r.a;
        case RegionVariant::XiDR:
            return kn > r.a && xn <= r.b;
    }
    return false;
}

// 0/1 indicator on the phase grid of a PhaseSpaceField.
struct Mask {
    RegionSpec region;
    GridSpec grid;
    int x_stride = 1;
    std::vector<unsigned char> indicator;
};

inline Mask build_mask(const RegionSpec& r, const GridSpec& g, int x_stride = 1) {
    if (r.variant == RegionVariant::TildeGamma && g.dim < 2)
        throw DimMismatch("tilde-gamma cone regions require dim >= 2");
    if (r.variant == RegionVariant::TildeGamma && !(r.sigma > 0.0 && r.sigma <= 1.0))
        throw DimMismatch("tilde-gamma aperture must lie in (0, 1]");
    PhaseSpaceField shape;
    shape.grid = g;
    shape.x_stride = x_stride;
    Mask m{r, g, x_stride, {}};
    m.indicator.resize(shape.x_count() * shape.xi_count());
    for (std::size_t xf = 0; xf < shape.x_count(); ++xf) {
        const auto x = shape.x_at(xf);
        for (std::size_t mf = 0; mf < shape.xi_count(); ++mf)
            m.indicator[xf * shape.xi_count() + mf] =
                region_contains(r, x, g.freq_at(mf), g.dim) ? 1 : 0;
    }
    return m;
}

inline Mask mask_complement(const Mask& m) {
    Mask out = m;
    for (auto& v : out.indicator) v = v ? 0 : 1;
    return out;
}

// L^2 phase-space norm of F restricted to the masked region.
inline double masked_norm(const PhaseSpaceField& F, const Mask& m) {
    if (!(F.grid == m.grid) || F.x_stride != m.x_stride)
        throw GridMismatch("mask and phase-space field live on different grids");
    if (F.values.size() != m.indicator.size())
        throw GridMismatch("mask size does not match the phase-space field");
    double acc = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i)
        if (m.indicator[i]) acc += std::norm(F.values[i]);
    return std::sqrt(acc * F.cell_weight());
}

} // namespace wpscat
