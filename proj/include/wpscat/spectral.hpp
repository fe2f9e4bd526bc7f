#pragma once

#include "grid.hpp"

namespace wpscat {

// e^{-i t |xi|^2 / 2} applied in frequency space; exact (to round-off)
// unitary free evolution under H0 = -(1/2) Laplacian.
inline Field free_propagate(const Field& f, double t) {
    Field F = fourier_forward(f);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = F.grid.freq_at(i);
        const double k2 = xi[0] * xi[0] + xi[1] * xi[1];
        F.values[i] *= std::polar(1.0, -0.5 * t * k2);
    }
    return fourier_inverse(F);
}

inline Field spectral_derivative(const Field& f, int axis) {
    Field F = fourier_forward(f);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = F.grid.freq_at(i);
        F.values[i] *= cd{0.0, xi[axis]};
    }
    return fourier_inverse(F);
}

inline Field multiply_coordinate(const Field& f, int axis) {
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= out.grid.coord_at(i)[axis];
    return out;
}

// H0 f = -(1/2) Laplacian f, evaluated spectrally.
inline Field apply_kinetic(const Field& f) {
    Field F = fourier_forward(f);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = F.grid.freq_at(i);
        F.values[i] *= 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]);
    }
    return fourier_inverse(F);
}

} // namespace wpscat
