#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"

namespace wpscat {

using cd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Uniform periodic grid on [-L, L)^dim.  Nodes x_k = -L + k*h, frequency
// samples xi_j = (pi/L)*j for j in {-N/2, ..., N/2-1} per axis.
struct GridSpec {
    int dim = 1;
    double half_width = 0.0; // L
    int points = 0;          // N per axis, power of two
    double spacing = 0.0;    // h = 2L/N
    double freq_step = 0.0;  // pi/L

    std::size_t size() const {
        std::size_t s = static_cast<std::size_t>(points);
        return dim == 1 ? s : s * s;
    }
    double coord(int k) const { return -half_width + spacing * k; }
    // signed frequency index of DFT bin j in [0, N)
    int freq_index(int j) const { return j < points / 2 ? j : j - points; }
    double freq(int j) const { return freq_step * freq_index(j); }

    // decompose a flat index into per-axis bin indices
    std::array<int, 2> unflatten(std::size_t idx) const {
        if (dim == 1) return {static_cast<int>(idx), 0};
        return {static_cast<int>(idx / points), static_cast<int>(idx % points)};
    }
    std::size_t flatten(int k0, int k1) const {
        return dim == 1 ? static_cast<std::size_t>(k0)
                        : static_cast<std::size_t>(k0) * points + k1;
    }
    std::array<double, 2> coord_at(std::size_t idx) const {
        auto k = unflatten(idx);
        return {coord(k[0]), dim == 2 ? coord(k[1]) : 0.0};
    }
    std::array<double, 2> freq_at(std::size_t idx) const {
        auto k = unflatten(idx);
        return {freq(k[0]), dim == 2 ? freq(k[1]) : 0.0};
    }
    double cell_weight() const { return dim == 1 ? spacing : spacing * spacing; }
    double freq_weight() const { return dim == 1 ? freq_step : freq_step * freq_step; }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && points == o.points && half_width == o.half_width;
    }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline GridSpec make_grid(int dim, double half_width, int points) {
    if (dim != 1 && dim != 2) throw UnsupportedDim("grid dim must be 1 or 2");
    if (!(half_width > 0.0)) throw NonPositiveExtent("grid half_width must be positive");
    if (points < 16 || !is_power_of_two(points))
        throw NonPowerOfTwo("grid points must be a power of two >= 16");
    GridSpec g;
    g.dim = dim;
    g.half_width = half_width;
    g.points = points;
    g.spacing = 2.0 * half_width / points;
    g.freq_step = pi / half_width;
    return g;
}

struct Field {
    GridSpec grid;
    std::vector<cd> values;

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), values(g.size(), cd{0.0, 0.0}) {}
    Field(const GridSpec& g, std::vector<cd> v) : grid(g), values(std::move(v)) {}
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw GridMismatch("fields live on different grids");
}

// (f,g) = h^dim * sum f * conj(g), the L^2 inner product quadrature.
inline cd inner_product(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid);
    cd acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc += f.values[i] * std::conj(g.values[i]);
    return acc * f.grid.cell_weight();
}

inline double l2_norm(const Field& f) {
    double acc = 0.0;
    for (const cd& v : f.values) acc += std::norm(v);
    return std::sqrt(acc * f.grid.cell_weight());
}

// Continuum-normalized transforms: fourier_forward approximates
// int e^{-i x xi} f(x) dx on the frequency grid (stored in DFT bin order),
// fourier_inverse is its exact discrete inverse.
inline Field fourier_forward(const Field& f) {
    const GridSpec& g = f.grid;
    Field out(g, f.values);
    fft::transform_nd(out.values, g.dim, g.points, -1);
    const double w = g.cell_weight();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        auto k = g.unflatten(i);
        const int parity = (k[0] + (g.dim == 2 ? k[1] : 0)) & 1;
        out.values[i] *= parity ? -w : w;
    }
    return out;
}

inline Field fourier_inverse(const Field& F) {
    const GridSpec& g = F.grid;
    Field out(g, F.values);
    const double w = 1.0 / g.cell_weight();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        auto k = g.unflatten(i);
        const int parity = (k[0] + (g.dim == 2 ? k[1] : 0)) & 1;
        out.values[i] *= parity ? -1.0 : 1.0;
    }
    fft::transform_nd(out.values, g.dim, g.points, +1);
    for (cd& v : out.values) v *= w;
    return out;
}

// Relative L^2 mass in the outermost `cells` grid cells per axis; experiments
// use this to assert that nothing reached the periodic boundary.
inline double boundary_mass(const Field& f, int cells = 4) {
    const GridSpec& g = f.grid;
    double edge = 0.0, total = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto k = g.unflatten(i);
        bool on_edge = k[0] < cells || k[0] >= g.points - cells;
        if (g.dim == 2) on_edge = on_edge || k[1] < cells || k[1] >= g.points - cells;
        const double m = std::norm(f.values[i]);
        total += m;
        if (on_edge) edge += m;
    }
    return total > 0.0 ? edge / total : 0.0;
}

// Normalized Gaussian packet (pi w^2)^{-1/4} e^{-(x-x0)^2/(2 w^2)} e^{i p.x}
// per axis; the workhorse initial state.
inline Field gaussian_packet(const GridSpec& g, std::array<double, 2> center,
                             std::array<double, 2> momentum, double width = 1.0) {
    Field f(g);
    const double amp1 = std::pow(pi * width * width, -0.25);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto x = g.coord_at(i);
        double q = 0.0, phase = 0.0, a = 1.0;
        for (int d = 0; d < g.dim; ++d) {
            const double z = x[d] - center[d];
            q += z * z / (2.0 * width * width);
            phase += momentum[d] * x[d];
            a *= amp1;
        }
        f.values[i] = a * std::exp(-q) * std::polar(1.0, phase);
    }
    return f;
}

} // namespace wpscat
