#pragma once

#include "window.hpp"

namespace wpscat {

// Samples of W_phi f on the (x, xi) product grid.  x rows may be a strided
// subsample of the spatial grid (diagnostics need masked norms, not full x
// resolution); xi always runs over the full frequency grid in DFT bin order.
// Layout: values[x_flat * xi_count + xi_flat].
struct PhaseSpaceField {
    GridSpec grid;
    int x_stride = 1;
    std::vector<cd> values;

    int x_points() const { return grid.points / x_stride; }
    std::size_t x_count() const {
        std::size_t n = static_cast<std::size_t>(x_points());
        return grid.dim == 1 ? n : n * n;
    }
    std::size_t xi_count() const { return grid.size(); }

    std::array<double, 2> x_at(std::size_t xf) const {
        if (grid.dim == 1) return {grid.coord(static_cast<int>(xf) * x_stride), 0.0};
        const int n = x_points();
        const int k0 = static_cast<int>(xf) / n, k1 = static_cast<int>(xf) % n;
        return {grid.coord(k0 * x_stride), grid.coord(k1 * x_stride)};
    }
    std::array<double, 2> xi_at(std::size_t mf) const { return grid.freq_at(mf); }

    // quadrature weight of one (x, xi) cell
    double cell_weight() const {
        double w = grid.cell_weight() * grid.freq_weight();
        for (int d = 0; d < grid.dim; ++d) w *= x_stride;
        return w;
    }
};

inline double phase_norm(const PhaseSpaceField& F) {
    double acc = 0.0;
    for (const cd& v : F.values) acc += std::norm(v);
    return std::sqrt(acc * F.cell_weight());
}

inline cd phase_inner_product(const PhaseSpaceField& F, const PhaseSpaceField& G) {
    if (!(F.grid == G.grid) || F.x_stride != G.x_stride)
        throw GridMismatch("phase-space fields live on different grids");
    cd acc{0.0, 0.0};
    for (std::size_t i = 0; i < F.values.size(); ++i)
        acc += F.values[i] * std::conj(G.values[i]);
    return acc * F.cell_weight();
}

namespace detail {
// periodic sample of phi(x_k - x_r): node index (k - r + N/2) mod N per axis
inline std::size_t shifted_index(const GridSpec& g, std::size_t k_flat, int r0, int r1) {
    const int n = g.points;
    auto k = g.unflatten(k_flat);
    const int s0 = ((k[0] - r0 + n / 2) % n + n) % n;
    if (g.dim == 1) return static_cast<std::size_t>(s0);
    const int s1 = ((k[1] - r1 + n / 2) % n + n) % n;
    return static_cast<std::size_t>(s0) * n + s1;
}
} // namespace detail

// W_phi f(x, xi) = int conj(phi(y-x)) f(y) e^{-i y xi} dy, evaluated for each
// retained x node as a forward Fourier transform in y.
inline PhaseSpaceField wpt_forward(const Window& window, const Field& f, int x_stride = 1) {
    require_same_grid(window.field.grid, f.grid);
    const GridSpec& g = f.grid;
    if (x_stride < 1 || g.points % x_stride != 0)
        throw GridMismatch("x_stride must be a positive divisor of the grid size");

    PhaseSpaceField F;
    F.grid = g;
    F.x_stride = x_stride;
    F.values.resize(F.x_count() * F.xi_count());

    const int nx = F.x_points();
    Field row(g);
    for (std::size_t xf = 0; xf < F.x_count(); ++xf) {
        const int r0 = (g.dim == 1 ? static_cast<int>(xf) : static_cast<int>(xf) / nx) * x_stride;
        const int r1 = (g.dim == 1 ? 0 : static_cast<int>(xf) % nx) * x_stride;
        for (std::size_t k = 0; k < g.size(); ++k)
            row.values[k] =
                std::conj(window.field.values[detail::shifted_index(g, k, r0, r1)]) * f.values[k];
        Field spec = fourier_forward(row);
        std::copy(spec.values.begin(), spec.values.end(), F.values.begin() + xf * F.xi_count());
    }
    return F;
}

// W_phi^{-1} F(x) = 1/((2 pi)^n ||phi||^2) * double integral of
// phi(x-y) F(y, xi) e^{i x xi}.  Exact inverse of wpt_forward at stride 1.
inline Field wpt_inverse(const Window& window, const PhaseSpaceField& F) {
    const GridSpec& g = F.grid;
    require_same_grid(window.field.grid, g);
    const double wn = l2_norm(window.field);
    if (!(wn > 0.0)) throw ZeroWindow("wpt_inverse requires a nonzero window");

    // xi integral per x row first
    std::vector<Field> rows(F.x_count());
    for (std::size_t xf = 0; xf < F.x_count(); ++xf) {
        Field spec(g);
        std::copy(F.values.begin() + xf * F.xi_count(),
                  F.values.begin() + (xf + 1) * F.xi_count(), spec.values.begin());
        rows[xf] = fourier_inverse(spec);
    }

    double ycell = g.cell_weight();
    for (int d = 0; d < g.dim; ++d) ycell *= F.x_stride;
    const double scale = ycell / (wn * wn);

    Field out(g);
    const int nx = F.x_points();
    for (std::size_t xf = 0; xf < F.x_count(); ++xf) {
        const int r0 = (g.dim == 1 ? static_cast<int>(xf) : static_cast<int>(xf) / nx) * F.x_stride;
        const int r1 = (g.dim == 1 ? 0 : static_cast<int>(xf) % nx) * F.x_stride;
        for (std::size_t k = 0; k < g.size(); ++k) {
            // phi(x_k - y_r) via the same periodic shift
            const cd ph = window.field.values[detail::shifted_index(g, k, r0, r1)];
            out.values[k] += scale * ph * rows[xf].values[k];
        }
    }
    return out;
}

// W_phi f evaluated at the sheared arguments (x + shear*xi, xi).  Computed
// per xi column: the column's x-dependence is a trigonometric polynomial, so
// the rigid translation by shear*xi is done exactly in Fourier space.
//
// Columns carrying more than `mass_tol` of the total phase-space mass must
// not be displaced by more than max_wraps periodic cells, otherwise the
// periodic wrap would relocate physical mass and ShearOutOfDomain is thrown.
inline PhaseSpaceField sheared_wpt(const Window& window, const Field& f, double shear,
                                   int x_stride = 1, double max_wraps = 2.0,
                                   double mass_tol = 1e-6) {
    require_same_grid(window.field.grid, f.grid);
    const GridSpec& g = f.grid;
    if (x_stride < 1 || g.points % x_stride != 0)
        throw GridMismatch("x_stride must be a positive divisor of the grid size");

    const Field Fhat = fourier_forward(f);
    const Field Phat = fourier_forward(window.field);

    double fh2 = 0.0, ph2 = 0.0;
    for (const cd& v : Fhat.values) fh2 += std::norm(v);
    for (const cd& v : Phat.values) ph2 += std::norm(v);
    const double total_mass = fh2 * ph2;

    PhaseSpaceField out;
    out.grid = g;
    out.x_stride = x_stride;
    out.values.resize(out.x_count() * out.xi_count());

    const int n = g.points;
    const int nx = out.x_points();
    Field col(g);
    for (std::size_t mf = 0; mf < g.size(); ++mf) {
        const auto m = g.unflatten(mf);
        const auto xi = g.freq_at(mf);

        // A_j = conj(Phat_j) * Fhat_{j+m}, aliased per axis
        double col_mass = 0.0;
        for (std::size_t jf = 0; jf < g.size(); ++jf) {
            const auto j = g.unflatten(jf);
            const int s0 = (j[0] + m[0]) % n;
            const std::size_t sf = g.dim == 1
                                       ? static_cast<std::size_t>(s0)
                                       : static_cast<std::size_t>(s0) * n + (j[1] + m[1]) % n;
            col.values[jf] = std::conj(Phat.values[jf]) * Fhat.values[sf];
            col_mass += std::norm(col.values[jf]);
        }

        const double d0 = shear * xi[0], d1 = shear * xi[1];
        if (total_mass > 0.0 && col_mass / total_mass > mass_tol) {
            const double disp = std::max(std::abs(d0), std::abs(d1));
            if (disp > max_wraps * 2.0 * g.half_width)
                throw ShearOutOfDomain("sheared evaluation points wrap the periodic cell");
        }

        if (shear != 0.0) {
            for (std::size_t jf = 0; jf < g.size(); ++jf) {
                const auto k = g.freq_at(jf);
                col.values[jf] *= std::polar(1.0, k[0] * d0 + k[1] * d1);
            }
        }
        Field xcol = fourier_inverse(col);

        // scatter the strided x samples into the output
        if (g.dim == 1) {
            for (int r = 0; r < nx; ++r)
                out.values[static_cast<std::size_t>(r) * out.xi_count() + mf] =
                    xcol.values[static_cast<std::size_t>(r) * x_stride];
        } else {
            for (int r0 = 0; r0 < nx; ++r0)
                for (int r1 = 0; r1 < nx; ++r1)
                    out.values[(static_cast<std::size_t>(r0) * nx + r1) * out.xi_count() + mf] =
                        xcol.values[static_cast<std::size_t>(r0 * x_stride) * n + r1 * x_stride];
        }
    }
    return out;
}

} // namespace wpscat
