#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace wpscat;

TEST_CASE("wpt_forward matches the direct quadrature sum") {
    GridSpec g = make_grid(1, 10.0, 32);
    Window w = make_gaussian_scat_window(g, 1.2);
    Field f = oracles::random_band_limited(g, 6, 31);
    PhaseSpaceField fast = wpt_forward(w, f);
    PhaseSpaceField slow = oracles::wpt_direct(w, f);
    CHECK(oracles::max_abs_diff(fast.values, slow.values) < 1e-12);
}

TEST_CASE("gaussian wave packet closed form") {
    GridSpec g = make_grid(1, 40.0, 1024);
    Field f = gaussian_packet(g, {0.0, 0.0}, {0.0, 0.0}, 1.0);
    Window w{f, true, true, std::nullopt};
    PhaseSpaceField W = wpt_forward(w, f);
    // phi = f = pi^{-1/4} e^{-y^2/2}:
    //   W(x, xi) = e^{-(x^2 + xi^2)/4} e^{-i x xi / 2}
    double err = 0.0;
    for (std::size_t xf = 0; xf < W.x_count(); ++xf) {
        const double x = W.x_at(xf)[0];
        for (std::size_t m = 0; m < W.xi_count(); ++m) {
            const double xi = W.xi_at(m)[0];
            const cd want = std::exp(-0.25 * (x * x + xi * xi)) * std::polar(1.0, -0.5 * x * xi);
            err = std::max(err, std::abs(W.values[xf * W.xi_count() + m] - want));
        }
    }
    CHECK(err < 1e-8);
}

TEST_CASE("wpt value at the origin is the window inner product") {
    GridSpec g = make_grid(1, 20.0, 256);
    Window w = make_gaussian_scat_window(g, 1.0);
    Field f = gaussian_packet(g, {1.0, 0.0}, {0.5, 0.0}, 1.3);
    PhaseSpaceField W = wpt_forward(w, f);
    const std::size_t x0 = g.points / 2; // node at x = 0
    const cd got = W.values[x0 * W.xi_count() + 0]; // DFT bin 0 is xi = 0
    CHECK(std::abs(got - inner_product(f, w.field)) < 1e-12);
}

TEST_CASE("inversion formula") {
    GridSpec g = make_grid(1, 40.0, 1024);
    Window w = make_gaussian_scat_window(g, 1.0);
    Field f = gaussian_packet(g, {2.0, 0.0}, {1.0, 0.0}, 1.0);
    Field f2 = gaussian_packet(g, {-3.0, 0.0}, {-0.5, 0.0}, 2.0);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] += cd{0.3, 0.4} * f2.values[i];
    Field rec = wpt_inverse(w, wpt_forward(w, f));
    CHECK(oracles::rel_l2_diff(rec, f) < 1e-8);

    // linearity and the zero field
    PhaseSpaceField W = wpt_forward(w, f);
    PhaseSpaceField Wc = W;
    for (cd& v : Wc.values) v *= cd{0.0, 2.0};
    Field rc = wpt_inverse(w, Wc);
    Field rl = wpt_inverse(w, W);
    for (cd& v : rl.values) v *= cd{0.0, 2.0};
    CHECK(oracles::rel_l2_diff(rc, rl) < 1e-12);

    Field zero(g);
    Field rz = wpt_inverse(w, wpt_forward(w, zero));
    CHECK(l2_norm(rz) < 1e-14);

    Window dead{Field(g), false, false, std::nullopt};
    CHECK_THROWS_AS((void)wpt_inverse(dead, W), ZeroWindow);
}

TEST_CASE("phase-space isometry carries the (2 pi)^dim constant") {
    GridSpec g = make_grid(1, 40.0, 512);
    Field f = gaussian_packet(g, {1.0, 0.0}, {2.0, 0.0}, 1.3);
    Field h = gaussian_packet(g, {-2.0, 0.0}, {0.5, 0.0}, 0.9);
    const std::pair<double, double> widths[] = {{1.0, 1.7}, {0.8, 2.2}, {1.3, 0.6}};
    for (auto [wa, wb] : widths) {
        Window phi = make_gaussian_scat_window(g, wa);
        Window psi = make_gaussian_scat_window(g, wb);
        const cd lhs = phase_inner_product(wpt_forward(phi, f), wpt_forward(psi, h));
        const cd rhs = 2.0 * pi * inner_product(psi.field, phi.field) * inner_product(f, h);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * l2_norm(f) * l2_norm(h));
    }
}

TEST_CASE("derivative intertwining") {
    // W_phi[f'](x, xi) = i xi W_phi f(x, xi) - W_{phi'} f(x, xi)
    // (signs fixed by the e^{-i y xi} convention of the transform)
    GridSpec g = make_grid(1, 30.0, 512);
    Window phi = make_gaussian_scat_window(g, 1.1);
    Window dphi{spectral_derivative(phi.field, 0), false, false, std::nullopt};
    Field f = gaussian_packet(g, {1.5, 0.0}, {0.7, 0.0}, 1.2);
    PhaseSpaceField lhs = wpt_forward(phi, spectral_derivative(f, 0));
    PhaseSpaceField Wf = wpt_forward(phi, f);
    PhaseSpaceField Wd = wpt_forward(dphi, f);
    double err = 0.0;
    for (std::size_t xf = 0; xf < Wf.x_count(); ++xf)
        for (std::size_t m = 0; m < Wf.xi_count(); ++m) {
            const double xi = Wf.xi_at(m)[0];
            const std::size_t i = xf * Wf.xi_count() + m;
            err = std::max(err,
                           std::abs(lhs.values[i] - (cd{0.0, xi} * Wf.values[i] - Wd.values[i])));
        }
    CHECK(err < 1e-7);
}

TEST_CASE("evolve_window: identity, spreading oracle, unitarity") {
    GridSpec g = make_grid(1, 40.0, 1024);
    Window w = make_gaussian_scat_window(g, 1.0);
    Window w0 = evolve_window(w, 0.0);
    CHECK(oracles::max_abs_diff(w0.field.values, w.field.values) < 1e-14);

    // free evolution of pi^{-1/4} e^{-x^2/2}:
    //   (pi)^{-1/4} (1 + i t)^{-1/2} exp(-x^2 / (2 (1 + i t)))
    const double t = 2.0;
    Window wt = evolve_window(w, t);
    double err = 0.0;
    for (std::size_t i = 0; i < wt.field.values.size(); ++i) {
        const double x = g.coord_at(i)[0];
        const cd z{1.0, t};
        const cd want = std::pow(pi, -0.25) / std::sqrt(z) * std::exp(-x * x / (2.0 * z));
        err = std::max(err, std::abs(wt.field.values[i] - want));
    }
    CHECK(err < 1e-9);
    CHECK(std::abs(l2_norm(wt.field) - l2_norm(w.field)) < 1e-12);

    Window band = make_fourier_annulus_window(g, 0.5, 1.0);
    Window band_t = evolve_window(band, 5.0);
    REQUIRE(band_t.band.has_value());
    CHECK(band_leakage(band_t.field, band.band->first, band.band->second) < 1e-8);
}

TEST_CASE("window factories") {
    GridSpec g = make_grid(1, 40.0, 1024);
    Window gw = make_gaussian_scat_window(g, 1.0);
    CHECK(std::abs(gw.norm() - 1.0) < 1e-10);
    CHECK(gw.nonzero_mean);
    const cd mean = fourier_forward(gw.field).values[0]; // bin 0 is xi = 0
    CHECK(std::abs(mean) > 1e-6);

    Window aw = make_fourier_annulus_window(g, 0.5, 1.0);
    CHECK(std::abs(aw.norm() - 1.0) < 1e-10);
    CHECK_FALSE(aw.nonzero_mean);
    CHECK(band_leakage(aw.field, 0.5, 1.0) < 1e-8);

    CHECK_THROWS_AS((void)make_fourier_annulus_window(g, 1.0, 0.5), BadBand);
    CHECK_THROWS_AS((void)make_fourier_annulus_window(g, 0.0, 0.5), BadBand);
}

TEST_CASE("sigma norms") {
    GridSpec g = make_grid(1, 30.0, 512);
    Field f = gaussian_packet(g, {0.0, 0.0}, {0.0, 0.0}, 1.0);
    CHECK(sigma_norm(f, 0) == doctest::Approx(1.0).epsilon(1e-10));
    // ||x f|| + ||f'|| = 1/sqrt(2) + 1/sqrt(2) = sqrt(2)
    CHECK(sigma_norm(f, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    Field zero(g);
    CHECK(sigma_norm(zero, 2) == 0.0);
    CHECK_THROWS_AS((void)sigma_norm(f, 4), UnsupportedOrder);
    CHECK_THROWS_AS((void)sigma_norm(f, -1), UnsupportedOrder);
}
