#pragma once

#include <algorithm>
#include <utility>

#include "dynamics.hpp"
#include "fit.hpp"
#include "regions.hpp"

namespace wpscat {

inline Field apply_potential(const Field& f, const PotentialSpec& v, double t) {
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= potential_eval(v, t, out.grid.coord_at(i), out.grid.dim);
    return out;
}

// H f = H0 f + V(t) f for the residual checks and Rayleigh quotients.
inline Field apply_hamiltonian(const Field& f, const PotentialSpec& v, double t = 0.0) {
    Field out = apply_kinetic(f);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] += potential_eval(v, t, f.grid.coord_at(i), f.grid.dim) * f.values[i];
    return out;
}

namespace detail {
// fraction of the state's Fourier mass at |xi| <= gap ("band-limited away
// from xi = 0"); window smearing would blur a few percent of phase-space
// mass into the gap even for admissible states, so this is measured on the
// spectrum itself
inline double relative_low_frequency_mass(const Field& f, double gap) {
    Field F = fourier_forward(f);
    double low = 0.0, total = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = F.grid.freq_at(i);
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        const double m = std::norm(F.values[i]);
        total += m;
        if (r <= gap) low += m;
    }
    return total > 0.0 ? std::sqrt(low / total) : 0.0;
}

inline double l2_difference(const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(acc * a.grid.cell_weight());
}
} // namespace detail

struct CookResult {
    Field limit;
    ConvergenceTable table;
};

// Cook-limit approximant of the wave operator at reference time tau:
// A(T) = U(tau, tau + sign*T) e^{-i(sign*T) H0} u0, evaluated over an
// increasing horizon ladder with the Cauchy-difference table.
inline CookResult cook_wave_operator(const Field& u0, double tau, const PotentialSpec& v,
                                     const Window& phi, const std::vector<double>& horizons,
                                     int sign, const PropagatorConfig& cfg,
                                     const VerdictThresholds& th = {},
                                     double spectral_gap = 0.1) {
    if (detail::relative_low_frequency_mass(u0, spectral_gap) > 1e-3)
        throw LowFrequencyMass("initial state carries phase-space mass at zero momentum");

    CookResult res;
    res.table.horizons = horizons;
    Field prev;
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        const double t = tau + sign * horizons[k];
        Field a = free_propagate(u0, t - tau);
        a = evolve_full(a, t, tau, v, cfg);
        if (k > 0) res.table.differences.push_back(detail::l2_difference(a, prev));
        prev = std::move(a);
    }
    res.limit = std::move(prev);
    res.table.fit_tail();
    if (!res.table.converged(l2_norm(u0), th))
        throw NotCauchy("wave-operator horizon ladder is not Cauchy");
    return res;
}

// Inverse limit e^{i T H0} U(T, 0) u0 over the horizon ladder; the interacting
// evolution is advanced incrementally between horizons.
inline CookResult inverse_wave_limit(const Field& u0, const PotentialSpec& v,
                                     const std::vector<double>& horizons,
                                     const PropagatorConfig& cfg,
                                     const VerdictThresholds& th = {}) {
    CookResult res;
    res.table.horizons = horizons;
    Field u = u0;
    double t_prev = 0.0;
    Field prev;
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        u = evolve_full(u, t_prev, horizons[k], v, cfg);
        t_prev = horizons[k];
        Field b = free_propagate(u, -horizons[k]);
        if (k > 0) res.table.differences.push_back(detail::l2_difference(b, prev));
        prev = std::move(b);
    }
    res.limit = std::move(prev);
    res.table.fit_tail();
    if (!res.table.converged(l2_norm(u0), th))
        throw NotCauchy("inverse-limit horizon ladder is not Cauchy");
    return res;
}

namespace detail {
inline bool sheared_region(RegionVariant v) {
    return v == RegionVariant::GammaAR || v == RegionVariant::GammaConeOut ||
           v == RegionVariant::TildeGamma;
}
inline void require_scat_window(const Window& phi) {
    if (!phi.normalized || !phi.nonzero_mean)
        throw ConfigInvalid("diagnostic window must be normalized with nonzero mean");
}
} // namespace detail

// Masked-norm series of the phase-space content of U(t, tau) f inside each
// region.  For Gamma-type regions the transform is sheared by t - tau with
// the window freely evolved to t - tau; K/Xi variants use the static window
// without shear.  All regions share one transform per time step.
inline std::vector<DiagnosticSeries> scat_diagnostic_battery(
    const Field& f, double tau, const PotentialSpec& v, const Window& phi,
    const std::vector<RegionSpec>& regions, const std::vector<double>& times,
    const PropagatorConfig& cfg, int x_stride = 4, const VerdictThresholds& th = {}) {
    detail::require_scat_window(phi);
    if (regions.empty() || times.empty())
        throw ConfigInvalid("diagnostic requires at least one region and one time");
    const bool sheared = detail::sheared_region(regions.front().variant);
    for (const RegionSpec& r : regions)
        if (detail::sheared_region(r.variant) != sheared)
            throw ConfigInvalid("a diagnostic battery cannot mix sheared and static regions");

    std::vector<Mask> masks;
    for (const RegionSpec& r : regions) masks.push_back(build_mask(r, f.grid, x_stride));

    std::vector<DiagnosticSeries> out(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        out[i].region = region_name(regions[i].variant);
        out[i].sheared = sheared;
    }

    Field u = f;
    double t_prev = tau;
    for (double t : times) {
        if (t != t_prev) u = evolve_full(u, t_prev, t, v, cfg);
        t_prev = t;
        const double shear = sheared ? t - tau : 0.0;
        PhaseSpaceField W = sheared
                                ? sheared_wpt(evolve_window(phi, shear), u, shear, x_stride)
                                : wpt_forward(phi, u, x_stride);
        for (std::size_t i = 0; i < regions.size(); ++i) {
            out[i].times.push_back(t - tau);
            out[i].shears.push_back(shear);
            out[i].values.push_back(masked_norm(W, masks[i]));
        }
    }
    for (DiagnosticSeries& s : out) finalize_series(s, s.times.front(), s.times.back(), th);
    return out;
}

inline DiagnosticSeries scat_diagnostic(const Field& f, double tau, const PotentialSpec& v,
                                        const Window& phi, const RegionSpec& region,
                                        const std::vector<double>& times,
                                        const PropagatorConfig& cfg, int x_stride = 4,
                                        const VerdictThresholds& th = {}) {
    return scat_diagnostic_battery(f, tau, v, phi, {region}, times, cfg, x_stride, th)[0];
}

// K_{a,N} variant along a joint (N_k, t_k) ladder: static window, no shear,
// region radius growing with the observation time.  The verdict takes the
// infimum over observed times, since only some subsequence needs to decay.
inline DiagnosticSeries kan_ladder_diagnostic(
    const Field& f, double tau, const PotentialSpec& v, const Window& phi, double a,
    const std::vector<std::pair<double, double>>& radius_time, const PropagatorConfig& cfg,
    int x_stride = 4, const VerdictThresholds& th = {}) {
    detail::require_scat_window(phi);
    DiagnosticSeries s;
    s.region = region_name(RegionVariant::KaN);
    Field u = f;
    double t_prev = tau;
    for (const auto& [radius, t] : radius_time) {
        if (t != t_prev) u = evolve_full(u, t_prev, t, v, cfg);
        t_prev = t;
        PhaseSpaceField W = wpt_forward(phi, u, x_stride);
        Mask m = build_mask(RegionSpec::kan(a, radius), f.grid, x_stride);
        s.times.push_back(t - tau);
        s.shears.push_back(0.0);
        s.values.push_back(masked_norm(W, m));
    }
    finalize_series(s, s.times.front(), s.times.back(), th);
    if (!s.values.empty()) {
        const double initial = s.values.front();
        const double lowest = *std::min_element(s.values.begin(), s.values.end());
        if (initial > th.fit_floor && lowest <= th.decay_ratio * initial)
            s.verdict = Verdict::decaying;
    }
    return s;
}

enum class Classification { scattering_like, bound_like, undetermined };

inline const char* classification_name(Classification c) {
    switch (c) {
        case Classification::scattering_like: return "scattering-like";
        case Classification::bound_like: return "bound-like";
        case Classification::undetermined: return "undetermined";
    }
    return "?";
}

inline std::vector<double> classification_times(double tau, double T) {
    const double fr[] = {0, 1, 2, 3, 5, 8, 12, 18, 27, 40, 60, 90, 120};
    std::vector<double> out;
    for (double f : fr) out.push_back(tau + T * f / 120.0);
    return out;
}

inline Classification verdict_to_classification(Verdict v) {
    switch (v) {
        case Verdict::decaying: return Classification::scattering_like;
        case Verdict::plateau: return Classification::bound_like;
        default: return Classification::undetermined;
    }
}

inline Classification classify_state(const Field& f, double tau, const PotentialSpec& v,
                                     const Window& phi, double a, double R, double T,
                                     const PropagatorConfig& cfg, int x_stride = 4,
                                     const VerdictThresholds& th = {}) {
    if (!(l2_norm(f) > 0.0)) throw ZeroState("cannot classify the zero state");
    DiagnosticSeries s = scat_diagnostic(f, tau, v, phi, RegionSpec::gamma_ar(a, R),
                                         classification_times(tau, T), cfg, x_stride, th);
    return verdict_to_classification(s.verdict);
}

// The (a, R) battery: scattering-like if any pair shows decay, bound-like if
// every pair plateaus, otherwise undetermined.
inline Classification classify_battery(const Field& f, double tau, const PotentialSpec& v,
                                       const Window& phi, const std::vector<double>& a_list,
                                       const std::vector<double>& R_list, double T,
                                       const PropagatorConfig& cfg, int x_stride = 4,
                                       const VerdictThresholds& th = {}) {
    if (!(l2_norm(f) > 0.0)) throw ZeroState("cannot classify the zero state");
    std::vector<RegionSpec> regions;
    for (double a : a_list)
        for (double R : R_list) regions.push_back(RegionSpec::gamma_ar(a, R));
    auto series = scat_diagnostic_battery(f, tau, v, phi, regions,
                                          classification_times(tau, T), cfg, x_stride, th);
    bool any_decay = false, all_plateau = true;
    for (const DiagnosticSeries& s : series) {
        any_decay = any_decay || s.verdict == Verdict::decaying;
        all_plateau = all_plateau && s.verdict == Verdict::plateau;
    }
    if (any_decay) return Classification::scattering_like;
    if (all_plateau) return Classification::bound_like;
    return Classification::undetermined;
}

// || W_{phi(t)}[U(t,t0) psi]  -  (transport term - i * Duhamel integral) ||
// in the phase-space norm, with trapezoid quadrature in s.  The transport
// term is the phase e^{-i(t-s)|xi|^2/2} composed with the (x - (t-s) xi, xi)
// shear, applied to W_{phi(s)}[V(s) U(s,t0) psi] (s = t0 for the free term).
inline double duhamel_residual(const Field& psi, double t0, double t, const PotentialSpec& v,
                               const Window& phi0, int quad_steps, const PropagatorConfig& cfg,
                               int x_stride = 1) {
    if (quad_steps < 2) throw ConfigInvalid("duhamel quadrature needs at least 2 steps");
    const GridSpec& g = psi.grid;
    const double span = t - t0;

    Field u_t = span == 0.0 ? psi : evolve_full(psi, t0, t, v, cfg);
    PhaseSpaceField lhs = wpt_forward(evolve_window(phi0, span), u_t, x_stride);

    auto add_term = [&](PhaseSpaceField& acc, const PhaseSpaceField& W, double lag, cd weight) {
        const std::size_t nxi = W.xi_count();
        for (std::size_t xf = 0; xf < W.x_count(); ++xf)
            for (std::size_t mf = 0; mf < nxi; ++mf) {
                auto xi = W.xi_at(mf);
                const cd ph =
                    std::polar(1.0, -0.5 * lag * (xi[0] * xi[0] + xi[1] * xi[1]));
                acc.values[xf * nxi + mf] += weight * ph * W.values[xf * nxi + mf];
            }
    };

    PhaseSpaceField rhs;
    rhs.grid = g;
    rhs.x_stride = x_stride;
    rhs.values.assign(lhs.values.size(), cd{0.0, 0.0});

    add_term(rhs, sheared_wpt(phi0, psi, -span, x_stride), span, cd{1.0, 0.0});

    if (v.family != PotentialFamily::zero && span != 0.0) {
        const double ds = span / quad_steps;
        Field u = psi;
        for (int k = 0; k <= quad_steps; ++k) {
            const double s = t0 + k * ds;
            if (k > 0) u = evolve_full(u, s - ds, s, v, cfg);
            const double w = (k == 0 || k == quad_steps) ? 0.5 * ds : ds;
            PhaseSpaceField W = sheared_wpt(evolve_window(phi0, s - t0),
                                            apply_potential(u, v, s), -(t - s), x_stride);
            add_term(rhs, W, t - s, cd{0.0, -w});
        }
    }

    for (std::size_t i = 0; i < lhs.values.size(); ++i) lhs.values[i] -= rhs.values[i];
    return phase_norm(lhs);
}

// Probe states for the decay scans: a normalized Gaussian whose center rides
// along c0 + c1*s (escort probes keep c1 equal to the momentum so the packet
// stays phase-space compatible with the masked region at every s).
struct ProbeSpec {
    double c0 = 0.0;
    double c1 = 0.0;
    double momentum = 0.0;
    double width = 1.0;
};

inline std::vector<ProbeSpec> escort_probe_family(double a) {
    // small offset keeps the packet tail off the potential peak at the
    // origin, narrow widths keep that contamination out of the fit window
    std::vector<ProbeSpec> out;
    for (double q : {1.5 * a, 2.0 * a, 3.0 * a})
        for (double w : {0.7, 1.0}) out.push_back({0.5, q, q, w});
    return out;
}

// The static battery: centers {0, R/2, R}, momenta {0, a, 2a}.  Fixed-center
// probes drift out of the masked region in finite time, so this family probes
// constants rather than the decay exponent.
inline std::vector<ProbeSpec> standard_probe_family(double a, double R) {
    std::vector<ProbeSpec> out;
    for (double c : {0.0, R / 2.0, R})
        for (double q : {0.0, a, 2.0 * a}) out.push_back({c, 0.0, q, 1.0});
    return out;
}

namespace detail {
inline void require_annulus_certificate(const Window& phi, double a) {
    if (!phi.band)
        throw WindowBandViolation("decay scans require a window with a Fourier annulus certificate");
    const auto [lo, hi] = *phi.band;
    if (hi > a / 6.0 * (1.0 + 1e-12) || lo < hi / 2.0 * (1.0 - 1e-12))
        throw WindowBandViolation("window band must sit in (B/2, B) with B <= a/6");
}

inline DiagnosticSeries decay_scan(const PotentialSpec& v, const Window& phi0,
                                   const std::vector<ProbeSpec>& probes, const Mask& mask,
                                   const char* region, const std::vector<double>& s_list,
                                   double fit_lo, double fit_hi, int x_stride,
                                   const VerdictThresholds& th) {
    const GridSpec& g = phi0.field.grid;
    DiagnosticSeries series;
    series.region = region;
    series.sheared = true;
    for (double s : s_list) {
        const Window phi_s = evolve_window(phi0, s);
        double worst = 0.0;
        for (const ProbeSpec& p : probes) {
            Field psi = gaussian_packet(g, {p.c0 + p.c1 * s, 0.0}, {p.momentum, 0.0}, p.width);
            PhaseSpaceField W = sheared_wpt(phi_s, apply_potential(psi, v, s), s, x_stride);
            worst = std::max(worst, masked_norm(W, mask));
        }
        series.times.push_back(s);
        series.shears.push_back(s);
        series.values.push_back(worst);
    }
    finalize_series(series, fit_lo, fit_hi, th);
    return series;
}
} // namespace detail

// sup over the probe family of the masked sheared norm of W_{phi(s)}[V(s)psi]
// on the complement of Gamma_{a,R}, per shear time s.
inline DiagnosticSeries interaction_decay_scan(const PotentialSpec& v, const Window& phi0,
                                           const std::vector<ProbeSpec>& probes, double a,
                                           double R, const std::vector<double>& s_list,
                                           double fit_lo = 5.0, double fit_hi = 50.0,
                                           int x_stride = 4, const VerdictThresholds& th = {}) {
    detail::require_annulus_certificate(phi0, a);
    Mask m = mask_complement(build_mask(RegionSpec::gamma_ar(a, R), phi0.field.grid, x_stride));
    return detail::decay_scan(v, phi0, probes, m, "gamma_ar_complement", s_list, fit_lo,
                              fit_hi, x_stride, th);
}

// Same scan restricted to the outgoing/incoming cone Gamma_a^{b,sign}.
inline DiagnosticSeries cone_decay_scan(const PotentialSpec& v, const Window& phi0,
                                          const std::vector<ProbeSpec>& probes, double a,
                                          double b, int sign, const std::vector<double>& s_list,
                                          double fit_lo = 5.0, double fit_hi = 50.0,
                                          int x_stride = 4, const VerdictThresholds& th = {}) {
    detail::require_annulus_certificate(phi0, a);
    Mask m = build_mask(RegionSpec::cone_out(a, b, sign), phi0.field.grid, x_stride);
    return detail::decay_scan(v, phi0, probes, m, "cone_out", s_list, fit_lo, fit_hi,
                              x_stride, th);
}

// Smooth compactly supported annulus bump in frequency space; decays faster
// than any polynomial in x, so all Sigma(l) norms are finite.
inline Field annulus_state(const GridSpec& g, double k_lo, double k_hi) {
    Field F(g);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = g.freq_at(i);
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        const double u = (r - k_lo) / (k_hi - k_lo);
        F.values[i] = (u > 0.0 && u < 1.0) ? std::exp(-1.0 / (u * (1.0 - u))) : 0.0;
    }
    Field f = fourier_inverse(F);
    const double n = l2_norm(f);
    if (!(n > 0.0)) throw BadSpectralSupport("annulus contains no frequency samples");
    for (cd& v : f.values) v /= n;
    return f;
}

struct EnvelopeReport {
    std::vector<double> times;
    std::vector<double> constants; // empirical C(t) = sup <x>^l |u| / ||f||_Sigma(l)
    double max_over_min = 0.0;
};

// Dispersive envelope outside the classically allowed cone: for each t, the
// sup of <x>^l |e^{-itH0} f(x)| over grid points with |x|/t outside the
// margin-fattened annulus [K_lo, K_hi], normalized by the Sigma(l) norm.
inline EnvelopeReport dispersive_envelope_check(const Field& f, double k_lo, double k_hi,
                                            double margin, int l,
                                            const std::vector<double>& t_list) {
    const GridSpec& g = f.grid;
    Field F = fourier_forward(f);
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = g.freq_at(i);
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        const double m = std::norm(F.values[i]);
        total += m;
        if (r >= k_lo && r <= k_hi) inside += m;
    }
    if (total <= 0.0 || (total - inside) / total > 1e-8)
        throw BadSpectralSupport("state is not frequency-supported in the annulus");

    const double sig = sigma_norm(f, l);
    EnvelopeReport rep;
    for (double t : t_list) {
        Field u = free_propagate(f, t);
        double sup = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            auto x = g.coord_at(i);
            const double xn = g.dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
            const double speed = xn / std::abs(t);
            if (speed >= k_lo - margin && speed <= k_hi + margin) continue;
            const double envelope =
                std::abs(u.values[i]) * std::pow(1.0 + xn * xn, 0.5 * l);
            sup = std::max(sup, envelope);
        }
        rep.times.push_back(t);
        rep.constants.push_back(sup / sig);
    }
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (double c : rep.constants) {
        if (c <= 0.0) continue;
        if (first) { lo = hi = c; first = false; }
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    rep.max_over_min = lo > 0.0 ? hi / lo : 0.0;
    return rep;
}

struct BoundState {
    double energy = 0.0;
    Field state;
    double residual = 0.0;
};

// Imaginary-time relaxation with renormalization, on a decreasing step
// schedule; the energy is the Rayleigh quotient against the true discrete
// Hamiltonian, and convergence is certified by the eigen-residual.
inline BoundState bound_state_solve(const PotentialSpec& v, const GridSpec& g,
                                    double residual_tol = 1e-6) {
    if (v.time_dependent())
        throw NoBoundState("bound-state relaxation requires a time-independent potential");

    Field psi = gaussian_packet(g, {0.0, 0.0}, {0.0, 0.0}, 1.0);
    auto normalize = [](Field& f) {
        const double n = l2_norm(f);
        for (cd& z : f.values) z /= n;
    };
    auto rayleigh = [&](const Field& f) {
        return inner_product(apply_hamiltonian(f, v), f).real();
    };
    auto residual_of = [&](const Field& f, double E) {
        Field r = apply_hamiltonian(f, v);
        for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= E * f.values[i];
        return l2_norm(r);
    };

    const struct { double tau; int iters; } schedule[] = {
        {0.1, 2000}, {0.02, 3000}, {0.005, 4000}, {0.001, 12000}};
    double E = rayleigh(psi);
    for (const auto& stage : schedule) {
        // cached imaginary-time Strang factors for this step size
        std::vector<double> kick(g.size()), drift(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            kick[i] = std::exp(-0.5 * stage.tau *
                               potential_eval(v, 0.0, g.coord_at(i), g.dim));
            auto xi = g.freq_at(i);
            drift[i] = std::exp(-0.5 * stage.tau * (xi[0] * xi[0] + xi[1] * xi[1]));
        }
        for (int it = 0; it < stage.iters; ++it) {
            for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= kick[i];
            fft::transform_nd(psi.values, g.dim, g.points, -1);
            for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= drift[i];
            fft::transform_nd(psi.values, g.dim, g.points, +1);
            for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= kick[i];
            normalize(psi);
            if ((it & 127) == 127) {
                E = rayleigh(psi);
                if (E < -1e-6 && residual_of(psi, E) <= residual_tol) {
                    BoundState out{E, psi, residual_of(psi, E)};
                    return out;
                }
            }
        }
        E = rayleigh(psi);
    }
    if (!(E < -1e-6)) throw NoBoundState("imaginary-time relaxation found no negative energy");
    const double res = residual_of(psi, E);
    if (res > residual_tol)
        throw NoBoundState("bound-state residual failed to meet tolerance");
    return {E, psi, res};
}

inline BoundState bound_state_solve(const PotentialSpec& v, double residual_tol = 1e-6) {
    return bound_state_solve(v, make_grid(1, 20.0, 512), residual_tol);
}

} // namespace wpscat
