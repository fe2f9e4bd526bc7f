#pragma once

#include <cmath>
#include <string>

#include "spectral.hpp"

namespace wpscat {

// Short-range potential families: every member obeys the envelope
// |V(t,x)| <= C (1+|x|)^(-delta) with delta > 1 (verified by
// verify_short_range below, not just assumed).
enum class PotentialFamily { zero, inverse_poly, poschl_teller, modulated_inverse_poly };

struct PotentialSpec {
    PotentialFamily family = PotentialFamily::zero;
    double envelope_C = 1.0;  // C in the envelope bound
    double delta = 2.0;       // decay exponent, > 1
    double amplitude = 1.0;   // strength (inverse_poly / modulated)
    double lambda = 1.0;      // well parameter (poschl_teller)

    bool time_dependent() const { return family == PotentialFamily::modulated_inverse_poly; }
};

inline PotentialSpec zero_potential() {
    return {PotentialFamily::zero, 1e-12, 2.0, 0.0, 0.0};
}

inline PotentialSpec inverse_poly_potential(double C, double delta) {
    PotentialSpec v;
    v.family = PotentialFamily::inverse_poly;
    v.amplitude = C;
    v.envelope_C = std::abs(C);
    v.delta = delta;
    return v;
}

// amplitude * (1 + cos(t)/2) * (1+|x|)^(-delta); the modulation factor lies
// in [1/2, 3/2], so the envelope constant is 1.5*amplitude.
inline PotentialSpec modulated_inverse_poly_potential(double amplitude, double delta) {
    PotentialSpec v;
    v.family = PotentialFamily::modulated_inverse_poly;
    v.amplitude = amplitude;
    v.envelope_C = 1.5 * std::abs(amplitude);
    v.delta = delta;
    return v;
}

// V(x) = -lambda(lambda+1)/2 * sech^2(|x|); exponentially short range.  For
// the envelope record we use delta = 2 with C = lambda(lambda+1), which
// dominates sech^2(r)(1+r)^2/2 (max ~0.91) with margin.
inline PotentialSpec poschl_teller_potential(double lambda) {
    PotentialSpec v;
    v.family = PotentialFamily::poschl_teller;
    v.lambda = lambda;
    v.envelope_C = lambda * (lambda + 1.0);
    v.delta = 2.0;
    return v;
}

inline double potential_eval(const PotentialSpec& v, double t, std::array<double, 2> x,
                             int dim = 1) {
    const double r = dim == 1 ? std::abs(x[0]) : std::sqrt(x[0] * x[0] + x[1] * x[1]);
    switch (v.family) {
        case PotentialFamily::zero:
            return 0.0;
        case PotentialFamily::inverse_poly:
            return v.amplitude * std::pow(1.0 + r, -v.delta);
        case PotentialFamily::modulated_inverse_poly:
            return v.amplitude * (1.0 + 0.5 * std::cos(t)) * std::pow(1.0 + r, -v.delta);
        case PotentialFamily::poschl_teller: {
            const double s = 1.0 / std::cosh(r);
            return -0.5 * v.lambda * (v.lambda + 1.0) * s * s;
        }
    }
    return 0.0;
}

// max over sampled (t, x) of |V(t,x)|*(1+|x|)^delta - C; nonpositive means
// the short-range envelope holds with margin -result.
inline double short_range_excess(const PotentialSpec& v, const GridSpec& g,
                                 const std::vector<double>& t_samples) {
    double worst = -v.envelope_C;
    for (double t : t_samples) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.coord_at(i);
            const double r = g.dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
            const double val =
                std::abs(potential_eval(v, t, x, g.dim)) * std::pow(1.0 + r, v.delta) -
                v.envelope_C;
            if (val > worst) worst = val;
        }
    }
    return worst;
}

struct PropagatorConfig {
    double dt = 0.01;
    double t_tolerance = 1e-9;
};

namespace detail {
inline void half_kick(Field& f, const PotentialSpec& v, double t_mid, double step) {
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double V = potential_eval(v, t_mid, f.grid.coord_at(i), f.grid.dim);
        f.values[i] *= std::polar(1.0, -0.5 * step * V);
    }
}
} // namespace detail

// U(t1, t0) by symmetric (Strang) splitting: half potential kick at the
// substep midpoint time, full free drift, half kick.  Each substep is
// unitary; backward evolution runs the same scheme with negative steps.
inline Field evolve_full(const Field& f, double t0, double t1, const PotentialSpec& v,
                         const PropagatorConfig& cfg) {
    const double interval = t1 - t0;
    if (interval == 0.0) return f;
    if (!(cfg.dt > 0.0)) throw StepUnderflow("propagator dt must be positive");
    // exact landing: the step count is rounded and the step stretched so the
    // final substep ends at t1 exactly
    const long n = std::lround(std::abs(interval) / cfg.dt);
    if (n == 0) throw StepUnderflow("dt exceeds the requested evolution interval");
    const double step = interval / static_cast<double>(n);

    if (v.family == PotentialFamily::zero) return free_propagate(f, interval);

    // cached multipliers: drift always, kick when V is time-independent
    const GridSpec& g = f.grid;
    std::vector<cd> drift(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto xi = g.freq_at(i);
        drift[i] = std::polar(1.0, -0.5 * step * (xi[0] * xi[0] + xi[1] * xi[1]));
    }
    std::vector<cd> kick;
    if (!v.time_dependent()) {
        kick.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double V = potential_eval(v, 0.0, g.coord_at(i), g.dim);
            kick[i] = std::polar(1.0, -0.5 * step * V);
        }
    }

    Field u = f;
    for (long s = 0; s < n; ++s) {
        const double t_mid = t0 + (static_cast<double>(s) + 0.5) * step;
        if (v.time_dependent())
            detail::half_kick(u, v, t_mid, step);
        else
            for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= kick[i];

        fft::transform_nd(u.values, g.dim, g.points, -1);
        // drift multiplier acts on DFT bins directly; the (-1)^j grid
        // twiddles cancel between the forward and inverse transform
        for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= drift[i];
        fft::transform_nd(u.values, g.dim, g.points, +1);

        if (v.time_dependent())
            detail::half_kick(u, v, t_mid, step);
        else
            for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= kick[i];
    }
    return u;
}

// || U(t,tau') U(tau',tau) f  -  U(t,tau) f ||.  With ref_refine = 1 both
// paths use the same step budget; the difference of two same-order paths
// suffers heavy error cancellation (rounding of the per-leg step counts),
// so convergence studies pass ref_refine > 1 to evaluate the direct path
// with a dt/ref_refine reference step.
inline double group_law_defect(const PotentialSpec& v, const PropagatorConfig& cfg,
                               const Field& f, double tau, double tau_mid, double t,
                               int ref_refine = 1) {
    Field via = tau_mid == tau ? f : evolve_full(f, tau, tau_mid, v, cfg);
    via = t == tau_mid ? via : evolve_full(via, tau_mid, t, v, cfg);
    PropagatorConfig ref = cfg;
    ref.dt = cfg.dt / ref_refine;
    Field direct = t == tau ? f : evolve_full(f, tau, t, v, ref);
    double acc = 0.0;
    for (std::size_t i = 0; i < via.values.size(); ++i)
        acc += std::norm(via.values[i] - direct.values[i]);
    return std::sqrt(acc * f.grid.cell_weight());
}

} // namespace wpscat
