#pragma once

#include "lab.hpp"
#include "report.hpp"

namespace wpscat {

namespace detail {

inline GridSpec runner_grid(const ExperimentConfig& c) {
    const GridSpec g = make_grid(c.grid.dim, c.grid.half_width, c.grid.points);
    const int cap = g.dim == 1 ? 4096 : 256;
    if (g.points > cap) throw ResourceLimit("grid exceeds the desk-scale point budget");
    // phase-space storage for one transform at the configured stride
    const double rows = static_cast<double>(g.size()) / std::pow(c.schedule.x_stride, g.dim);
    if (rows * static_cast<double>(g.size()) * sizeof(cd) > double(1) * (1u << 30))
        throw ResourceLimit("phase-space storage exceeds the 1 GiB budget");
    return g;
}

inline Window runner_window(const ExperimentConfig& c, const GridSpec& g) {
    if (c.window.kind == "annulus")
        return make_fourier_annulus_window(g, c.window.band_lo, c.window.band_hi);
    return make_gaussian_scat_window(g, c.window.width);
}

inline Field runner_state(const ExperimentConfig& c, const GridSpec& g) {
    if (c.state.kind == "bound_state") return bound_state_solve(c.potential, g).state;
    if (c.state.kind == "annulus") return annulus_state(g, c.state.k_lo, c.state.k_hi);
    return gaussian_packet(g, {c.state.center, 0.0}, {c.state.momentum, 0.0}, c.state.width);
}

inline std::vector<ProbeSpec> runner_probes(const ExperimentConfig& c) {
    return c.probes == "standard" ? standard_probe_family(c.region.a, c.region.b)
                                  : escort_probe_family(c.region.a);
}

inline void expect_range(Report& r, const char* what, double value, double lo, double hi) {
    if (value < lo || value > hi)
        r.failures.push_back(std::string(what) + " " + format_double(value) +
                             " outside expected [" + format_double(lo) + ", " +
                             format_double(hi) + "]");
}

inline void expect_string(Report& r, const char* what, const std::string& got,
                          const std::string& want) {
    if (!want.empty() && got != want)
        r.failures.push_back(std::string(what) + " '" + got + "' != expected '" + want + "'");
}

inline void check_expectations(Report& r, const ExperimentConfig& c) {
    if (!c.expect.present) return;
    if (!c.expect.classification.empty())
        expect_string(r, "classification",
                      r.results.value("classification", std::string{}),
                      c.expect.classification);
    if (!c.expect.verdict.empty() && !r.series.empty())
        expect_string(r, "verdict", verdict_name(r.series.front().verdict), c.expect.verdict);
    if (c.expect.has_fit_range && !r.series.empty())
        expect_range(r, "fit exponent", r.series.front().fit_exponent, c.expect.fit_lo,
                     c.expect.fit_hi);
    if (c.expect.has_tail_range && !r.tables.empty())
        expect_range(r, "tail exponent", r.tables.front().second.fitted_tail_exponent,
                     c.expect.tail_lo, c.expect.tail_hi);
    if (c.expect.has_max_ratio)
        expect_range(r, "constant spread", r.results.value("max_over_min", 0.0), 0.0,
                     c.expect.max_ratio);
    if (c.expect.has_residual_max)
        expect_range(r, "residual", r.results.value("residual", 0.0), 0.0,
                     c.expect.residual_max);
    if (c.expect.has_energy)
        expect_range(r, "energy", r.results.value("energy", 0.0),
                     c.expect.energy - c.expect.energy_tol,
                     c.expect.energy + c.expect.energy_tol);
}

} // namespace detail

inline Report run_experiment(const ExperimentConfig& c) {
    Report r;
    r.config_echo = c.echo;
    r.provenance["artifact_version"] = artifact_version;
    r.provenance["experiment"] = experiment_name(c.kind);
    r.provenance["dt_stability"] = "not_applicable";

    const GridSpec g = detail::runner_grid(c);
    const PropagatorConfig cfg{c.schedule.dt, 1e-9};
    const VerdictThresholds& th = c.thresholds;

    auto record_state = [&](const Field& f) {
        r.provenance["initial_boundary_mass"] = boundary_mass(f);
    };
    auto fit_window = [&](const std::vector<double>& ts) {
        double lo = c.schedule.fit_lo, hi = c.schedule.fit_hi;
        if (lo == 0.0 && hi == 0.0 && !ts.empty()) {
            lo = ts.front();
            hi = ts.back();
        }
        return std::pair{lo, hi};
    };

    switch (c.kind) {
        case ExperimentKind::diagnostic: {
            Field f = detail::runner_state(c, g);
            record_state(f);
            Window phi = detail::runner_window(c, g);
            auto run_once = [&](const PropagatorConfig& p) {
                DiagnosticSeries s = scat_diagnostic(f, c.tau, c.potential, phi, c.region,
                                                     c.schedule.times, p,
                                                     c.schedule.x_stride, th);
                auto [lo, hi] = fit_window(s.times);
                finalize_series(s, lo, hi, th);
                return s;
            };
            DiagnosticSeries s = run_once(cfg);
            if (c.schedule.stability_check) {
                DiagnosticSeries s2 = run_once({cfg.dt / 2.0, cfg.t_tolerance});
                const double shift = std::abs(s2.fit_exponent - s.fit_exponent);
                r.provenance["dt_stability"] = shift <= 0.1 ? "passed" : "failed";
                r.provenance["dt_stability_shift"] = shift;
                if (shift > 0.1)
                    r.failures.push_back("dt/2 stability check moved the exponent by " +
                                         format_double(shift));
            } else {
                r.provenance["dt_stability"] = "skipped";
            }
            r.results["verdict"] = verdict_name(s.verdict);
            r.results["fit_exponent"] = s.fit_exponent;
            r.series.push_back(std::move(s));
            break;
        }
        case ExperimentKind::cook: {
            Field u0 = detail::runner_state(c, g);
            record_state(u0);
            Window phi = detail::runner_window(c, g);
            CookResult res = cook_wave_operator(u0, c.tau, c.potential, phi,
                                                c.schedule.horizons, c.sign, cfg, th);
            if (c.schedule.stability_check) {
                CookResult res2 =
                    cook_wave_operator(u0, c.tau, c.potential, phi, c.schedule.horizons,
                                       c.sign, {cfg.dt / 2.0, cfg.t_tolerance}, th);
                const double shift = std::abs(res2.table.fitted_tail_exponent -
                                              res.table.fitted_tail_exponent);
                r.provenance["dt_stability"] = shift <= 0.1 ? "passed" : "failed";
                r.provenance["dt_stability_shift"] = shift;
                if (shift > 0.1)
                    r.failures.push_back("dt/2 stability check moved the tail exponent by " +
                                         format_double(shift));
            } else {
                r.provenance["dt_stability"] = "skipped";
            }
            r.results["tail_exponent"] = res.table.fitted_tail_exponent;
            r.provenance["limit_boundary_mass"] = boundary_mass(res.limit);
            r.tables.emplace_back("cook", std::move(res.table));
            break;
        }
        case ExperimentKind::inverse_cook: {
            Field u0 = detail::runner_state(c, g);
            record_state(u0);
            CookResult res = inverse_wave_limit(u0, c.potential, c.schedule.horizons, cfg, th);
            r.provenance["dt_stability"] = "skipped";
            r.results["tail_exponent"] = res.table.fitted_tail_exponent;
            r.tables.emplace_back("inverse", std::move(res.table));
            break;
        }
        case ExperimentKind::classify: {
            Field f = detail::runner_state(c, g);
            record_state(f);
            Window phi = detail::runner_window(c, g);
            Classification cl =
                classify_state(f, c.tau, c.potential, phi, c.region.a, c.region.b,
                               c.schedule.horizon, cfg, c.schedule.x_stride, th);
            r.provenance["dt_stability"] = "skipped";
            r.results["classification"] = classification_name(cl);
            break;
        }
        case ExperimentKind::decay_scan: {
            Window phi = detail::runner_window(c, g);
            auto [lo, hi] = fit_window(c.schedule.s_list);
            DiagnosticSeries s =
                interaction_decay_scan(c.potential, phi, detail::runner_probes(c), c.region.a,
                                   c.region.b, c.schedule.s_list, lo, hi,
                                   c.schedule.x_stride, th);
            r.results["fit_exponent"] = s.fit_exponent;
            r.series.push_back(std::move(s));
            break;
        }
        case ExperimentKind::cone_scan: {
            Window phi = detail::runner_window(c, g);
            auto [lo, hi] = fit_window(c.schedule.s_list);
            DiagnosticSeries s =
                cone_decay_scan(c.potential, phi, detail::runner_probes(c), c.region.a,
                                  c.region.b, c.region.sign, c.schedule.s_list, lo, hi,
                                  c.schedule.x_stride, th);
            r.results["fit_exponent"] = s.fit_exponent;
            r.series.push_back(std::move(s));
            break;
        }
        case ExperimentKind::envelope: {
            Field f = detail::runner_state(c, g);
            record_state(f);
            EnvelopeReport rep = dispersive_envelope_check(f, c.state.k_lo, c.state.k_hi,
                                                       c.margin, c.order, c.schedule.times);
            r.results["max_over_min"] = rep.max_over_min;
            DiagnosticSeries s;
            s.region = "envelope";
            s.times = rep.times;
            s.values = rep.constants;
            s.shears.assign(rep.times.size(), 0.0);
            finalize_series(s, rep.times.front(), rep.times.back(), th);
            r.series.push_back(std::move(s));
            break;
        }
        case ExperimentKind::duhamel: {
            Field psi = detail::runner_state(c, g);
            record_state(psi);
            Window phi = detail::runner_window(c, g);
            const double res =
                duhamel_residual(psi, c.schedule.t0, c.schedule.t1, c.potential, phi,
                                 c.schedule.quad_steps, cfg, c.schedule.x_stride);
            r.results["residual"] = res;
            break;
        }
        case ExperimentKind::bound_state: {
            BoundState bs = bound_state_solve(c.potential, g);
            r.results["energy"] = bs.energy;
            r.results["residual"] = bs.residual;
            r.provenance["dt_stability"] = "not_applicable";
            break;
        }
    }

    detail::check_expectations(r, c);
    return r;
}

} // namespace wpscat
