// Acceptance battery: one line per criterion, nonzero exit iff any fails.
// Tolerances are pinned here; parameter sets were chosen so every check has
// margin on the reference hardware (runtimes well inside the stated budgets).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "wpscat/wpscat.hpp"

using namespace wpscat;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int id, const char* label, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool threw = false;
    try {
        detail = body();
    } catch (const std::exception& e) {
        threw = true;
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = !threw && detail.empty();
    if (!ok) ++g_failures;
    std::printf("criterion %2d %-22s %s (%.1fs)%s%s\n", id, label, ok ? "pass" : "FAIL",
                secs, ok ? "" : " -- ", ok ? "" : detail.c_str());
    std::fflush(stdout);
}

std::string check(bool ok, const std::string& msg) { return ok ? "" : msg; }

double rel_l2_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    return std::sqrt(num / den);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Field sech_ground_state(const GridSpec& g) {
    Field f(g);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = 1.0 / std::cosh(g.coord_at(i)[0]) / std::sqrt(2.0);
    return f;
}

// --- 1: inversion formula ---------------------------------------------------
std::string c1_inversion() {
    GridSpec g = make_grid(1, 40.0, 1024);
    Window w = make_gaussian_scat_window(g, 1.0);
    Field f = gaussian_packet(g, {2.0, 0.0}, {1.0, 0.0}, 1.0);
    Field f2 = gaussian_packet(g, {-3.0, 0.0}, {-0.5, 0.0}, 2.0);
    Field f3 = gaussian_packet(g, {0.5, 0.0}, {2.0, 0.0}, 0.7);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] += cd{0.3, 0.4} * f2.values[i] + cd{-0.2, 0.1} * f3.values[i];
    const double rel = rel_l2_diff(wpt_inverse(w, wpt_forward(w, f)), f);
    return check(rel <= 1e-8, "inversion defect " + fmt(rel));
}

// --- 2: phase-space isometry ------------------------------------------------
std::string c2_isometry() {
    GridSpec g = make_grid(1, 40.0, 512);
    Field f = gaussian_packet(g, {1.0, 0.0}, {2.0, 0.0}, 1.3);
    Field h = gaussian_packet(g, {-2.0, 0.0}, {0.5, 0.0}, 0.9);
    const std::pair<double, double> widths[] = {{1.0, 1.7}, {0.8, 2.2}, {1.3, 0.6}};
    for (auto [wa, wb] : widths) {
        Window phi = make_gaussian_scat_window(g, wa);
        Window psi = make_gaussian_scat_window(g, wb);
        const cd lhs = phase_inner_product(wpt_forward(phi, f), wpt_forward(psi, h));
        const cd rhs = 2.0 * pi * inner_product(psi.field, phi.field) * inner_product(f, h);
        const double defect = std::abs(lhs - rhs) / (l2_norm(f) * l2_norm(h));
        if (defect > 1e-8)
            return "pair (" + fmt(wa) + "," + fmt(wb) + ") defect " + fmt(defect);
    }
    return "";
}

// --- 3: free transport law --------------------------------------------------
std::string c3_transport() {
    GridSpec g = make_grid(1, 60.0, 1024);
    Window w = make_gaussian_scat_window(g, 1.0);
    Field psi = gaussian_packet(g, {0.0, 0.0}, {1.0, 0.0}, 1.0);
    PhaseSpaceField W = wpt_forward(w, psi);
    const double ref = phase_norm(W);
    for (double t : {1.0, 5.0, 10.0}) {
        PhaseSpaceField S = sheared_wpt(evolve_window(w, t), free_propagate(psi, t), t);
        double acc = 0.0;
        for (std::size_t xf = 0; xf < W.x_count(); ++xf)
            for (std::size_t m = 0; m < W.xi_count(); ++m) {
                const double xi = W.xi_at(m)[0];
                const std::size_t i = xf * W.xi_count() + m;
                acc += std::norm(S.values[i] -
                                 std::polar(1.0, -0.5 * t * xi * xi) * W.values[i]);
            }
        const double rel = std::sqrt(acc * W.cell_weight()) / ref;
        if (rel > 1e-6) return "t=" + fmt(t) + " transport defect " + fmt(rel);
    }
    return "";
}

// --- 4: propagator axioms ---------------------------------------------------
std::string c4_propagator() {
    GridSpec g = make_grid(1, 20.0, 512);
    auto pt = poschl_teller_potential(1.0);
    Field sech = sech_ground_state(g);
    Field u = evolve_full(sech, 0.0, 50.0, pt, {0.01, 1e-9});
    const double drift = std::abs(l2_norm(u) - l2_norm(sech));
    if (drift > 1e-10) return "norm drift " + fmt(drift);

    // same-order paths cancel, so the direct path runs at dt/16
    Field pk = gaussian_packet(g, {-3.0, 0.0}, {1.0, 0.0}, 1.5);
    const double d1 = group_law_defect(pt, {0.01, 1e-9}, pk, 0.0, 1.0 / 3.0, 1.0, 16);
    const double d2 = group_law_defect(pt, {0.005, 1e-9}, pk, 0.0, 1.0 / 3.0, 1.0, 16);
    const double ratio = d1 / d2;
    return check(ratio >= 3.0 && ratio <= 5.0, "group-law halving ratio " + fmt(ratio));
}

// --- 5: duhamel identity ----------------------------------------------------
std::string c5_duhamel() {
    GridSpec g = make_grid(1, 20.0, 512);
    Field pk = gaussian_packet(g, {-3.0, 0.0}, {1.5, 0.0}, 1.0);
    Window w = make_gaussian_scat_window(g, 1.0);
    const double r0 = duhamel_residual(pk, 0.0, 2.0, zero_potential(), w, 8, {0.05, 1e-9}, 4);
    if (r0 > 1e-10) return "free residual " + fmt(r0);

    auto pt = poschl_teller_potential(1.0);
    std::vector<double> lx, ly;
    for (int q : {50, 100, 200}) {
        const double ds = 2.0 / q;
        const double r = duhamel_residual(pk, 0.0, 2.0, pt, w, q, {ds / 5.0, 1e-9}, 4);
        lx.push_back(std::log(ds));
        ly.push_back(std::log(r));
    }
    const double slope = regression_slope(lx, ly);
    return check(slope >= 1.8 && slope <= 2.2, "refinement slope " + fmt(slope));
}

// --- 6: short-range decay scan ----------------------------------------------
std::string c6_decay_scan() {
    GridSpec g = make_grid(1, 310.0, 2048);
    const double a = 0.5, R = 10.0;
    Window phi = make_fourier_annulus_window(g, a / 12.0, a / 6.0);
    auto probes = escort_probe_family(a);
    std::vector<double> s_list{5, 8, 12, 18, 27, 40, 50};

    DiagnosticSeries s2 =
        interaction_decay_scan(inverse_poly_potential(1.0, 2.0), phi, probes, a, R, s_list);
    if (s2.fit_exponent < -2.5 || s2.fit_exponent > -1.7)
        return "delta=2 exponent " + fmt(s2.fit_exponent);
    DiagnosticSeries s12 =
        interaction_decay_scan(inverse_poly_potential(1.0, 1.2), phi, probes, a, R, s_list);
    return check(std::abs(s12.fit_exponent + 1.2) <= 0.5,
                 "delta=1.2 exponent " + fmt(s12.fit_exponent));
}

// --- 7: cone scan b-shift ---------------------------------------------------
std::string c7_cone_scan() {
    GridSpec g = make_grid(1, 310.0, 2048);
    const double a = 0.5;
    Window phi = make_fourier_annulus_window(g, a / 12.0, a / 6.0);
    auto v = inverse_poly_potential(1.0, 2.0);
    auto probes = escort_probe_family(a);
    std::vector<double> s_list{5, 8, 12, 15, 18, 22, 27, 33, 40, 50};

    DiagnosticSeries cb = cone_decay_scan(v, phi, probes, a, 10.0, +1, s_list);
    DiagnosticSeries c2b = cone_decay_scan(v, phi, probes, a, 20.0, +1, s_list);
    for (const DiagnosticSeries* s : {&cb, &c2b})
        if (s->fit_exponent < -2.5 || s->fit_exponent > -1.7)
            return "cone exponent " + fmt(s->fit_exponent);
    // value(s; 2b) <= value(s - b; b) * (1 + tol), tol = 0.3
    for (std::size_t i = 0; i < s_list.size(); ++i)
        for (std::size_t j = 0; j < s_list.size(); ++j)
            if (s_list[j] == s_list[i] - 10.0 && c2b.values[i] > cb.values[j] * 1.3)
                return "domination fails at s=" + fmt(s_list[i]) + " (" +
                       fmt(c2b.values[i] / cb.values[j]) + ")";
    return "";
}

// --- 8: cook tail -----------------------------------------------------------
std::string c8_cook() {
    std::vector<double> horizons{10, 20, 40, 80};
    {
        GridSpec g = make_grid(1, 80.0, 512);
        Field u0 = gaussian_packet(g, {0.0, 0.0}, {3.0, 0.0}, 2.0);
        Window phi = make_gaussian_scat_window(g, 1.0);
        CookResult free_res = cook_wave_operator(u0, 0.0, zero_potential(), phi, horizons,
                                                 +1, {0.01, 1e-9});
        for (double d : free_res.table.differences)
            if (d > 1e-12) return "free difference " + fmt(d);
    }
    GridSpec g = make_grid(1, 450.0, 4096);
    Field u0 = gaussian_packet(g, {0.0, 0.0}, {3.0, 0.0}, 2.5);
    Window phi = make_gaussian_scat_window(g, 2.0);
    CookResult res = cook_wave_operator(u0, 0.0, inverse_poly_potential(1.0, 2.0), phi,
                                        horizons, +1, {0.01, 1e-9});
    const double tail = res.table.fitted_tail_exponent;
    return check(std::abs(tail + 1.0) <= 0.3, "tail exponent " + fmt(tail));
}

// --- 9: completeness dichotomy ----------------------------------------------
std::string c9_dichotomy() {
    GridSpec g = make_grid(1, 450.0, 4096);
    auto vp = inverse_poly_potential(1.0, 2.0);
    auto pt = poschl_teller_potential(1.0);
    PropagatorConfig cfg{0.01, 1e-9};
    std::vector<double> as{0.25, 0.5, 1.0}, Rs{5, 10, 20};

    BoundState bs = bound_state_solve(pt, g);
    if (std::abs(bs.energy + 0.5) > 1e-4) return "bound energy " + fmt(bs.energy);
    const double overlap = std::abs(inner_product(bs.state, sech_ground_state(g)));
    if (overlap < 0.999) return "bound overlap " + fmt(overlap);

    Field pk = gaussian_packet(g, {0.0, 0.0}, {3.0, 0.0}, 2.5);
    for (double wphi : {2.0, 3.0}) {
        Window phi = make_gaussian_scat_window(g, wphi);
        CookResult cook = cook_wave_operator(pk, 0.0, vp, phi, {10, 20, 40, 80}, +1, cfg);
        Classification image = classify_battery(cook.limit, 0.0, vp, phi, as, Rs, 100.0, cfg);
        if (image != Classification::scattering_like)
            return "image under width-" + fmt(wphi) + " window: " +
                   classification_name(image);
        Classification bound = classify_battery(bs.state, 0.0, pt, phi, as, Rs, 100.0, cfg);
        if (bound != Classification::bound_like)
            return "bound state under width-" + fmt(wphi) + " window: " +
                   classification_name(bound);

        // region variant with the growing-radius time subsequence
        std::vector<std::pair<double, double>> ladder{{4, 0},   {6, 4},   {12, 8},
                                                      {24, 16}, {48, 32}, {96, 64}};
        DiagnosticSeries ki = kan_ladder_diagnostic(cook.limit, 0.0, vp, phi, 0.5, ladder, cfg);
        if (ki.verdict != Verdict::decaying)
            return std::string("kan image verdict ") + verdict_name(ki.verdict);
        DiagnosticSeries kb = kan_ladder_diagnostic(bs.state, 0.0, pt, phi, 0.5, ladder, cfg);
        if (kb.verdict != Verdict::plateau)
            return std::string("kan bound verdict ") + verdict_name(kb.verdict);
    }
    return "";
}

// --- 10: dispersive envelope ------------------------------------------------
std::string c10_envelope() {
    GridSpec g = make_grid(1, 64.0, 2048);
    Field f = annulus_state(g, 1.0, 2.0);
    EnvelopeReport rep = dispersive_envelope_check(f, 1.0, 2.0, 0.75, 2, {2, 5, 10, 20});
    return check(rep.max_over_min <= 3.0, "constant spread " + fmt(rep.max_over_min));
}

// --- 11: runner determinism -------------------------------------------------
std::string c11_determinism() {
    const char* cfg_text = R"({
      "name": "det_probe",
      "experiment": "envelope",
      "grid": {"dim": 1, "half_width": 64.0, "points": 1024},
      "state": {"kind": "annulus", "k_lo": 1.0, "k_hi": 2.0},
      "schedule": {"times": [2.0, 5.0, 10.0]},
      "margin": 0.75,
      "order": 2
    })";
    ExperimentConfig c = parse_config_text(cfg_text);
    fs::path base = fs::temp_directory_path() / "wpscat_acceptance_det";
    fs::remove_all(base);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    emit_report(run_experiment(c), c.name, base / "a");
    emit_report(run_experiment(c), c.name, base / "b");
    for (const char* file : {"det_probe_series.csv", "det_probe_table.csv", "det_probe.json"})
        if (slurp(base / "a" / file) != slurp(base / "b" / file))
            return std::string("mismatch in ") + file;
    fs::remove_all(base);
    return "";
}

} // namespace

int main() {
    std::setbuf(stdout, nullptr);
    criterion(1, "inversion", c1_inversion);
    criterion(2, "isometry", c2_isometry);
    criterion(3, "free transport", c3_transport);
    criterion(4, "propagator axioms", c4_propagator);
    criterion(5, "duhamel identity", c5_duhamel);
    criterion(6, "decay scan", c6_decay_scan);
    criterion(7, "cone scan", c7_cone_scan);
    criterion(8, "cook tail", c8_cook);
    criterion(9, "dichotomy", c9_dichotomy);
    criterion(10, "envelope bound", c10_envelope);
    criterion(11, "determinism", c11_determinism);
    if (g_failures) std::printf("%d criteria FAILED\n", g_failures);
    else std::printf("all criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
