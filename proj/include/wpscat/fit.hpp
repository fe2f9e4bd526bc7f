#pragma once

#include <string>
#include <vector>

#include "errors.hpp"

namespace wpscat {

// Verdict and convergence thresholds, centrally owned so every experiment and
// report cites the same constants.
struct VerdictThresholds {
    double decay_ratio = 0.05;   // final <= ratio * initial -> decaying
    double plateau_ratio = 0.5;  // final >= ratio * initial -> plateau
    double cauchy_rel = 5e-3;    // converged: last Cauchy diff <= rel * ||u0||
    double fit_floor = 1e-13;    // values at or below this are noise for fits
};

enum class Verdict { decaying, plateau, undetermined };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::decaying: return "decaying";
        case Verdict::plateau: return "plateau";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

// Least-squares slope of y against x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

struct DiagnosticSeries {
    std::vector<double> times;   // strictly increasing
    std::vector<double> values;  // nonnegative
    std::vector<double> shears;  // shear applied at each time (0 for static)
    double fit_exponent = 0.0;   // slope of log(value) vs log(1 + time)
    double fit_lo = 0.0, fit_hi = 0.0;
    Verdict verdict = Verdict::undetermined;
    std::string region = "";
    bool sheared = false;
};

// Fit log(value) against log(1 + time) over [lo, hi] and assign the verdict
// from the final/initial ratio.
inline void finalize_series(DiagnosticSeries& s, double fit_lo, double fit_hi,
                            const VerdictThresholds& th = {}) {
    s.fit_lo = fit_lo;
    s.fit_hi = fit_hi;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (s.times[i] < fit_lo || s.times[i] > fit_hi) continue;
        if (s.values[i] <= th.fit_floor) continue;
        lx.push_back(std::log(1.0 + s.times[i]));
        ly.push_back(std::log(s.values[i]));
    }
    s.fit_exponent = lx.size() >= 2 ? regression_slope(lx, ly) : 0.0;

    if (s.values.empty()) {
        s.verdict = Verdict::undetermined;
        return;
    }
    const double initial = s.values.front(), final_v = s.values.back();
    if (initial <= th.fit_floor)
        s.verdict = final_v <= th.fit_floor ? Verdict::decaying : Verdict::undetermined;
    else if (final_v <= th.decay_ratio * initial)
        s.verdict = Verdict::decaying;
    else if (final_v >= th.plateau_ratio * initial)
        s.verdict = Verdict::plateau;
    else
        s.verdict = Verdict::undetermined;
}

struct ConvergenceTable {
    std::vector<double> horizons;     // T_k, increasing
    std::vector<double> differences;  // d_k = ||A(T_{k+1}) - A(T_k)||, one per ladder rung
    double fitted_tail_exponent = 0.0;

    // log(d_k) vs log(T_{k+1}) slope; d_k is attributed to the later horizon
    void fit_tail(double floor = 1e-15) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < differences.size(); ++i) {
            if (differences[i] <= floor) continue;
            lx.push_back(std::log(horizons[i + 1]));
            ly.push_back(std::log(differences[i]));
        }
        fitted_tail_exponent = lx.size() >= 2 ? regression_slope(lx, ly) : 0.0;
    }

    // converged: differences monotone past the first rung (up to round-off
    // noise) and the last one below the Cauchy threshold
    bool converged(double ref_norm, const VerdictThresholds& th = {}) const {
        if (differences.empty()) return false;
        const double noise = 1e-12 * ref_norm;
        for (std::size_t i = 2; i < differences.size(); ++i)
            if (differences[i] > differences[i - 1] && differences[i] > noise) return false;
        return differences.back() <= th.cauchy_rel * ref_norm;
    }
};

} // namespace wpscat
