#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dynamics.hpp"
#include "fit.hpp"
#include "regions.hpp"

namespace wpscat {

using json = nlohmann::ordered_json;

enum class ExperimentKind {
    diagnostic,
    cook,
    inverse_cook,
    classify,
    decay_scan,
    cone_scan,
    envelope,
    duhamel,
    bound_state
};

inline const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::diagnostic: return "diagnostic";
        case ExperimentKind::cook: return "cook";
        case ExperimentKind::inverse_cook: return "inverse_cook";
        case ExperimentKind::classify: return "classify";
        case ExperimentKind::decay_scan: return "decay_scan";
        case ExperimentKind::cone_scan: return "cone_scan";
        case ExperimentKind::envelope: return "envelope";
        case ExperimentKind::duhamel: return "duhamel";
        case ExperimentKind::bound_state: return "bound_state";
    }
    return "?";
}

struct GridParams {
    int dim = 1;
    double half_width = 20.0;
    int points = 512;
};

struct WindowParams {
    std::string kind = "gaussian"; // gaussian | annulus
    double width = 1.0;            // gaussian
    double band_lo = 0.0, band_hi = 0.0; // annulus
};

struct StateParams {
    std::string kind = "gaussian"; // gaussian | annulus | bound_state
    double center = 0.0;
    double momentum = 0.0;
    double width = 1.0;
    double k_lo = 1.0, k_hi = 2.0; // annulus
};

struct ScheduleParams {
    double dt = 0.01;
    std::vector<double> times;
    std::vector<double> horizons;
    std::vector<double> s_list;
    double horizon = 0.0;     // classify observation span T
    double t0 = 0.0, t1 = 0.0; // duhamel endpoints
    int quad_steps = 8;
    int x_stride = 4;
    double fit_lo = 0.0, fit_hi = 0.0;
    bool stability_check = false;
};

struct ExpectParams {
    bool present = false;
    std::string classification; // classify
    std::string verdict;        // diagnostic / decay scans
    bool has_fit_range = false;
    double fit_lo = 0.0, fit_hi = 0.0; // fitted decay exponent range
    bool has_tail_range = false;
    double tail_lo = 0.0, tail_hi = 0.0; // Cauchy-tail exponent range
    bool has_max_ratio = false;
    double max_ratio = 0.0; // envelope constant spread bound
    bool has_residual_max = false;
    double residual_max = 0.0; // duhamel residual bound
    bool has_energy = false;
    double energy = 0.0, energy_tol = 1e-4; // bound-state energy
};

struct ExperimentConfig {
    std::string name;
    ExperimentKind kind = ExperimentKind::diagnostic;
    GridParams grid;
    PotentialSpec potential = zero_potential();
    WindowParams window;
    StateParams state;
    RegionSpec region = RegionSpec::gamma_ar(0.5, 10.0);
    ScheduleParams schedule;
    VerdictThresholds thresholds;
    double tau = 0.0;
    int sign = +1;
    double margin = 0.5; // envelope-check cone fattening
    int order = 2;       // envelope-check weight exponent l
    std::string probes = "escort"; // escort | standard
    long seed = 0;
    ExpectParams expect;
    json echo; // the parsed document, for report round-tripping
};

namespace detail {

inline void check_keys(const json& j, const std::string& ctx,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigInvalid("'" + ctx + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ConfigInvalid("unknown key '" + it.key() + "' in '" + ctx + "'");
    }
}

inline double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigInvalid(std::string("key '") + key + "' must be a number");
    return j[key].get<double>();
}

inline std::vector<double> get_list(const json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ConfigInvalid(std::string("key '") + key + "' must be an array");
    for (const auto& v : j[key]) {
        if (!v.is_number())
            throw ConfigInvalid(std::string("key '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::string get_str(const json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ConfigInvalid(std::string("key '") + key + "' must be a string");
    return j[key].get<std::string>();
}

inline ExperimentKind parse_kind(const std::string& s) {
    for (ExperimentKind k :
         {ExperimentKind::diagnostic, ExperimentKind::cook, ExperimentKind::inverse_cook,
          ExperimentKind::classify, ExperimentKind::decay_scan, ExperimentKind::cone_scan,
          ExperimentKind::envelope, ExperimentKind::duhamel, ExperimentKind::bound_state})
        if (s == experiment_name(k)) return k;
    throw ConfigInvalid("unknown experiment kind '" + s + "'");
}

inline PotentialSpec parse_potential(const json& j) {
    check_keys(j, "potential", {"family", "amplitude", "delta", "lambda"});
    const std::string fam = get_str(j, "family", "zero");
    if (fam == "zero") return zero_potential();
    if (fam == "inverse_poly")
        return inverse_poly_potential(get_num(j, "amplitude", 1.0), get_num(j, "delta", 2.0));
    if (fam == "modulated_inverse_poly")
        return modulated_inverse_poly_potential(get_num(j, "amplitude", 1.0),
                                                get_num(j, "delta", 2.0));
    if (fam == "poschl_teller") return poschl_teller_potential(get_num(j, "lambda", 1.0));
    throw ConfigInvalid("unknown potential family '" + fam + "'");
}

inline RegionSpec parse_region(const json& j) {
    check_keys(j, "region", {"variant", "a", "R", "b", "N", "r", "d", "sigma", "sign"});
    const std::string var = get_str(j, "variant", "gamma_ar");
    const int sign = static_cast<int>(get_num(j, "sign", +1));
    if (var == "gamma_ar")
        return RegionSpec::gamma_ar(get_num(j, "a", 0.5), get_num(j, "R", 10.0));
    if (var == "cone_out")
        return RegionSpec::cone_out(get_num(j, "a", 0.5), get_num(j, "b", 10.0), sign);
    if (var == "kan") return RegionSpec::kan(get_num(j, "a", 0.5), get_num(j, "N", 10.0));
    if (var == "tilde_gamma")
        return RegionSpec::tilde_gamma(get_num(j, "a", 0.5), get_num(j, "sigma", 0.5), sign);
    if (var == "xi_d") return RegionSpec::xi_d(get_num(j, "d", 0.5));
    if (var == "xi_dr") return RegionSpec::xi_dr(get_num(j, "d", 0.5), get_num(j, "r", 10.0));
    throw ConfigInvalid("unknown region variant '" + var + "'");
}

} // namespace detail

inline ExperimentConfig parse_config(const json& doc) {
    detail::check_keys(doc, "config",
                       {"name", "experiment", "grid", "potential", "window", "state", "region",
                        "schedule", "thresholds", "tau", "sign", "margin", "order", "probes",
                        "seed", "expect", "output_dir"});
    if (!doc.contains("experiment"))
        throw ConfigInvalid("missing required key 'experiment'");

    ExperimentConfig c;
    c.echo = doc;
    c.kind = detail::parse_kind(detail::get_str(doc, "experiment", ""));
    c.name = detail::get_str(doc, "name", experiment_name(c.kind));
    c.tau = detail::get_num(doc, "tau", 0.0);
    c.sign = static_cast<int>(detail::get_num(doc, "sign", +1));
    c.margin = detail::get_num(doc, "margin", 0.5);
    c.order = static_cast<int>(detail::get_num(doc, "order", 2));
    c.probes = detail::get_str(doc, "probes", "escort");
    c.seed = static_cast<long>(detail::get_num(doc, "seed", 0));
    if (c.probes != "escort" && c.probes != "standard")
        throw ConfigInvalid("key 'probes' must be 'escort' or 'standard'");

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        detail::check_keys(g, "grid", {"dim", "half_width", "points"});
        c.grid.dim = static_cast<int>(detail::get_num(g, "dim", 1));
        c.grid.half_width = detail::get_num(g, "half_width", 20.0);
        c.grid.points = static_cast<int>(detail::get_num(g, "points", 512));
    }
    if (doc.contains("potential")) c.potential = detail::parse_potential(doc["potential"]);
    if (doc.contains("window")) {
        const json& w = doc["window"];
        detail::check_keys(w, "window", {"kind", "width", "band_lo", "band_hi"});
        c.window.kind = detail::get_str(w, "kind", "gaussian");
        c.window.width = detail::get_num(w, "width", 1.0);
        c.window.band_lo = detail::get_num(w, "band_lo", 0.0);
        c.window.band_hi = detail::get_num(w, "band_hi", 0.0);
        if (c.window.kind != "gaussian" && c.window.kind != "annulus")
            throw ConfigInvalid("window kind must be 'gaussian' or 'annulus'");
    }
    if (doc.contains("state")) {
        const json& s = doc["state"];
        detail::check_keys(s, "state",
                           {"kind", "center", "momentum", "width", "k_lo", "k_hi"});
        c.state.kind = detail::get_str(s, "kind", "gaussian");
        c.state.center = detail::get_num(s, "center", 0.0);
        c.state.momentum = detail::get_num(s, "momentum", 0.0);
        c.state.width = detail::get_num(s, "width", 1.0);
        c.state.k_lo = detail::get_num(s, "k_lo", 1.0);
        c.state.k_hi = detail::get_num(s, "k_hi", 2.0);
        if (c.state.kind != "gaussian" && c.state.kind != "annulus" &&
            c.state.kind != "bound_state")
            throw ConfigInvalid("state kind must be 'gaussian', 'annulus' or 'bound_state'");
    }
    if (doc.contains("region")) c.region = detail::parse_region(doc["region"]);
    if (doc.contains("schedule")) {
        const json& s = doc["schedule"];
        detail::check_keys(s, "schedule",
                           {"dt", "times", "horizons", "s_list", "horizon", "t0", "t1",
                            "quad_steps", "x_stride", "fit_lo", "fit_hi", "stability_check"});
        c.schedule.dt = detail::get_num(s, "dt", 0.01);
        c.schedule.times = detail::get_list(s, "times");
        c.schedule.horizons = detail::get_list(s, "horizons");
        c.schedule.s_list = detail::get_list(s, "s_list");
        c.schedule.horizon = detail::get_num(s, "horizon", 0.0);
        c.schedule.t0 = detail::get_num(s, "t0", 0.0);
        c.schedule.t1 = detail::get_num(s, "t1", 0.0);
        c.schedule.quad_steps = static_cast<int>(detail::get_num(s, "quad_steps", 8));
        c.schedule.x_stride = static_cast<int>(detail::get_num(s, "x_stride", 4));
        c.schedule.fit_lo = detail::get_num(s, "fit_lo", 0.0);
        c.schedule.fit_hi = detail::get_num(s, "fit_hi", 0.0);
        if (s.contains("stability_check")) {
            if (!s["stability_check"].is_boolean())
                throw ConfigInvalid("key 'stability_check' must be a boolean");
            c.schedule.stability_check = s["stability_check"].get<bool>();
        }
    }
    if (doc.contains("thresholds")) {
        const json& t = doc["thresholds"];
        detail::check_keys(t, "thresholds",
                           {"decay_ratio", "plateau_ratio", "cauchy_rel", "fit_floor"});
        c.thresholds.decay_ratio = detail::get_num(t, "decay_ratio", c.thresholds.decay_ratio);
        c.thresholds.plateau_ratio =
            detail::get_num(t, "plateau_ratio", c.thresholds.plateau_ratio);
        c.thresholds.cauchy_rel = detail::get_num(t, "cauchy_rel", c.thresholds.cauchy_rel);
        c.thresholds.fit_floor = detail::get_num(t, "fit_floor", c.thresholds.fit_floor);
    }
    if (doc.contains("expect")) {
        const json& e = doc["expect"];
        detail::check_keys(e, "expect",
                           {"classification", "verdict", "fit_exponent_range",
                            "tail_exponent_range", "max_ratio", "residual_max", "energy",
                            "energy_tol"});
        c.expect.present = true;
        c.expect.classification = detail::get_str(e, "classification", "");
        c.expect.verdict = detail::get_str(e, "verdict", "");
        if (e.contains("fit_exponent_range")) {
            auto r = detail::get_list(e, "fit_exponent_range");
            if (r.size() != 2) throw ConfigInvalid("'fit_exponent_range' must hold two numbers");
            c.expect.has_fit_range = true;
            c.expect.fit_lo = r[0];
            c.expect.fit_hi = r[1];
        }
        if (e.contains("tail_exponent_range")) {
            auto r = detail::get_list(e, "tail_exponent_range");
            if (r.size() != 2)
                throw ConfigInvalid("'tail_exponent_range' must hold two numbers");
            c.expect.has_tail_range = true;
            c.expect.tail_lo = r[0];
            c.expect.tail_hi = r[1];
        }
        if (e.contains("max_ratio")) {
            c.expect.has_max_ratio = true;
            c.expect.max_ratio = detail::get_num(e, "max_ratio", 0.0);
        }
        if (e.contains("residual_max")) {
            c.expect.has_residual_max = true;
            c.expect.residual_max = detail::get_num(e, "residual_max", 0.0);
        }
        if (e.contains("energy")) {
            c.expect.has_energy = true;
            c.expect.energy = detail::get_num(e, "energy", 0.0);
            c.expect.energy_tol = detail::get_num(e, "energy_tol", 1e-4);
        }
    }
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

} // namespace wpscat
