#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dit/aperture.hpp"
#include "dit/constants.hpp"
#include "dit/grid.hpp"
#include "dit/quadrature.hpp"

#include "json.hpp"

namespace dit {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double x_min, x_max;
    int n;
};

struct HusimiSpec {
    double q_min, q_max;
    int nq;
    double p_min, p_max;
    int np;
};

struct InitialStateSpec {
    enum class Kind { Coherent, Table } kind = Kind::Coherent;
    double q = 0.0, p = 0.0;
    std::string path;
};

struct OutputSpec {
    std::string directory = "out";
    std::string prefix = "run";
};

struct ScenarioConfig {
    PhysicalConstants constants{};
    ApertureFunction aperture = StaircaseAperture::constant(1.0);
    InitialStateSpec initial_state{};
    double time = 1.0;
    GridSpec grid{-1.0, 1.0, 2};
    std::optional<GridSpec> output_grid;
    std::optional<HusimiSpec> husimi;
    QuadratureSettings quadrature{};
    double tail_tolerance = 1e-8;
    OutputSpec output{};
    std::string name;
    std::string canonical;  // canonical JSON text, hashed into output headers
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::string& ctx,
                       std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + ctx);
    }
}

inline double need_number(const nlohmann::json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key)) throw ConfigError("missing key \"" + std::string(key) + "\" in " + ctx);
    if (!obj[key].is_number()) throw ConfigError("key \"" + std::string(key) + "\" in " + ctx + " must be a number");
    return obj[key].get<double>();
}

inline std::vector<double> need_array(const nlohmann::json& obj, const char* key,
                                      const std::string& ctx) {
    if (!obj.contains(key)) throw ConfigError("missing key \"" + std::string(key) + "\" in " + ctx);
    if (!obj[key].is_array()) throw ConfigError("key \"" + std::string(key) + "\" in " + ctx + " must be an array");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) throw ConfigError("array \"" + std::string(key) + "\" in " + ctx + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline ApertureFunction aperture_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigError("aperture: expected an object with a \"type\" string");
    const std::string type = j["type"].get<std::string>();
    try {
        if (type == "staircase") {
            detail::check_keys(j, "aperture(staircase)", {"type", "breakpoints", "levels"});
            return StaircaseAperture(detail::need_array(j, "breakpoints", "aperture"),
                                     detail::need_array(j, "levels", "aperture"));
        }
        if (type == "sampled") {
            detail::check_keys(j, "aperture(sampled)", {"type", "times", "values"});
            return SampledAperture(detail::need_array(j, "times", "aperture"),
                                   detail::need_array(j, "values", "aperture"));
        }
        if (type == "grating") {
            detail::check_keys(j, "aperture(grating)", {"type", "cell", "dt", "periods"});
            if (!j.contains("cell") || !j["cell"].is_object())
                throw ConfigError("aperture(grating): missing \"cell\" object");
            detail::check_keys(j["cell"], "aperture.cell", {"breakpoints", "levels"});
            StaircaseAperture cell(detail::need_array(j["cell"], "breakpoints", "aperture.cell"),
                                   detail::need_array(j["cell"], "levels", "aperture.cell"));
            const double dt = detail::need_number(j, "dt", "aperture(grating)");
            const double periods = detail::need_number(j, "periods", "aperture(grating)");
            if (periods < 1.0 || periods != std::floor(periods))
                throw ConfigError("aperture(grating): periods must be a positive integer");
            return grating(cell, static_cast<int>(periods), dt);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("aperture: ") + e.what());
    }
    throw ConfigError("aperture: unknown type \"" + type + "\" (expected staircase, sampled, or grating)");
}

inline nlohmann::json aperture_to_json(const ApertureFunction& a) {
    if (const auto* st = std::get_if<StaircaseAperture>(&a))
        return {{"type", "staircase"}, {"breakpoints", st->breakpoints()}, {"levels", st->levels()}};
    const auto& sa = std::get<SampledAperture>(a);
    return {{"type", "sampled"}, {"times", sa.times()}, {"values", sa.values()}};
}

namespace detail {

inline GridSpec grid_from_json(const nlohmann::json& j, const std::string& ctx) {
    check_keys(j, ctx, {"x_min", "x_max", "n"});
    GridSpec g{need_number(j, "x_min", ctx), need_number(j, "x_max", ctx),
               static_cast<int>(need_number(j, "n", ctx))};
    if (g.n < 2) throw ConfigError(ctx + ": n must be >= 2");
    if (!(g.x_min < g.x_max)) throw ConfigError(ctx + ": x_min must be < x_max");
    return g;
}

}  // namespace detail

// Parse and validate a scenario document. Unknown keys anywhere are rejected.
inline ScenarioConfig parse_scenario(const std::string& text, const std::string& name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    detail::check_keys(j, "config",
                       {"constants", "aperture", "initial_state", "time", "grid", "output_grid",
                        "husimi", "quadrature", "tail_tolerance", "output"});
    ScenarioConfig cfg;
    cfg.name = name;

    if (j.contains("constants")) {
        detail::check_keys(j["constants"], "constants", {"m", "hbar"});
        if (j["constants"].contains("m")) cfg.constants.m = detail::need_number(j["constants"], "m", "constants");
        if (j["constants"].contains("hbar"))
            cfg.constants.hbar = detail::need_number(j["constants"], "hbar", "constants");
        if (!cfg.constants.valid()) throw ConfigError("constants: m and hbar must be positive");
    }
    if (!j.contains("aperture")) throw ConfigError("config: missing \"aperture\"");
    cfg.aperture = aperture_from_json(j["aperture"]);

    if (!j.contains("initial_state")) throw ConfigError("config: missing \"initial_state\"");
    {
        const auto& s = j["initial_state"];
        if (!s.is_object() || !s.contains("type") || !s["type"].is_string())
            throw ConfigError("initial_state: expected an object with a \"type\" string");
        const std::string type = s["type"].get<std::string>();
        if (type == "coherent") {
            detail::check_keys(s, "initial_state(coherent)", {"type", "q", "p"});
            cfg.initial_state.kind = InitialStateSpec::Kind::Coherent;
            cfg.initial_state.q = detail::need_number(s, "q", "initial_state");
            cfg.initial_state.p = detail::need_number(s, "p", "initial_state");
        } else if (type == "table") {
            detail::check_keys(s, "initial_state(table)", {"type", "path"});
            if (!s.contains("path") || !s["path"].is_string())
                throw ConfigError("initial_state(table): missing \"path\" string");
            cfg.initial_state.kind = InitialStateSpec::Kind::Table;
            cfg.initial_state.path = s["path"].get<std::string>();
        } else {
            throw ConfigError("initial_state: unknown type \"" + type + "\"");
        }
    }
    cfg.time = detail::need_number(j, "time", "config");
    if (!(cfg.time > 0.0)) throw ConfigError("config: time must be positive");
    if (!j.contains("grid")) throw ConfigError("config: missing \"grid\"");
    cfg.grid = detail::grid_from_json(j["grid"], "grid");
    if (j.contains("output_grid")) cfg.output_grid = detail::grid_from_json(j["output_grid"], "output_grid");
    if (j.contains("husimi")) {
        const auto& h = j["husimi"];
        detail::check_keys(h, "husimi", {"q_min", "q_max", "nq", "p_min", "p_max", "np"});
        cfg.husimi = HusimiSpec{detail::need_number(h, "q_min", "husimi"),
                                detail::need_number(h, "q_max", "husimi"),
                                static_cast<int>(detail::need_number(h, "nq", "husimi")),
                                detail::need_number(h, "p_min", "husimi"),
                                detail::need_number(h, "p_max", "husimi"),
                                static_cast<int>(detail::need_number(h, "np", "husimi"))};
        if (cfg.husimi->nq < 2 || cfg.husimi->np < 2) throw ConfigError("husimi: nq and np must be >= 2");
        if (!(cfg.husimi->q_min < cfg.husimi->q_max) || !(cfg.husimi->p_min < cfg.husimi->p_max))
            throw ConfigError("husimi: empty extents");
    }
    if (j.contains("quadrature")) {
        const auto& q = j["quadrature"];
        detail::check_keys(q, "quadrature", {"rel_tol", "abs_tol", "max_subdivisions"});
        if (q.contains("rel_tol")) cfg.quadrature.rel_tol = detail::need_number(q, "rel_tol", "quadrature");
        if (q.contains("abs_tol")) cfg.quadrature.abs_tol = detail::need_number(q, "abs_tol", "quadrature");
        if (q.contains("max_subdivisions"))
            cfg.quadrature.max_subdivisions =
                static_cast<int>(detail::need_number(q, "max_subdivisions", "quadrature"));
        if (!(cfg.quadrature.rel_tol > 0.0) || !(cfg.quadrature.abs_tol > 0.0) ||
            cfg.quadrature.max_subdivisions < 1)
            throw ConfigError("quadrature: tolerances must be positive and max_subdivisions >= 1");
    }
    if (j.contains("tail_tolerance")) {
        cfg.tail_tolerance = detail::need_number(j, "tail_tolerance", "config");
        if (!(cfg.tail_tolerance > 0.0)) throw ConfigError("config: tail_tolerance must be positive");
    }
    if (j.contains("output")) {
        detail::check_keys(j["output"], "output", {"directory", "prefix"});
        if (j["output"].contains("directory")) {
            if (!j["output"]["directory"].is_string()) throw ConfigError("output.directory must be a string");
            cfg.output.directory = j["output"]["directory"].get<std::string>();
        }
        if (j["output"].contains("prefix")) {
            if (!j["output"]["prefix"].is_string()) throw ConfigError("output.prefix must be a string");
            cfg.output.prefix = j["output"]["prefix"].get<std::string>();
        }
    }
    cfg.canonical = j.dump();  // keys sorted by nlohmann's ordered storage
    return cfg;
}

}  // namespace dit
