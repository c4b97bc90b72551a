#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>

#include "dit/config.hpp"
#include "dit/evolution.hpp"
#include "dit/io.hpp"
#include "dit/version.hpp"

namespace dit {

struct RunResult {
    Wavefunction psi;
    std::optional<PhaseSpaceGrid> husimi_grid;
    Observables obs;
    std::string route;
    uint64_t config_hash = 0;
    double evolve_seconds = 0.0;
    double husimi_seconds = 0.0;
    std::string density_path;
    std::string husimi_path;
    std::string metadata_path;
};

namespace detail {

inline Wavefunction load_amplitude_table(const std::string& path, const SpaceGrid& grid) {
    std::istringstream in(read_text_file(path));
    std::vector<double> xs, re, im;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double x, r, i;
        if (!(row >> x >> r >> i))
            throw ConfigError("initial-state table " + path + ": expected columns x re im");
        xs.push_back(x);
        re.push_back(r);
        im.push_back(i);
    }
    if (static_cast<int>(xs.size()) != grid.n)
        throw ConfigError("initial-state table " + path + ": row count does not match grid");
    Wavefunction psi{grid, std::vector<Complex>(xs.size()), 0.0};
    for (size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - grid.point(static_cast<int>(i))) > 1e-9 * std::max(1.0, grid.dx()))
            throw ConfigError("initial-state table " + path + ": x column does not match grid nodes");
        psi.amp[i] = Complex(re[i], im[i]);
    }
    return psi;
}

}  // namespace detail

// Execute a scenario: evolve the initial state, optionally compute the Husimi
// distribution, and write the density table, Husimi table and metadata record.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
    using clock = std::chrono::steady_clock;
    RunResult out;
    out.config_hash = fnv1a64(cfg.canonical);
    const SpaceGrid src(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n);
    const GridSpec og = cfg.output_grid.value_or(cfg.grid);
    const SpaceGrid dst(og.x_min, og.x_max, og.n);

    Wavefunction psi0 = cfg.initial_state.kind == InitialStateSpec::Kind::Coherent
                            ? coherent_state(cfg.initial_state.q, cfg.initial_state.p, src)
                            : detail::load_amplitude_table(cfg.initial_state.path, src);
    const double norm0 = psi0.norm2();

    EvolveOptions opt;
    opt.quadrature = cfg.quadrature;
    opt.tail_tolerance = cfg.tail_tolerance;
    out.route = is_staircase(cfg.aperture) ? "closed-form-staircase" : "quadrature-route-b";

    const auto t0 = clock::now();
    out.psi = evolve(psi0, cfg.aperture, cfg.time, dst, cfg.constants, opt);
    out.evolve_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.obs = observables(out.psi);

    if (cfg.husimi) {
        const auto& h = *cfg.husimi;
        PhaseSpaceGrid ps(h.q_min, h.q_max, h.nq, h.p_min, h.p_max, h.np);
        const auto t1 = clock::now();
        husimi(out.psi, ps);
        out.husimi_seconds = std::chrono::duration<double>(clock::now() - t1).count();
        out.husimi_grid = std::move(ps);
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.output.directory);
    const std::string base = cfg.output.directory + "/" + cfg.output.prefix;
    const std::string hash = hex64(out.config_hash);

    auto common_headers = [&](TableWriter& w) {
        w.header(std::string("dit ") + version);
        w.header("scenario: " + cfg.name);
        w.header("config_hash: " + hash);
        w.header("constants: m=" + fmt_g(cfg.constants.m) + " hbar=" + fmt_g(cfg.constants.hbar));
        w.header("aperture_route: " + out.route);
        w.header("quadrature: rel=" + fmt_g(cfg.quadrature.rel_tol) +
                 " abs=" + fmt_g(cfg.quadrature.abs_tol) +
                 " max_subdivisions=" + std::to_string(cfg.quadrature.max_subdivisions));
        w.header("time: " + fmt_g(cfg.time));
    };

    {
        TableWriter w(base + "_density.tsv");
        common_headers(w);
        w.header("source_grid: [" + fmt_g(src.x_min) + ", " + fmt_g(src.x_max) + "] n=" +
                 std::to_string(src.n));
        w.header("output_grid: [" + fmt_g(dst.x_min) + ", " + fmt_g(dst.x_max) + "] n=" +
                 std::to_string(dst.n));
        w.header("columns: x re im density");
        for (int i = 0; i < dst.n; ++i) {
            const Complex v = out.psi.amp[static_cast<size_t>(i)];
            w.row({dst.point(i), v.real(), v.imag(), std::norm(v)});
        }
        w.write();
        out.density_path = base + "_density.tsv";
    }
    if (out.husimi_grid) {
        TableWriter w(base + "_husimi.tsv");
        common_headers(w);
        w.header("columns: q p H");
        const auto& ps = *out.husimi_grid;
        for (int i = 0; i < ps.nq; ++i)
            for (int j = 0; j < ps.np; ++j) w.row({ps.q(i), ps.p(j), ps.at(i, j)});
        w.write();
        out.husimi_path = base + "_husimi.tsv";
    }
    {
        nlohmann::json meta{
            {"tool", "dit"},
            {"version", version},
            {"scenario", cfg.name},
            {"config_hash", hash},
            {"config", nlohmann::json::parse(cfg.canonical)},
            {"route", out.route},
            {"observables",
             {{"norm2_initial", norm0},
              {"norm2", out.obs.norm2},
              {"transmitted", out.obs.transmitted},
              {"reflected", out.obs.reflected},
              {"absorbed_fraction", norm0 > 0.0 ? 1.0 - out.obs.norm2 / norm0 : 0.0}}},
            {"timings_seconds",
             {{"evolve", out.evolve_seconds}, {"husimi", out.husimi_seconds}}},
            {"outputs", {{"density", out.density_path}, {"husimi", out.husimi_path}}}};
        std::ofstream f(base + "_meta.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + base + "_meta.json");
        f << meta.dump(2) << '\n';
        out.metadata_path = base + "_meta.json";
    }
    return out;
}

}  // namespace dit
