// dit — command-line front end: config-driven scenario runs, the built-in
// verification suite, and single-point propagator evaluation.
//
// Exit codes: 0 success, 1 verification failures, 2 config/usage errors,
// 3 numerical failures.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dit/dit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string load_scenario_text(const std::string& arg, std::string& name) {
    if (const char* embedded = dit::bundled_scenario(arg)) {
        name = arg;
        return embedded;
    }
    if (!std::filesystem::exists(arg))
        throw dit::ConfigError("no bundled scenario or config file named \"" + arg +
                               "\" (bundled: free, closed, moshinsky, fig2a, fig2c)");
    name = std::filesystem::path(arg).stem().string();
    return dit::read_text_file(arg);
}

int cmd_run(const std::string& config_arg, const std::string& out_dir) {
    std::string name;
    std::string text;
    dit::ScenarioConfig cfg;
    try {
        text = load_scenario_text(config_arg, name);
        cfg = dit::parse_scenario(text, name);
        if (!out_dir.empty()) cfg.output.directory = out_dir;
    } catch (const dit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const auto res = dit::run_scenario(cfg);
        std::cout << "scenario " << cfg.name << " done (route: " << res.route << ")\n"
                  << "  norm2 = " << dit::fmt_g(res.obs.norm2)
                  << "  transmitted = " << dit::fmt_g(res.obs.transmitted)
                  << "  reflected = " << dit::fmt_g(res.obs.reflected) << "\n"
                  << "  density: " << res.density_path << "\n";
        if (!res.husimi_path.empty()) std::cout << "  husimi:  " << res.husimi_path << "\n";
        std::cout << "  metadata: " << res.metadata_path << "\n";
        return kExitOk;
    } catch (const dit::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (error estimate " << dit::fmt_g(e.error_estimate()) << ")\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_verify(uint64_t seed, double tol_override, bool has_tol, const std::string& json_path) {
    std::vector<dit::ResidualReport> reports;
    try {
        reports = has_tol ? dit::default_suite_with_tolerance(seed, tol_override)
                          : dit::default_suite(seed);
    } catch (const std::exception& e) {
        std::cerr << "numerical failure while running checks: " << e.what() << "\n";
        return kExitNumerical;
    }
    int failures = 0;
    for (const auto& r : reports) {
        std::printf("%-34s %s  max_residual=%.3e  tolerance=%.3e  samples=%d\n", r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.max_residual, r.tolerance, r.samples);
        if (!r.passed) ++failures;
    }
    const std::string json = dit::reports_to_json(reports);
    if (!json_path.empty()) {
        std::ofstream f(json_path, std::ios::binary);
        f << json << '\n';
    } else {
        std::cout << json << '\n';
    }
    if (failures) {
        std::cerr << failures << " check(s) failed\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

int cmd_kpoint(double x, double xp, double t, const std::string& aperture_arg, double m,
               double hbar, const std::string& route, const dit::QuadratureSettings& qs) {
    if (x == 0.0 || xp == 0.0) {
        std::cerr << "usage error: x and x' must be nonzero; the propagator carries a genuine "
                     "discontinuity across the barrier at x = 0, so on-barrier values are "
                     "undefined\n";
        return kExitConfig;
    }
    dit::ApertureFunction ap = dit::StaircaseAperture::constant(1.0);
    try {
        std::string text = aperture_arg;
        if (!text.empty() && text[0] == '@') text = dit::read_text_file(text.substr(1));
        ap = dit::aperture_from_json(nlohmann::json::parse(text));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    const dit::PropagatorQuery q{x, xp, t, {m, hbar}};
    try {
        dit::Complex k;
        std::string used;
        if (route == "closed") {
            if (!dit::is_staircase(ap)) {
                std::cerr << "config error: --route closed needs a staircase aperture\n";
                return kExitConfig;
            }
            k = dit::k_staircase(q, std::get<dit::StaircaseAperture>(ap));
            used = "closed-form-staircase";
        } else if (route == "a") {
            k = dit::k_general_routeA(q, ap, qs);
            used = "quadrature-route-a";
        } else if (route == "b") {
            if (dit::is_staircase(ap)) {
                std::cerr << "config error: --route b needs a sampled aperture\n";
                return kExitConfig;
            }
            k = dit::k_general_routeB(q, std::get<dit::SampledAperture>(ap), qs);
            used = "quadrature-route-b";
        } else {  // auto
            if (dit::is_staircase(ap)) {
                k = dit::k_staircase(q, std::get<dit::StaircaseAperture>(ap));
                used = "closed-form-staircase";
            } else {
                k = dit::k_general_routeB(q, std::get<dit::SampledAperture>(ap), qs);
                used = "quadrature-route-b";
            }
        }
        std::printf("K = %.15g %+.15gi\n", k.real(), k.imag());
        std::printf("route: %s\n", used.c_str());
        return kExitOk;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dit::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (error estimate " << dit::fmt_g(e.error_estimate()) << ")\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dit — exact propagation through a time-dependent absorbing shutter"};
    app.require_subcommand(1);

    std::string config_arg, out_dir;
    auto* run = app.add_subcommand("run", "run a scenario config (bundled name or JSON file)");
    run->add_option("config", config_arg, "bundled scenario name or path to a JSON config")
        ->required();
    run->add_option("--output-dir", out_dir, "override the configured output directory");

    uint64_t seed = 12345;
    double tol_override = 0.0;
    std::string json_path;
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--seed", seed, "sample seed (default 12345)");
    auto* tol_opt = verify->add_option("--tol", tol_override, "override every check tolerance");
    verify->add_option("--json", json_path, "write the JSON report to a file instead of stdout");

    double x = 0.0, xp = 0.0, t = 0.0, m = 1.0, hbar = 1.0;
    std::string aperture_arg, route = "auto";
    dit::QuadratureSettings qs;
    auto* kpoint = app.add_subcommand("kpoint", "evaluate K(x,x';t) at a single point");
    kpoint->add_option("--x", x, "detection point x")->required();
    kpoint->add_option("--xp", xp, "source point x'")->required();
    kpoint->add_option("--t", t, "time t > 0")->required();
    kpoint->add_option("--aperture", aperture_arg, "aperture JSON (inline, or @file)")->required();
    kpoint->add_option("--m", m, "particle mass (default 1)");
    kpoint->add_option("--hbar", hbar, "Planck constant (default 1)");
    kpoint->add_option("--route", route, "auto|closed|a|b (default auto)");
    kpoint->add_option("--rel-tol", qs.rel_tol, "quadrature relative tolerance");
    kpoint->add_option("--abs-tol", qs.abs_tol, "quadrature absolute tolerance");
    kpoint->add_option("--max-subdivisions", qs.max_subdivisions, "quadrature panel budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (run->parsed()) return cmd_run(config_arg, out_dir);
    if (verify->parsed()) return cmd_verify(seed, tol_override, tol_opt->count() > 0, json_path);
    if (kpoint->parsed()) return cmd_kpoint(x, xp, t, aperture_arg, m, hbar, route, qs);
    return kExitConfig;
}
