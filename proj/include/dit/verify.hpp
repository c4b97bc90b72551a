#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dit/evolution.hpp"
#include "dit/propagator.hpp"

#include "json.hpp"

namespace dit {

struct ResidualReport {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    int samples = 0;
    std::string detail;
};

inline ResidualReport make_report(std::string name, double max_residual, double tolerance,
                                  int samples, std::string detail = {}) {
    ResidualReport r{std::move(name), max_residual, tolerance, false, samples, std::move(detail)};
    r.passed = r.max_residual <= r.tolerance;
    return r;
}

inline std::string reports_to_json(const std::vector<ResidualReport>& reports) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) {
        j.push_back({{"name", r.name},
                     {"max_residual", r.max_residual},
                     {"tolerance", r.tolerance},
                     {"passed", r.passed},
                     {"samples", r.samples},
                     {"detail", r.detail}});
    }
    return j.dump(2);
}

// Deterministic uniforms independent of the standard library's distributions.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double uniform(double a, double b) {
        return a + (b - a) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    }
    double sided(double lo, double hi) {  // magnitude in [lo,hi], random sign
        const double v = uniform(lo, hi);
        return (gen() & 1u) ? v : -v;
    }
};

// ---------------------------------------------------------------------------
// Point checks
// ---------------------------------------------------------------------------

// |(i d/dt + (hbar/2m) d2/dx2) K| / |K| by central differences, staircase form.
inline double tdse_residual(const PropagatorQuery& q, const StaircaseAperture& a, double h) {
    if (!(std::abs(q.x) > 3.0 * h))
        throw std::domain_error("tdse_residual: stencil straddles the barrier (|x| <= 3h)");
    if (!(q.t - h > 0.0)) throw std::domain_error("tdse_residual: t - h must stay positive");
    for (double b : a.breakpoints())
        if (std::abs(b - q.t) <= h)
            throw std::domain_error("tdse_residual: t-stencil straddles an aperture breakpoint");
    const auto K = [&](double x, double t) { return k_staircase({x, q.xp, t, q.pc}, a); };
    const Complex kc = K(q.x, q.t);
    const Complex dt = (K(q.x, q.t + h) - K(q.x, q.t - h)) / (2.0 * h);
    const Complex dxx = (K(q.x + h, q.t) - 2.0 * kc + K(q.x - h, q.t)) / (h * h);
    const Complex res = Complex(0.0, 1.0) * dt + (q.pc.hbar / (2.0 * q.pc.m)) * dxx;
    return std::abs(res) / std::abs(kc);
}

struct DiscontinuityResidual {
    double value_gap;       // relative to |K0(-x',t)|
    double derivative_gap;  // relative to the d/dx K0 scale
};

// One-sided limits at the barrier via 3-point Richardson in eps:
//   K(0+,x';t) - K(0-,x';t)      vs  sgn(x') [1-chi(t)] K0(-x',t)
//   dK/dx(0+)  - dK/dx(0-)       vs  sgn(x') [1-chi(t)] dK0/dz(-x',t)
inline DiscontinuityResidual discontinuity_residual(double xp, double t,
                                                    const StaircaseAperture& a, double eps,
                                                    const PhysicalConstants& pc = {}) {
    for (double b : a.breakpoints())
        if (std::abs(b - t) <= 1e-12 * std::max(1.0, t))
            throw std::domain_error("discontinuity_residual: t coincides with a breakpoint");
    auto richardson = [](Complex f1, Complex f2, Complex f3) {
        return (f1 - 6.0 * f2 + 8.0 * f3) / 3.0;  // steps eps, eps/2, eps/4
    };
    auto gap_of = [&](auto&& eval) {
        const Complex g1 = eval(eps) - eval(-eps);
        const Complex g2 = eval(0.5 * eps) - eval(-0.5 * eps);
        const Complex g3 = eval(0.25 * eps) - eval(-0.25 * eps);
        return richardson(g1, g2, g3);
    };
    const Complex gap_v = gap_of([&](double x) { return k_staircase({x, xp, t, pc}, a); });
    const Complex gap_d = gap_of([&](double x) { return k_staircase_dx({x, xp, t, pc}, a); });

    const double chit = a.eval(t);
    const Complex want_v = sgn(xp) * (1.0 - chit) * free_propagator(-xp, t, pc);
    const Complex want_d = sgn(xp) * (1.0 - chit) * free_propagator_dz(-xp, t, pc);
    const double scale_v = std::abs(free_propagator(-xp, t, pc));
    const double scale_d = std::max(std::abs(free_propagator_dz(-xp, t, pc)), scale_v);
    return {std::abs(gap_v - want_v) / scale_v, std::abs(gap_d - want_d) / scale_d};
}

// | int K(x,x';t) f(x') dx' - expected | for a narrow Gaussian test function
// supported away from the barrier.
inline double delta_limit_error(double x, double center, double sigma, double t,
                                const ApertureFunction& a, Complex expected,
                                const PhysicalConstants& pc = {}) {
    if (!(std::abs(center) > 8.0 * sigma))
        throw std::domain_error("delta_limit_error: test-function support touches the barrier");
    const double lo = center - 8.0 * sigma, hi = center + 8.0 * sigma;
    const double kmax = pc.m * (std::abs(x - lo) + std::abs(x - hi)) / (pc.hbar * t);
    int n = static_cast<int>(std::ceil((hi - lo) * std::max(kmax * 2.0, 64.0)));
    n = std::clamp(n | 1, 257, 2000001);
    const double dx = (hi - lo) / (n - 1);
    std::vector<Complex> vals(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double xs = lo + i * dx;
        const double f = std::exp(-0.5 * (xs - center) * (xs - center) / (sigma * sigma));
        vals[static_cast<size_t>(i)] = k_propagator({x, xs, t, pc}, a) * f;
    }
    return std::abs(composite_simpson(vals, dx) - expected);
}

// Finite-difference residual of d/dt Phi + ((x-x')/t) d/dx Phi + i (hbar/m) Phi (d/dx Phi)^2.
inline double phi_identity_residual(double x, double xp, double t, double tau, double h,
                                    const PhysicalConstants& pc = {}) {
    const Complex pt = (phi(x, xp, t + h, tau, pc) - phi(x, xp, t - h, tau, pc)) / (2.0 * h);
    const Complex px = (phi(x + h, xp, t, tau, pc) - phi(x - h, xp, t, tau, pc)) / (2.0 * h);
    const Complex p0 = phi(x, xp, t, tau, pc);
    return std::abs(pt + ((x - xp) / t) * px + Complex(0.0, pc.hbar / pc.m) * p0 * px * px);
}

// Hand-instantiated single-jump (Moshinsky) propagator for t > t1, written
// out independently of the staircase accumulation.
inline Complex moshinsky_reference(double x, double xp, double t, double t1,
                                   const PhysicalConstants& pc = {}) {
    if (!(t1 > 0.0 && t1 < t)) throw std::domain_error("moshinsky_reference: need 0 < t1 < t");
    const double r = std::sqrt(pc.m / (2.0 * pc.hbar * t) * 0.5);
    const Complex root_i_inv(r, -r);  // sqrt(m/(2 i hbar t))
    const Complex ph = root_i_inv * (x * std::sqrt(t1 / (t - t1)) + xp * std::sqrt((t - t1) / t1));
    const double s = pc.m * (x - xp) * (x - xp) / (2.0 * pc.hbar * t);
    const double r0 = std::sqrt(pc.m / (2.0 * pi * pc.hbar * t) * 0.5);
    const Complex k0 = Complex(r0, -r0) * Complex(std::cos(s), std::sin(s));
    return 0.5 * (1.0 + sgn(xp) * erf_complex(ph)) * k0;
}

// ---------------------------------------------------------------------------
// Default suite
// ---------------------------------------------------------------------------

inline StaircaseAperture fig2a_grating(int periods = 27, double dt = 0.056) {
    return grating(StaircaseAperture({dt}, {0.0, 1.0}), periods, dt);
}

inline StaircaseAperture fig2c_grating(int periods = 18, double dt = 0.056) {
    return grating(StaircaseAperture({dt, 2.0 * dt}, {0.0, 0.5, 1.0}), periods, dt);
}

inline std::vector<ResidualReport> default_suite(uint64_t seed) {
    std::vector<ResidualReport> out;
    const PhysicalConstants pc{};
    const StaircaseAperture open = StaircaseAperture::constant(1.0);
    const StaircaseAperture closed = StaircaseAperture::constant(0.0);
    const StaircaseAperture grat = fig2a_grating();

    // tdse: free case, random off-barrier points
    {
        Rng rng(seed);
        const double h = 1e-3;
        double worst = 0.0;
        const int n = 40;
        for (int i = 0; i < n; ++i) {
            const double x = rng.sided(0.7, 4.0);
            const double xp = rng.sided(0.7, 4.0);
            const double t = rng.uniform(1.5, 4.0);
            worst = std::max(worst, tdse_residual({x, xp, t, pc}, open, h));
        }
        out.push_back(make_report("tdse/free-random", worst, 1e-4, n, "h=1e-3, chi=1"));
    }
    // tdse: grating, absolute residual and O(h^2) order on both sides. A short
    // grating keeps every jump a finite distance from t, so the erf terms'
    // time-frequencies stay within reach of the finite-difference stencil; the
    // full 27-period profile would need h below the rounding floor.
    {
        // h chosen so the h^2 truncation stays well above the rounding floor
        // of the second difference at every sample point
        const double h = 2e-4;
        const double t = 1.2;  // grating jumps end at 0.504
        const StaircaseAperture short_grat = fig2a_grating(5);
        const std::vector<std::pair<double, double>> pts{
            {5.0, -10.0}, {-5.0, -10.0}, {3.2, 7.5}, {-3.2, -7.5}};
        double worst_abs = 0.0, worst_order = 0.0;
        for (auto [x, xp] : pts) {
            const double r1 = tdse_residual({x, xp, t, pc}, short_grat, h);
            const double r2 = tdse_residual({x, xp, t, pc}, short_grat, 2.0 * h);
            worst_abs = std::max(worst_abs, r1);
            worst_order = std::max(worst_order, std::abs(std::log2(r2 / r1) - 2.0));
        }
        out.push_back(make_report("tdse/grating-residual", worst_abs, 1e-2,
                                  static_cast<int>(pts.size()), "h=2e-4, 5-period grating, t=1.2"));
        out.push_back(make_report("tdse/grating-order", worst_order, 0.7,
                                  static_cast<int>(pts.size()),
                                  "|log2(residual(2h)/residual(h)) - 2|"));
    }
    // discontinuity conditions
    {
        const double eps = 1e-3;
        double worst = 0.0;
        int n = 0;
        auto add = [&](const StaircaseAperture& a, double xp, double t) {
            const auto r = discontinuity_residual(xp, t, a, eps, pc);
            worst = std::max({worst, r.value_gap, r.derivative_gap});
            ++n;
        };
        for (double xp : {-10.0, -3.0, 4.0}) {
            add(closed, xp, 1.0);
            add(closed, xp, 3.0);
            add(open, xp, 2.0);
            add(StaircaseAperture({0.5}, {0.0, 1.0}), xp, 3.0);   // open by then: gap 0
            add(StaircaseAperture({0.3}, {0.0, 0.5}), xp, 2.0);   // chi(t)=0.5: gap nonzero
        }
        out.push_back(make_report("discontinuity/kottler-gaps", worst, 1e-6, n,
                                  "3-point Richardson, eps=1e-3"));
    }
    // initial condition (delta limit)
    {
        const StaircaseAperture moshinsky({0.5}, {0.0, 1.0});
        const double sigma = 0.2;
        const std::vector<double> ts{1e-2, 5e-3, 2.5e-3};
        // same side: limit is f(x) = 1 at x = center
        std::vector<double> errs;
        for (double t : ts)
            errs.push_back(delta_limit_error(-5.0, -5.0, sigma, t, ApertureFunction(moshinsky),
                                             Complex(1.0, 0.0), pc));
        const bool monotone = errs[0] >= errs[1] && errs[1] >= errs[2];
        out.push_back(make_report("delta-limit/same-side", monotone ? errs[2] : 1.0, 0.05, 3,
                                  "errors must decrease along t = 1e-2, 5e-3, 2.5e-3"));
        // prefactor identity: Xi + (1-Xi) chi(0) = 1 on the same side regardless of chi(0)
        const StaircaseAperture half = StaircaseAperture::constant(0.3);
        const double e_half = delta_limit_error(-5.0, -5.0, sigma, 2.5e-3, ApertureFunction(half),
                                                Complex(1.0, 0.0), pc);
        out.push_back(make_report("delta-limit/same-side-prefactor", e_half, 0.05, 1,
                                  "constant chi = 0.3, same side"));
        // opposite sides with chi(0) = 0: the limit vanishes
        const double e_opp = delta_limit_error(-5.0, 5.0, sigma, 5e-3, ApertureFunction(closed),
                                               Complex(0.0, 0.0), pc);
        out.push_back(make_report("delta-limit/opposite-side", e_opp, 1e-12, 1,
                                  "chi = 0: nothing crosses"));
    }
    // Phi identity
    {
        const double h = 1e-4;
        out.push_back(make_report("phi-identity/symmetric",
                                  phi_identity_residual(1.3, 1.3, 2.0, 1.0, h, pc), 1e-8, 1,
                                  "x = x', tau = t/2, h = 1e-4"));
        Rng rng(seed + 1);
        double worst = 0.0;
        const int n = 100;
        for (int i = 0; i < n; ++i) {
            const double x = rng.sided(0.3, 8.0);
            const double xp = rng.sided(0.3, 8.0);
            const double t = rng.uniform(0.5, 4.0);
            const double tau = rng.uniform(0.2, 0.8) * t;
            worst = std::max(worst, phi_identity_residual(x, xp, t, tau, h, pc));
        }
        out.push_back(make_report("phi-identity/random", worst, 2e-5, n, "h = 1e-4"));
        // homogeneity: Phi(2x, 2x') = 2 Phi(x, x') exactly
        const Complex a2 = phi(2.0 * 1.7, 2.0 * -0.9, 2.3, 0.7, pc);
        const Complex b2 = 2.0 * phi(1.7, -0.9, 2.3, 0.7, pc);
        out.push_back(make_report("phi-identity/scaling", std::abs(a2 - b2), 0.0, 1,
                                  "power-of-two scaling is exact"));
    }
    // Moshinsky reduction
    {
        double worst = 0.0;
        int n = 0;
        for (auto [x, xp] : std::vector<std::pair<double, double>>{
                 {5.0, -10.0}, {2.0, -1.0}, {-4.0, -6.0}, {1.5, 3.5}}) {
            const double t = 3.0, t1 = 0.5;
            const Complex ref = moshinsky_reference(x, xp, t, t1, pc);
            const Complex got = k_staircase({x, xp, t, pc}, StaircaseAperture({t1}, {0.0, 1.0}));
            worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
            ++n;
        }
        out.push_back(make_report("moshinsky/reference", worst, 1e-13, n,
                                  "independent two-term instantiation"));

        QuadratureSettings qs;
        qs.max_subdivisions = 20000;
        const PropagatorQuery q{5.0, -10.0, 3.0, pc};
        const StaircaseAperture mosh({0.5}, {0.0, 1.0});
        const Complex closed_form = k_staircase(q, mosh);
        const Complex via_quadrature = k_general_routeA(q, ApertureFunction(mosh), qs);
        out.push_back(make_report("moshinsky/route-a",
                                  std::abs(closed_form - via_quadrature) / std::abs(closed_form),
                                  1e-6, 1, "closed form vs real-time quadrature"));

        // endpoint limits of the jump time
        const PropagatorQuery ql{5.0, -10.0, 3.0, pc};
        const Complex k0 = free_propagator(ql.x - ql.xp, ql.t, pc);
        const Complex near0 = k_staircase(ql, StaircaseAperture({1e-8}, {0.0, 1.0}));
        const Complex neart = k_staircase(ql, StaircaseAperture({3.0 - 1e-8}, {0.0, 1.0}));
        const Complex att = k_staircase(ql, StaircaseAperture({3.0}, {0.0, 1.0}));
        const double lim0 = std::abs(near0 - k0) / std::abs(k0);
        const double limt = std::abs(neart - att) / std::abs(k0);
        out.push_back(make_report("moshinsky/jump-time-limits", std::max(lim0, limt), 1e-4, 2,
                                  "t1 -> 0 gives K0; t1 -> t matches the t1 = t convention"));
    }

    std::sort(out.begin(), out.end(),
              [](const ResidualReport& a, const ResidualReport& b) { return a.name < b.name; });
    return out;
}

inline std::vector<ResidualReport> default_suite_with_tolerance(uint64_t seed, double tol_override) {
    auto reports = default_suite(seed);
    for (auto& r : reports) {
        r.tolerance = tol_override;
        r.passed = r.max_residual <= r.tolerance;
    }
    return reports;
}

}  // namespace dit
