#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dit/propagator.hpp"
#include "dit/verify.hpp"

using dit::ApertureFunction;
using dit::Complex;
using dit::PropagatorQuery;
using dit::SampledAperture;
using dit::StaircaseAperture;

namespace {

double uniform(std::mt19937_64& g, double a, double b) {
    return a + (b - a) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
}

double sided(std::mt19937_64& g, double lo, double hi) {
    const double v = uniform(g, lo, hi);
    return (g() & 1u) ? v : -v;
}

}  // namespace

TEST_CASE("xi and u_factor") {
    CHECK(dit::xi(1.0, 2.0) == 1.0);
    CHECK(dit::xi(-1.0, 2.0) == 0.0);
    CHECK(dit::xi(-3.0, -0.1) == 1.0);
    CHECK_THROWS_AS(dit::xi(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(dit::xi(1.0, 0.0), std::domain_error);

    CHECK(dit::u_factor(1.0, -1.0, 2.0, 1.0) == Catch::Approx(1.0));
    // root of the bracket: x/(t-tau) = x'/tau
    CHECK(dit::u_factor(1.0, 1.0, 2.0, 1.0) == 0.0);
    // reflecting both points through the barrier leaves u unchanged
    CHECK(dit::u_factor(-1.3, 2.7, 3.0, 1.1) == dit::u_factor(1.3, -2.7, 3.0, 1.1));
    CHECK_THROWS_AS(dit::u_factor(1.0, 1.0, 2.0, 2.0), std::domain_error);
}

TEST_CASE("staircase closed form: exact reductions") {
    const StaircaseAperture open = StaircaseAperture::constant(1.0);
    const StaircaseAperture closed = StaircaseAperture::constant(0.0);
    std::mt19937_64 g(101);
    for (int i = 0; i < 200; ++i) {
        const PropagatorQuery q{sided(g, 0.1, 20.0), sided(g, 0.1, 20.0), uniform(g, 0.1, 5.0)};
        const Complex k0 = dit::free_propagator(q.x - q.xp, q.t, q.pc);
        CHECK(std::abs(dit::k_staircase(q, open) - k0) <= 1e-15 * std::abs(k0));
        CHECK(dit::k_staircase(q, closed) == dit::xi(q.x, q.xp) * k0);  // exact
    }
    // constant transparency c: K = Xi (1-c) K0 + c K0
    for (double c : {0.25, 0.5, 0.9}) {
        const PropagatorQuery q{3.0, -7.0, 2.0};
        const Complex k0 = dit::free_propagator(q.x - q.xp, q.t, q.pc);
        const Complex want = dit::xi(q.x, q.xp) * (1.0 - c) * k0 + c * k0;
        CHECK(std::abs(dit::k_staircase(q, StaircaseAperture::constant(c)) - want) < 1e-15);
    }
    CHECK_THROWS_AS(dit::k_staircase({0.0, 1.0, 1.0}, open), std::domain_error);
    CHECK_THROWS_AS(dit::k_staircase({1.0, 1.0, -1.0}, open), std::domain_error);
}

TEST_CASE("staircase closed form is right-continuous across a jump at t") {
    const PropagatorQuery q{5.0, -10.0, 3.0};
    const Complex k0 = dit::free_propagator(q.x - q.xp, q.t, q.pc);
    const Complex at_t = dit::k_staircase(q, StaircaseAperture({3.0}, {0.0, 1.0}));
    CHECK(at_t == dit::xi(q.x, q.xp) * k0);  // jump at t is ignored entirely
    const Complex before = dit::k_staircase(q, StaircaseAperture({3.0 - 1e-9}, {0.0, 1.0}));
    CHECK(std::abs(before - at_t) < 1e-4 * std::abs(k0));
    // slightly larger t brings the jump inside and stays close
    const Complex after = dit::k_staircase({q.x, q.xp, 3.0 + 1e-9, q.pc},
                                           StaircaseAperture({3.0}, {0.0, 1.0}));
    CHECK(std::abs(after - at_t) < 1e-4 * std::abs(k0));
}

TEST_CASE("route A: exact and tolerance reductions") {
    dit::QuadratureSettings qs;
    qs.max_subdivisions = 20000;
    const ApertureFunction open = StaircaseAperture::constant(1.0);
    const ApertureFunction closed = StaircaseAperture::constant(0.0);

    // chi = 0: the integrand vanishes, so the result is exactly Xi K0
    for (const auto& [x, xp] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {-1.0, 2.0}}) {
        const PropagatorQuery q{x, xp, 1.7};
        CHECK(dit::k_general_routeA(q, closed, qs) ==
              dit::xi(x, xp) * dit::free_propagator(x - xp, q.t, q.pc));
    }

    // chi = 1: full quadrature machinery must reproduce the free propagator
    for (const auto& [x, xp, t] : std::vector<std::array<double, 3>>{{5.0, -10.0, 3.0},
                                                                      {2.0, 3.0, 1.0},
                                                                      {-4.0, -1.5, 2.0},
                                                                      {0.5, -0.4, 0.25},
                                                                      {12.0, -9.0, 4.0}}) {
        const PropagatorQuery q{x, xp, t};
        const Complex k0 = dit::free_propagator(x - xp, t, q.pc);
        const Complex got = dit::k_general_routeA(q, open, qs);
        INFO("x=" << x << " xp=" << xp << " t=" << t);
        CHECK(std::abs(got - k0) <= 1e-7 * std::abs(k0));
    }

    // constant transparency
    for (double c : {0.3, 0.7}) {
        const PropagatorQuery q{4.0, -2.0, 2.0};
        const Complex k0 = dit::free_propagator(q.x - q.xp, q.t, q.pc);
        const Complex want = dit::xi(q.x, q.xp) * (1.0 - c) * k0 + c * k0;
        const Complex got = dit::k_general_routeA(q, ApertureFunction(StaircaseAperture::constant(c)), qs);
        CHECK(std::abs(got - want) <= 1e-7 * std::abs(k0));
    }
}

TEST_CASE("route A agrees with the staircase closed form on a small grating") {
    dit::QuadratureSettings qs;
    qs.max_subdivisions = 40000;
    const StaircaseAperture grat = dit::grating(StaircaseAperture({0.056}, {0.0, 1.0}), 4, 0.056);
    std::mt19937_64 g(202);
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        const PropagatorQuery q{sided(g, 0.4, 12.0), sided(g, 0.4, 12.0), uniform(g, 0.5, 3.0)};
        const Complex a = dit::k_staircase(q, grat);
        const Complex b = dit::k_general_routeA(q, ApertureFunction(grat), qs);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("route B: constant, ramp, and steep-ramp limits") {
    dit::QuadratureSettings qs;
    qs.max_subdivisions = 20000;

    // constant sampled aperture: derivative term vanishes
    for (double v : {0.0, 0.5, 1.0}) {
        const SampledAperture flat({0.0, 1.0}, {v, v});
        const PropagatorQuery q{2.5, -6.0, 2.0};
        const Complex k0 = dit::free_propagator(q.x - q.xp, q.t, q.pc);
        const Complex want = dit::xi(q.x, q.xp) * (1.0 - v) * k0 + v * k0;
        CHECK(std::abs(dit::k_general_routeB(q, flat, qs) - want) < 1e-13);
    }

    // full linear ramp 0 -> 1 over [0,t]: route B vs route A
    {
        const PropagatorQuery q{5.0, -10.0, 3.0};
        const SampledAperture ramp({0.0, 3.0}, {0.0, 1.0});
        const Complex b = dit::k_general_routeB(q, ramp, qs);
        const Complex a = dit::k_general_routeA(q, ApertureFunction(ramp), qs);
        CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
    }

    // steep linear ramps converge to the staircase closed form as width -> 0
    {
        const PropagatorQuery q{5.0, -10.0, 3.0};
        const StaircaseAperture mosh({0.5}, {0.0, 1.0});
        const Complex target = dit::k_staircase(q, mosh);
        double prev = 1e30;
        for (double w : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
            const SampledAperture ramp({0.0, 0.5 - 0.5 * w, 0.5 + 0.5 * w}, {0.0, 0.0, 1.0});
            const double err = std::abs(dit::k_general_routeB(q, ramp, qs) - target);
            CHECK(err < 0.9 * prev + 1e-12);
            prev = err;
        }
        CHECK(prev < 2e-3 * std::abs(target));
    }
}

TEST_CASE("composition property: violated under absorption, restored after shutter-off") {
    dit::QuadratureSettings qs;
    qs.rel_tol = 1e-9;
    qs.abs_tol = 1e-13;
    qs.max_subdivisions = 60000;

    // free case composes (sanity of the xi-integral machinery)
    {
        const PropagatorQuery q{5.0, -10.0, 3.0};
        const auto d = dit::composition_defect(q, ApertureFunction(StaircaseAperture::constant(1.0)),
                                               1.0, qs, 400.0, 0.25);
        CHECK(d.defect < 1e-8);
    }
    // completely absorbing barrier, same-side query: the half-line integral
    // cannot reproduce the full free propagator
    {
        const PropagatorQuery q{-2.0, -3.0, 3.0};
        const auto d = dit::composition_defect(q, ApertureFunction(StaircaseAperture::constant(0.0)),
                                               1.0, qs, 150.0, 0.2);
        CHECK(d.defect > 1e-2);
    }
    // shutter switched off at t_f = 0.5 < tau_mid: composition holds
    {
        const PropagatorQuery q{5.0, -10.0, 3.0};
        const StaircaseAperture mosh({0.5}, {0.0, 1.0});
        const auto d = dit::composition_defect(q, ApertureFunction(mosh), 1.0, qs, 400.0, 0.25);
        CHECK(d.defect < 1e-5);
    }
}

TEST_CASE("batch evaluation matches pointwise evaluation") {
    const StaircaseAperture grat = dit::grating(StaircaseAperture({0.056}, {0.0, 1.0}), 3, 0.056);
    std::vector<PropagatorQuery> queries;
    std::mt19937_64 g(77);
    for (int i = 0; i < 64; ++i)
        queries.push_back({sided(g, 0.3, 9.0), sided(g, 0.3, 9.0), uniform(g, 0.4, 3.0)});
    const auto batch = dit::k_batch(queries, ApertureFunction(grat));
    for (size_t i = 0; i < queries.size(); ++i)
        CHECK(batch[i] == dit::k_staircase(queries[i], grat));
}
