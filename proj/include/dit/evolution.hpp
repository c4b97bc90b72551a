#pragma once

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "dit/aperture.hpp"
#include "dit/grid.hpp"
#include "dit/parallel.hpp"
#include "dit/propagator.hpp"

namespace dit {

// Unit-width coherent state psi_{q,p}(x) = pi^{-1/4} exp(-(x-q)^2/2 + i p (x-q)),
// normalized to 1 in the continuum.
inline Complex coherent_amplitude(double q, double p, double x) {
    const double d = x - q;
    const double mag = std::pow(pi, -0.25) * std::exp(-0.5 * d * d);
    return mag * Complex(std::cos(p * d), std::sin(p * d));
}

inline Wavefunction coherent_state(double q, double p, const SpaceGrid& grid) {
    Wavefunction psi{grid, std::vector<Complex>(static_cast<size_t>(grid.n)), 0.0};
    for (int i = 0; i < grid.n; ++i) psi.amp[static_cast<size_t>(i)] = coherent_amplitude(q, p, grid.point(i));
    return psi;
}

struct EvolveOptions {
    QuadratureSettings quadrature{};
    double tail_tolerance = 1e-8;
};

// Propagate psi0 through the shutter: Psi(x,t) = int K(x,x';t) Psi0(x') dx',
// with composite Simpson over the source grid. Staircase apertures go through
// the closed form; sampled ones through the erf-route quadrature.
inline Wavefunction evolve(const Wavefunction& psi0, const ApertureFunction& a, double t,
                           const SpaceGrid& out_grid, const PhysicalConstants& pc = {},
                           const EvolveOptions& opt = {}) {
    if (!(t > 0.0)) throw std::domain_error("evolve: t must be positive");
    const SpaceGrid& src = psi0.grid;
    if (psi0.amp.size() != static_cast<size_t>(src.n))
        throw std::invalid_argument("evolve: amplitude count does not match grid");
    double peak = 0.0;
    for (const auto& v : psi0.amp) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(psi0.amp.front()), std::abs(psi0.amp.back()));
    if (peak > 0.0 && edge > opt.tail_tolerance * peak)
        throw std::runtime_error(
            "evolve: initial state is not negligible at the grid boundary (truncation)");

    const auto w = simpson_weights(src.n, src.dx());
    std::vector<Complex> weighted(psi0.amp.size());
    size_t skipped = 0;
    for (size_t j = 0; j < weighted.size(); ++j) {
        const double xs = src.point(static_cast<int>(j));
        if (xs == 0.0) {  // on-barrier source node; SpaceGrid normally prevents this
            weighted[j] = Complex{};
            ++skipped;
            continue;
        }
        weighted[j] = w[j] * psi0.amp[j];
    }
    if (skipped > 0)
        std::cerr << "evolve: warning: skipped " << skipped
                  << " on-barrier source node(s); stagger the grid away from x = 0\n";

    Wavefunction out{out_grid, std::vector<Complex>(static_cast<size_t>(out_grid.n)), t};
    if (const auto* st = std::get_if<StaircaseAperture>(&a)) {
        parallel_for(static_cast<size_t>(out_grid.n), [&](size_t b, size_t e) {
            for (size_t i = b; i < e; ++i) {
                const double x = out_grid.point(static_cast<int>(i));
                Complex acc{};
                for (size_t j = 0; j < weighted.size(); ++j) {
                    const double xs = src.point(static_cast<int>(j));
                    if (xs == 0.0) continue;
                    acc += k_staircase({x, xs, t, pc}, *st) * weighted[j];
                }
                out.amp[i] = acc;
            }
        });
    } else {
        const auto& sa = std::get<SampledAperture>(a);
        parallel_for(static_cast<size_t>(out_grid.n), [&](size_t b, size_t e) {
            for (size_t i = b; i < e; ++i) {
                const double x = out_grid.point(static_cast<int>(i));
                Complex acc{};
                for (size_t j = 0; j < weighted.size(); ++j) {
                    const double xs = src.point(static_cast<int>(j));
                    if (xs == 0.0) continue;
                    acc += k_general_routeB({x, xs, t, pc}, sa, opt.quadrature) * weighted[j];
                }
                out.amp[i] = acc;
            }
        });
    }
    return out;
}

inline std::vector<double> density(const Wavefunction& psi) {
    std::vector<double> d(psi.amp.size());
    for (size_t i = 0; i < psi.amp.size(); ++i) d[i] = std::norm(psi.amp[i]);
    return d;
}

// Husimi distribution H(q,p) = | int psi*_{q,p}(x) Psi(x) dx |^2 on the given
// phase-space lattice, no measure factor.
inline void husimi(const Wavefunction& psi, PhaseSpaceGrid& ps) {
    const auto w = simpson_weights(psi.grid.n, psi.grid.dx());
    std::vector<Complex> weighted(psi.amp.size());
    for (size_t j = 0; j < weighted.size(); ++j) weighted[j] = w[j] * psi.amp[j];
    const size_t total = static_cast<size_t>(ps.nq) * static_cast<size_t>(ps.np);
    parallel_for(total, [&](size_t b, size_t e) {
        for (size_t idx = b; idx < e; ++idx) {
            const int i = static_cast<int>(idx) / ps.np;
            const int j = static_cast<int>(idx) % ps.np;
            const double q = ps.q(i);
            const double p = ps.p(j);
            Complex ov{};
            for (size_t k = 0; k < weighted.size(); ++k) {
                const double x = psi.grid.point(static_cast<int>(k));
                ov += std::conj(coherent_amplitude(q, p, x)) * weighted[k];
            }
            ps.values[idx] = std::norm(ov);
        }
    });
}

struct Observables {
    double norm2 = 0.0;
    double transmitted = 0.0;  // integral of |Psi|^2 over x > 0
    double reflected = 0.0;    // integral of |Psi|^2 over x < 0
};

// Half-line probabilities. Psi may jump at x = 0, so each side is integrated
// over its own nodes with a rectangle patch for the sliver next to the barrier.
inline Observables observables(const Wavefunction& psi) {
    Observables obs;
    const auto rho = density(psi);
    obs.norm2 = composite_simpson(rho, psi.grid.dx());
    int first_pos = psi.grid.n;
    for (int i = 0; i < psi.grid.n; ++i)
        if (psi.grid.point(i) > 0.0) {
            first_pos = i;
            break;
        }
    const double dx = psi.grid.dx();
    if (first_pos < psi.grid.n) {
        std::vector<double> right(rho.begin() + first_pos, rho.end());
        obs.transmitted = right.size() >= 2 ? composite_simpson(right, dx) : 0.0;
        const double x0 = psi.grid.point(first_pos);
        if (x0 > 0.0 && x0 < dx) obs.transmitted += rho[static_cast<size_t>(first_pos)] * x0;
    }
    if (first_pos > 0) {
        std::vector<double> left(rho.begin(), rho.begin() + first_pos);
        obs.reflected = left.size() >= 2 ? composite_simpson(left, dx) : 0.0;
        const double x1 = psi.grid.point(first_pos - 1);
        if (x1 < 0.0 && -x1 < dx) obs.reflected += rho[static_cast<size_t>(first_pos - 1)] * (-x1);
    }
    return obs;
}

// Closed-form free evolution of the unit-width coherent state (m = hbar = 1):
//   Psi(x,t) = pi^{-1/4} (1+it)^{-1/2}
//              exp( -(x-q-pt)^2 / (2(1+it)) + i p (x - q - p t / 2) ).
inline Wavefunction free_gaussian_evolution(double q, double p, double t, const SpaceGrid& grid) {
    Wavefunction psi{grid, std::vector<Complex>(static_cast<size_t>(grid.n)), t};
    const Complex one_it(1.0, t);
    const Complex pref = std::pow(pi, -0.25) / std::sqrt(one_it);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.point(i);
        const double d = x - q - p * t;
        const Complex ex = -d * d / (2.0 * one_it) + Complex(0.0, p * (x - q - 0.5 * p * t));
        psi.amp[static_cast<size_t>(i)] = pref * std::exp(ex);
    }
    return psi;
}

}  // namespace dit
