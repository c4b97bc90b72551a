#pragma once

#include <cmath>
#include <stdexcept>

#include "dit/constants.hpp"

namespace dit {

// sqrt(c/(i t)) on the principal branch, i.e. sqrt(c/t) * exp(-i pi/4).
// Squaring the result gives c/(i t). Every kernel in this library inherits
// its branch convention from this single function.
inline Complex branch_sqrt_inverse_it(double t, double c) {
    if (!(t > 0.0)) throw std::domain_error("branch_sqrt_inverse_it: t must be positive");
    if (!(c > 0.0)) throw std::domain_error("branch_sqrt_inverse_it: c must be positive");
    const double r = std::sqrt(c / t) * std::sqrt(0.5);
    return {r, -r};
}

// Free-particle propagator K0(z,t) = sqrt(m/(2 pi i hbar t)) exp(i m z^2 / (2 hbar t)).
inline Complex free_propagator(double z, double t, const PhysicalConstants& pc = {}) {
    const Complex pref = branch_sqrt_inverse_it(t, pc.m / (2.0 * pi * pc.hbar));
    const double s = pc.m * z * z / (2.0 * pc.hbar * t);
    return pref * Complex(std::cos(s), std::sin(s));
}

// d/dz of the free propagator.
inline Complex free_propagator_dz(double z, double t, const PhysicalConstants& pc = {}) {
    return free_propagator(z, t, pc) * Complex(0.0, pc.m * z / (pc.hbar * t));
}

// Phi(x,x';t,tau) = sqrt(m/(2 i hbar t)) ( x sqrt(tau/(t-tau)) + x' sqrt((t-tau)/tau) ).
//
// The prefactor puts Phi on the rays arg = -pi/4 or 3 pi/4; erf(Phi) then has
// finite Fresnel-type limits as tau approaches 0 or t.
inline Complex phi(double x, double xp, double t, double tau, const PhysicalConstants& pc = {}) {
    if (!(t > 0.0) || !(tau > 0.0) || !(tau < t)) throw std::domain_error("phi: need 0 < tau < t");
    const Complex pref = branch_sqrt_inverse_it(t, pc.m / (2.0 * pc.hbar));
    const double g = std::sqrt(tau / (t - tau));
    const double h = std::sqrt((t - tau) / tau);
    return pref * (x * g + xp * h);
}

// d/dx of Phi at fixed (x',t,tau).
inline Complex phi_dx(double t, double tau, const PhysicalConstants& pc = {}) {
    if (!(t > 0.0) || !(tau > 0.0) || !(tau < t)) throw std::domain_error("phi_dx: need 0 < tau < t");
    return branch_sqrt_inverse_it(t, pc.m / (2.0 * pc.hbar)) * std::sqrt(tau / (t - tau));
}

// Phi continued to complex time splittings. tau and t - tau are passed
// separately so a tiny leg near either endpoint keeps full precision. The
// principal square roots continue the real-axis values throughout the
// sectors reached by the endpoint descent contours (the short leg rotated
// into the lower half-plane, the long leg staying near the real axis).
inline Complex phi_parts(double x, double xp, double t, Complex tau, Complex t_minus_tau,
                         const PhysicalConstants& pc = {}) {
    const Complex pref = branch_sqrt_inverse_it(t, pc.m / (2.0 * pc.hbar));
    const Complex g = std::sqrt(tau / t_minus_tau);
    const Complex h = std::sqrt(t_minus_tau / tau);
    return pref * (x * g + xp * h);
}

}  // namespace dit
