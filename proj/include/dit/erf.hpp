#pragma once

#include <cmath>
#include <stdexcept>

#include "dit/constants.hpp"

namespace dit {
namespace detail {

// Maclaurin series of erf, used for |z| <= 2 where cancellation is harmless.
inline Complex erf_series(Complex z) {
    const Complex z2 = z * z;
    Complex term = z;  // z^(2n+1) / n!
    Complex sum = z;
    for (int n = 1; n < 96; ++n) {
        term *= -z2 / static_cast<double>(n);
        const Complex add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return (2.0 / std::sqrt(pi)) * sum;
}

// Trapezoidal (Poisson summation, step 1/2) expansion for the first quadrant.
// All exponentials are assembled from combined exponents so cosh(ky) terms
// cannot overflow before the result itself does.
inline Complex erf_midrange(double x, double y) {
    const double x2 = x * x;
    double re = std::erf(x);
    double im = 0.0;
    const double c2xy = std::cos(2.0 * x * y);
    const double s2xy = std::sin(2.0 * x * y);
    if (x == 0.0) {
        im += y / pi;
    } else {
        const double e = std::exp(-x2);
        const double sxy = std::sin(x * y);
        re += e * sxy * sxy / (pi * x);        // e^{-x^2} (1 - cos 2xy) / (2 pi x)
        im += e * s2xy / (2.0 * pi * x);
    }
    const int kmax = 14 + static_cast<int>(std::ceil(2.0 * y));
    double sr = 0.0, si = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double base = -x2 - 0.25 * k * k;
        const double ep = std::exp(base + k * y);
        const double em = std::exp(base - k * y);
        const double ch = 0.5 * (ep + em);     // e^{-x^2-k^2/4} cosh(ky)
        const double sh = 0.5 * (ep - em);     // e^{-x^2-k^2/4} sinh(ky)
        const double e0 = std::exp(base);
        const double fk = 2.0 * x * e0 - 2.0 * x * ch * c2xy + k * sh * s2xy;
        const double gk = 2.0 * x * ch * s2xy + k * sh * c2xy;
        const double w = 1.0 / (k * k + 4.0 * x2);
        sr += w * fk;
        si += w * gk;
    }
    re += (2.0 / pi) * sr;
    im += (2.0 / pi) * si;
    return {re, im};
}

// e^{-z^2} S(z) / (z sqrt(pi)), the asymptotic erfc tail, |arg z| < 3 pi/4.
inline Complex erfc_asymptotic_tail(Complex z) {
    const Complex z2 = z * z;
    Complex term(1.0, 0.0);
    Complex sum(1.0, 0.0);
    for (int n = 1; n <= 24; ++n) {
        term *= -static_cast<double>(2 * n - 1) / (2.0 * z2);
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return std::exp(-z2) * sum / (z * std::sqrt(pi));
}

// Asymptotic erf, |z| >= 12 in the closed first quadrant.
inline Complex erf_asymptotic(Complex z) { return 1.0 - erfc_asymptotic_tail(z); }

}  // namespace detail

// Error function of a complex argument.
//
// erf(-z) = -erf(z) and erf(conj z) = conj(erf(z)) hold exactly by
// construction: the argument is reduced to the first quadrant before any
// arithmetic. Along the rays arg z = +-pi/4 the result converges to +-1 as
// |z| grows (Fresnel behaviour), with no overflow at any magnitude.
inline Complex erf_complex(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("erf_complex: non-finite argument");
    double sign = 1.0;
    if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) {
        z = -z;
        sign = -1.0;
    }
    bool conjugate = false;
    if (z.imag() < 0.0) {
        z = std::conj(z);
        conjugate = true;
    }
    const double r2 = std::norm(z);
    Complex w;
    if (r2 <= 4.0)
        w = detail::erf_series(z);
    else if (r2 >= 144.0)
        w = detail::erf_asymptotic(z);
    else
        w = detail::erf_midrange(z.real(), z.imag());
    if (conjugate) w = std::conj(w);
    return sign * w;
}

// erfc(z) = 1 - erf(z), without subtractive cancellation where erfc is tiny:
// for large |z| in the right half-plane the asymptotic tail is used directly.
inline Complex erfc_complex(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("erfc_complex: non-finite argument");
    if (z.real() >= 0.0 && std::norm(z) >= 144.0) return detail::erfc_asymptotic_tail(z);
    return 1.0 - erf_complex(z);
}

}  // namespace dit
