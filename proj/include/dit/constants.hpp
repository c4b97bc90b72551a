#pragma once

#include <complex>

namespace dit {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Particle mass and Planck constant. Defaults are atomic units (m = hbar = 1).
struct PhysicalConstants {
    double m = 1.0;
    double hbar = 1.0;

    bool valid() const { return m > 0.0 && hbar > 0.0; }
};

inline double sgn(double v) { return (v > 0.0) ? 1.0 : ((v < 0.0) ? -1.0 : 0.0); }

}  // namespace dit
