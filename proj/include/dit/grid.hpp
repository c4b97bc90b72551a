#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dit/constants.hpp"
#include "dit/quadrature.hpp"

namespace dit {

// Uniform spatial grid. Nodes never land exactly on the barrier at x = 0: a
// grid that would sample x = 0 is shifted by dx/2.
struct SpaceGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    int n = 2;

    SpaceGrid() = default;
    SpaceGrid(double lo, double hi, int count) : x_min(lo), x_max(hi), n(count) {
        if (!(x_min < x_max)) throw std::invalid_argument("SpaceGrid: x_min must be < x_max");
        if (n < 2) throw std::invalid_argument("SpaceGrid: need at least 2 points");
        const double d = dx();
        const double k = std::round((0.0 - x_min) / d);
        if (k >= 0.0 && k < static_cast<double>(n) && std::abs(x_min + k * d) < 1e-9 * d) {
            x_min += 0.5 * d;
            x_max += 0.5 * d;
        }
    }

    double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
    double point(int i) const { return x_min + dx() * static_cast<double>(i); }
};

struct Wavefunction {
    SpaceGrid grid;
    std::vector<Complex> amp;
    double time = 0.0;

    double norm2() const {
        std::vector<double> d(amp.size());
        for (size_t i = 0; i < amp.size(); ++i) d[i] = std::norm(amp[i]);
        return composite_simpson(d, grid.dx());
    }
};

// Rectangular (q,p) lattice carrying Husimi values, row-major over q.
struct PhaseSpaceGrid {
    double q_min = -1.0, q_max = 1.0;
    int nq = 2;
    double p_min = -1.0, p_max = 1.0;
    int np = 2;
    std::vector<double> values;

    PhaseSpaceGrid() = default;
    PhaseSpaceGrid(double qlo, double qhi, int nq_, double plo, double phi_, int np_)
        : q_min(qlo), q_max(qhi), nq(nq_), p_min(plo), p_max(phi_), np(np_) {
        if (!(q_min < q_max) || !(p_min < p_max) || nq < 2 || np < 2)
            throw std::invalid_argument("PhaseSpaceGrid: bad extents");
        values.assign(static_cast<size_t>(nq) * static_cast<size_t>(np), 0.0);
    }

    double q(int i) const { return q_min + (q_max - q_min) * i / static_cast<double>(nq - 1); }
    double p(int j) const { return p_min + (p_max - p_min) * j / static_cast<double>(np - 1); }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * np + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * np + j]; }
};

}  // namespace dit
