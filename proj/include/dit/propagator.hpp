#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dit/aperture.hpp"
#include "dit/constants.hpp"
#include "dit/erf.hpp"
#include "dit/kernel.hpp"
#include "dit/parallel.hpp"
#include "dit/quadrature.hpp"

namespace dit {

// Evaluation point of the shutter propagator K(x,x';t). The barrier sits at
// x = 0 and carries a genuine discontinuity, so on-barrier queries (x = 0 or
// x' = 0) are rejected rather than assigned a one-sided value.
struct PropagatorQuery {
    double x;
    double xp;
    double t;
    PhysicalConstants pc{};
};

inline void validate_query(const PropagatorQuery& q) {
    if (q.x == 0.0 || q.xp == 0.0)
        throw std::domain_error("propagator: on-barrier evaluation (x = 0 or x' = 0) is undefined");
    if (!(q.t > 0.0)) throw std::domain_error("propagator: t must be positive");
    if (!q.pc.valid()) throw std::domain_error("propagator: constants must be positive");
}

// Xi(x,x') = [1 + sgn(x) sgn(x')]/2: 1 when x and x' share a side of the barrier.
inline double xi(double x, double xp) {
    if (x == 0.0 || xp == 0.0)
        throw std::domain_error("xi: on-barrier evaluation (x = 0 or x' = 0) is undefined");
    return 0.5 * (1.0 + sgn(x) * sgn(xp));
}

// Fictitious-source strength u(x,x';t,tau) = -(sgn x'/2) ( x/(t-tau) - x'/tau ).
inline double u_factor(double x, double xp, double t, double tau) {
    if (!(tau > 0.0 && tau < t)) throw std::domain_error("u_factor: need 0 < tau < t");
    return -0.5 * sgn(xp) * (x / (t - tau) - xp / tau);
}

// Closed-form propagator for a staircase aperture:
//   K = Xi [1 - chi(t)] K0(x-x',t)
//     + (1/2) ( chi(0) + chi(t) + sgn(x') sum_{t_n < t} d_n erf(Phi(x,x';t,t_n)) ) K0(x-x',t)
// Breakpoints at or beyond t are ignored; chi(t) is then read from the
// truncated staircase, which keeps K right-continuous in t and continuous in
// the limit of a jump moving onto t.
inline Complex k_staircase(const PropagatorQuery& q, const StaircaseAperture& a) {
    validate_query(q);
    const Complex k0 = free_propagator(q.x - q.xp, q.t, q.pc);
    const double chi0 = a.levels().front();
    double chit = chi0;
    Complex s{};
    const auto& bp = a.breakpoints();
    const auto& lv = a.levels();
    for (size_t n = 0; n < bp.size(); ++n) {
        if (!(bp[n] < q.t)) break;
        const double dn = lv[n + 1] - lv[n];
        chit = lv[n + 1];
        if (dn != 0.0) s += dn * erf_complex(phi(q.x, q.xp, q.t, bp[n], q.pc));
    }
    return xi(q.x, q.xp) * (1.0 - chit) * k0 + 0.5 * (chi0 + chit + sgn(q.xp) * s) * k0;
}

// Analytic d/dx of k_staircase (the source point x' and time held fixed).
inline Complex k_staircase_dx(const PropagatorQuery& q, const StaircaseAperture& a) {
    validate_query(q);
    const Complex k0 = free_propagator(q.x - q.xp, q.t, q.pc);
    const Complex dlog = Complex(0.0, q.pc.m * (q.x - q.xp) / (q.pc.hbar * q.t));
    const double chi0 = a.levels().front();
    double chit = chi0;
    Complex s{};
    Complex ds{};
    const auto& bp = a.breakpoints();
    const auto& lv = a.levels();
    for (size_t n = 0; n < bp.size(); ++n) {
        if (!(bp[n] < q.t)) break;
        const double dn = lv[n + 1] - lv[n];
        chit = lv[n + 1];
        if (dn != 0.0) {
            const Complex ph = phi(q.x, q.xp, q.t, bp[n], q.pc);
            s += dn * erf_complex(ph);
            ds += dn * (2.0 / std::sqrt(pi)) * std::exp(-ph * ph) * phi_dx(q.t, bp[n], q.pc);
        }
    }
    const Complex amp = xi(q.x, q.xp) * (1.0 - chit) + 0.5 * (chi0 + chit + sgn(q.xp) * s);
    return amp * k0 * dlog + 0.5 * sgn(q.xp) * ds * k0;
}

namespace detail {

// chi restricted to (0, t) as a list of polynomial pieces c0 + c1*tau.
struct ChiPiece {
    double lo, hi;
    double c0, c1;
};

inline std::vector<ChiPiece> chi_pieces(const ApertureFunction& a, double t) {
    std::vector<ChiPiece> out;
    if (const auto* st = std::get_if<StaircaseAperture>(&a)) {
        double lo = 0.0;
        size_t n = 0;
        const auto& bp = st->breakpoints();
        const auto& lv = st->levels();
        while (n < bp.size() && bp[n] < t) {
            out.push_back({lo, bp[n], lv[n], 0.0});
            lo = bp[n];
            ++n;
        }
        out.push_back({lo, t, lv[n], 0.0});
        return out;
    }
    const auto& sa = std::get<SampledAperture>(a);
    const auto& ts = sa.times();
    const auto& vs = sa.values();
    for (size_t i = 0; i + 1 < ts.size() && ts[i] < t; ++i) {
        const double hi = std::min(ts[i + 1], t);
        const double slope = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
        out.push_back({ts[i], hi, vs[i] - slope * ts[i], slope});
    }
    if (ts.back() < t) out.push_back({ts.back(), t, vs.back(), 0.0});
    return out;
}

// sqrt(m / (2 pi i hbar)), the time-independent part of the kernel prefactor.
inline Complex kernel_prefactor(const PhysicalConstants& pc) {
    return branch_sqrt_inverse_it(1.0, pc.m / (2.0 * pi * pc.hbar));
}

// Free propagator continued to complex time with Re T > 0 (principal branch;
// agrees with free_propagator on the real axis).
inline Complex k0_complex_time(double z, Complex T, const PhysicalConstants& pc) {
    const Complex iT = Complex(0.0, 1.0) * T;
    const Complex pref = std::sqrt(pc.m / (2.0 * pi * pc.hbar) / iT);
    return pref * std::exp(Complex(0.0, 1.0) * (pc.m * z * z) / (2.0 * pc.hbar * T));
}

// integral over (0, delta] of s^{-3/2} e^{i p / s} G(s) ds for G analytic on
// |s| <= delta. Substituting w = 1/sqrt(s) turns the endpoint into a Fresnel
// tail 2 int_W^inf G(1/w^2) e^{i p w^2} dw, which is taken down the steepest
// descent ray w = W + e^{i pi/4} v where the integrand decays like
// exp(-p v^2 - sqrt(2) p W v).
template <class G>
Complex fresnel_endpoint_tail(double p, double delta, const G& g, const QuadratureSettings& qs,
                              int& budget, double& err_accum) {
    const double W = 1.0 / std::sqrt(delta);
    const Complex eip4(std::sqrt(0.5), std::sqrt(0.5));
    const double pw2 = p * W * W;
    const Complex phase0(std::cos(pw2), std::sin(pw2));
    const double rate = std::sqrt(2.0) * p * W;
    const double vmax = (-rate + std::sqrt(rate * rate + 160.0 * p)) / (2.0 * p);
    auto fv = [&](double v) -> Complex {
        const Complex w = W + eip4 * v;
        const Complex sigma = 1.0 / (w * w);
        return g(sigma) * std::exp(Complex(-p * v * v - rate * v, rate * v));
    };
    QuadratureSettings local = qs;
    local.max_subdivisions = std::max(8, budget);
    auto res = integrate_adaptive(fv, 0.0, vmax, local, {0.25 * vmax});
    budget -= res.panels;
    err_accum += 2.0 * res.error;
    if (!res.converged)
        throw QuadratureError("endpoint tail quadrature did not converge", res.error);
    return 2.0 * eip4 * phase0 * res.value;
}

}  // namespace detail

namespace detail {

// Descent-region radii for the two Fresnel endpoints: inside [0, d0] the
// tau -> 0 phase a/tau dominates the opposite endpoint's phase by a factor
// kappa, and symmetrically inside [t - d1, t]. Both stay clear of the
// stationary time.
struct DescentRegions {
    double d0, d1;
};

inline DescentRegions descent_regions(double a_coef, double b_coef, double t) {
    constexpr double kappa = 10.0;
    const double r0 = std::sqrt(a_coef / (kappa * b_coef));
    const double r1 = std::sqrt(b_coef / (kappa * a_coef));
    return {std::min(0.45 * t, t * r0 / (1.0 + r0)), std::min(0.45 * t, t * r1 / (1.0 + r1))};
}

// integral of s^{-3/2} e^{i p / s} G(s) ds over [sa, sb] with both limits in
// a descent region: the difference of two endpoint tails (each leg closed by
// Cauchy's theorem, G analytic on the enclosed sector).
template <class G>
Complex fresnel_tail_between(double p, double sa, double sb, const G& g,
                             const QuadratureSettings& qs, int& budget, double& err_accum) {
    Complex v = fresnel_endpoint_tail(p, sb, g, qs, budget, err_accum);
    if (sa > 0.0) v -= fresnel_endpoint_tail(p, sa, g, qs, budget, err_accum);
    return v;
}

}  // namespace detail

// General-aperture propagator, route through the real-time integral
//   K = Xi K0(x-x',t) + int_0^t u K0(x,t-tau) chi(tau) K0(-x',tau) dtau.
// The integrand carries tau^{-3/2}-type Fresnel oscillations that accumulate
// without bound towards both endpoints whenever chi is nonzero there. All
// piece segments falling inside the descent regions are therefore integrated
// on 45-degree rotated contours (where the endpoint phase decays like a
// Gaussian), and only the interior band is handled by adaptive panels, with
// seeds at aperture knots and the stationary time tau* = t |x'|/(|x|+|x'|).
inline Complex k_general_routeA(const PropagatorQuery& q, const ApertureFunction& a,
                                const QuadratureSettings& qs = {}) {
    validate_query(q);
    const double x = q.x, xp = q.xp, t = q.t;
    const PhysicalConstants pc = q.pc;
    const double a_coef = pc.m * xp * xp / (2.0 * pc.hbar);  // phase strength at tau -> 0
    const double b_coef = pc.m * x * x / (2.0 * pc.hbar);    // phase strength at tau -> t
    const double tau_star = t * std::abs(xp) / (std::abs(x) + std::abs(xp));
    const Complex pref = detail::kernel_prefactor(pc);
    const auto [d0, d1] = detail::descent_regions(a_coef, b_coef, t);

    const auto pieces = detail::chi_pieces(a, t);
    int budget = qs.max_subdivisions;
    double err_total = 0.0;
    Complex k1{};

    size_t active = 0;
    for (const auto& p : pieces)
        if (p.c0 != 0.0 || p.c1 != 0.0) ++active;
    if (active == 0) return xi(x, xp) * free_propagator(x - xp, t, pc);
    QuadratureSettings seg = qs;
    seg.abs_tol = qs.abs_tol / static_cast<double>(active);

    for (const auto& p : pieces) {
        if (p.c0 == 0.0 && p.c1 == 0.0) continue;
        if (p.lo < d0) {  // overlap with the tau -> 0 descent region
            const double sb = std::min(p.hi, d0);
            auto g = [&](Complex sigma) -> Complex {
                const Complex T = t - sigma;
                const Complex chi = p.c0 + p.c1 * sigma;
                return -0.5 * sgn(xp) * (x * sigma / T - xp) * pref * chi *
                       detail::k0_complex_time(x, T, pc);
            };
            k1 += detail::fresnel_tail_between(a_coef, p.lo, sb, g, seg, budget, err_total);
        }
        if (p.hi > t - d1) {  // overlap with the tau -> t descent region
            const double sa = t - p.hi;
            const double sb = std::min(d1, t - p.lo);
            auto g = [&](Complex sigma) -> Complex {
                const Complex T = t - sigma;
                const Complex chi = p.c0 + p.c1 * (t - sigma);
                return -0.5 * sgn(xp) * (x - xp * sigma / T) * pref * chi *
                       detail::k0_complex_time(-xp, T, pc);
            };
            k1 += detail::fresnel_tail_between(b_coef, sa, sb, g, seg, budget, err_total);
        }
        const double lo = std::max(p.lo, d0);
        const double hi = std::min(p.hi, t - d1);
        if (hi > lo) {
            std::vector<double> splits;
            if (tau_star > lo && tau_star < hi) splits.push_back(tau_star);
            auto f = [&](double tau) -> Complex {
                return u_factor(x, xp, t, tau) * (p.c0 + p.c1 * tau) *
                       free_propagator(x, t - tau, pc) * free_propagator(-xp, tau, pc);
            };
            QuadratureSettings local = seg;
            local.max_subdivisions = std::max(8, budget);
            auto res = integrate_adaptive(f, lo, hi, local, std::move(splits));
            budget -= res.panels;
            err_total += res.error;
            if (!res.converged)
                throw QuadratureError("route A quadrature did not converge", err_total);
            k1 += res.value;
        }
        if (budget <= 0)
            throw QuadratureError("route A exhausted the subdivision budget", err_total);
    }
    return xi(x, xp) * free_propagator(x - xp, t, pc) + k1;
}

// General-aperture propagator, route through the integrated-by-parts form
//   K = Xi [1-chi(t)] K0 + (1/2) ( chi(0) + chi(t) + sgn(x') J ) K0,
//   J = int_0^t (dchi/dtau) erf(Phi) dtau,
// evaluated per linear piece of the sampled profile. erf(Phi) is bounded with
// finite endpoint limits, but it keeps oscillating at every scale towards
// tau = 0 and tau = t (with amplitude ~ 1/|Phi|), which defeats plain
// adaptive refinement. Near those ends erf(Phi) is split into its limit
// sgn(x') (resp. sgn(x)), integrated exactly, plus an erfc-type deviation
// whose singular phase (m x'^2/2hbar)/tau (resp. (m x^2/2hbar)/(t-tau)) is
// peeled off and taken down the same steepest-descent contour as route A.
inline Complex k_general_routeB(const PropagatorQuery& q, const SampledAperture& a,
                                const QuadratureSettings& qs = {}) {
    validate_query(q);
    const double x = q.x, xp = q.xp, t = q.t;
    const PhysicalConstants pc = q.pc;
    const double chi0 = a.eval(0.0);
    const double chit = a.eval(t);
    const Complex k0 = free_propagator(x - xp, t, pc);
    const double tau_star = t * std::abs(xp) / (std::abs(x) + std::abs(xp));
    const double a_coef = pc.m * xp * xp / (2.0 * pc.hbar);
    const double b_coef = pc.m * x * x / (2.0 * pc.hbar);
    const auto [d0, d1] = detail::descent_regions(a_coef, b_coef, t);

    int budget = qs.max_subdivisions;
    double err_total = 0.0;
    Complex j{};
    const auto pieces = detail::chi_pieces(ApertureFunction(a), t);
    auto erf_phi = [&](double tau) { return erf_complex(phi(x, xp, t, tau, pc)); };

    for (const auto& p : pieces) {
        if (p.c1 == 0.0) continue;
        Complex piece_integral{};  // int erf(Phi) dtau over [p.lo, p.hi]
        if (p.lo < d0) {
            const double sb = std::min(p.hi, d0);
            piece_integral += sgn(xp) * (sb - p.lo);  // the erf limit integrates exactly
            auto g = [&](Complex sigma) -> Complex {
                const Complex ph = phi_parts(x, xp, t, sigma, t - sigma, pc);
                const Complex dev = -sgn(xp) * erfc_complex(sgn(xp) * ph);
                return dev * std::pow(sigma, 1.5) * std::exp(Complex(0.0, -a_coef) / sigma);
            };
            piece_integral += detail::fresnel_tail_between(a_coef, p.lo, sb, g, qs, budget, err_total);
        }
        if (p.hi > t - d1) {
            const double sa = t - p.hi;
            const double sb = std::min(d1, t - p.lo);
            piece_integral += sgn(x) * (sb - sa);
            auto g = [&](Complex sigma) -> Complex {
                const Complex ph = phi_parts(x, xp, t, t - sigma, sigma, pc);
                const Complex dev = -sgn(x) * erfc_complex(sgn(x) * ph);
                return dev * std::pow(sigma, 1.5) * std::exp(Complex(0.0, -b_coef) / sigma);
            };
            piece_integral += detail::fresnel_tail_between(b_coef, sa, sb, g, qs, budget, err_total);
        }
        const double lo = std::max(p.lo, d0);
        const double hi = std::min(p.hi, t - d1);
        if (hi > lo) {
            std::vector<double> splits;
            if (tau_star > lo && tau_star < hi) splits.push_back(tau_star);
            QuadratureSettings local = qs;
            local.max_subdivisions = std::max(8, budget);
            auto res = integrate_adaptive(erf_phi, lo, hi, local, std::move(splits));
            budget -= res.panels;
            err_total += res.error;
            if (!res.converged)
                throw QuadratureError("route B quadrature did not converge", err_total);
            piece_integral += res.value;
        }
        if (budget <= 0)
            throw QuadratureError("route B exhausted the subdivision budget", err_total);
        j += p.c1 * piece_integral;
    }
    return xi(x, xp) * (1.0 - chit) * k0 + 0.5 * (chi0 + chit + sgn(xp) * j) * k0;
}

// Dispatch: closed form for staircases, route B otherwise.
inline Complex k_propagator(const PropagatorQuery& q, const ApertureFunction& a,
                            const QuadratureSettings& qs = {}) {
    if (const auto* st = std::get_if<StaircaseAperture>(&a)) return k_staircase(q, *st);
    return k_general_routeB(q, std::get<SampledAperture>(a), qs);
}

// Batch evaluation over independent queries; runs in parallel.
inline std::vector<Complex> k_batch(const std::vector<PropagatorQuery>& queries,
                                    const ApertureFunction& a, const QuadratureSettings& qs = {}) {
    std::vector<Complex> out(queries.size());
    parallel_for(queries.size(), [&](size_t b, size_t e) {
        for (size_t i = b; i < e; ++i) out[i] = k_propagator(queries[i], a, qs);
    });
    return out;
}

// Composition-property defect |K(x,x';t) - int dxi K(x,xi;t-tau_mid) K(xi,x';tau_mid)|.
// The first factor propagates from tau_mid onward, i.e. it sees the shifted
// aperture chi(tau_mid + tau); once the shutter is fully open it reduces to
// the free propagator. The xi-integral runs over a truncated window with a
// smooth cosine taper over the outer `taper_fraction` of each end, so the
// non-decaying oscillatory tails cancel to second order.
struct CompositionDefect {
    double defect = 0.0;
    double boundary_ratio = 0.0;  // untapered |integrand| at the ends / max
    double tail_estimate = 0.0;   // first-order bound on the discarded tails
    bool truncation_warning = false;
};

inline CompositionDefect composition_defect(const PropagatorQuery& q, const ApertureFunction& a,
                                            double tau_mid, const QuadratureSettings& qs = {},
                                            double xi_half_width = 150.0,
                                            double taper_fraction = 0.2,
                                            double tail_warn_threshold = 1e-6) {
    validate_query(q);
    if (!(tau_mid > 0.0 && tau_mid < q.t))
        throw std::domain_error("composition_defect: need 0 < tau_mid < t");
    const double L = xi_half_width;
    const ApertureFunction a_late = shifted(a, tau_mid);
    const PropagatorQuery q_full = q;
    const Complex k_direct = k_propagator(q_full, a, qs);

    auto k_late = [&](double xi_pt) {
        return k_propagator({q.x, xi_pt, q.t - tau_mid, q.pc}, a_late, qs);
    };
    auto k_early = [&](double xi_pt) {
        return k_propagator({xi_pt, q.xp, tau_mid, q.pc}, a, qs);
    };
    const double ramp = taper_fraction * L;
    auto window = [&](double v) -> double {
        const double d = L - std::abs(v);
        if (d <= 0.0) return 0.0;
        if (d >= ramp) return 1.0;
        const double s = std::sin(0.5 * pi * d / ramp);
        return s * s;
    };
    auto f_raw = [&](double v) -> Complex {
        if (v == 0.0) v = 1e-300;  // barrier point; measure-zero for the quadrature
        return k_late(v) * k_early(v);
    };
    auto f = [&](double v) -> Complex { return window(v) * f_raw(v); };

    QuadratureSettings local = qs;
    local.max_subdivisions = std::max(qs.max_subdivisions, 20000);
    std::vector<double> splits{-L + ramp, 0.0, L - ramp};
    const double xi_s = q.xp + (q.x - q.xp) * tau_mid / q.t;  // classical crossing
    if (xi_s > -L && xi_s < L) splits.push_back(xi_s);
    auto res = integrate_adaptive(f, -L, L, local, std::move(splits));
    if (!res.converged)
        throw QuadratureError("composition_defect quadrature did not converge", res.error);

    CompositionDefect out;
    out.defect = std::abs(k_direct - res.value);
    const double f_lo = std::abs(f_raw(-L));
    const double f_hi = std::abs(f_raw(L));
    const double f_mid = std::abs(f_raw(xi_s > -L && xi_s < L ? xi_s : 0.5 * (q.x + q.xp)));
    out.boundary_ratio = std::max(f_lo, f_hi) / std::max(f_mid, 1e-300);
    const auto slope = [&](double v) {
        return std::abs(q.pc.m * ((v - q.x) / (q.t - tau_mid) + (v - q.xp) / tau_mid) / q.pc.hbar);
    };
    out.tail_estimate = std::max(f_lo / std::max(slope(-L), 1e-12),
                                 f_hi / std::max(slope(L), 1e-12));
    out.truncation_warning = out.tail_estimate > tail_warn_threshold;
    return out;
}

}  // namespace dit
