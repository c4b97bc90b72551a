#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dit {

// Piecewise-constant transparency profile chi(tau). Level levels[k] holds on
// [breakpoints[k-1], breakpoints[k]) with right-continuity at breakpoints;
// levels.front() holds on [0, breakpoints[0]) and levels.back() from the last
// breakpoint on.
class StaircaseAperture {
public:
    StaircaseAperture(std::vector<double> breakpoints, std::vector<double> levels)
        : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
        if (levels_.empty() || levels_.size() != breakpoints_.size() + 1)
            throw std::invalid_argument(
                "StaircaseAperture: need exactly one more level than breakpoints");
        for (double lv : levels_)
            if (!(lv >= 0.0 && lv <= 1.0))
                throw std::invalid_argument("StaircaseAperture: level " + std::to_string(lv) +
                                            " outside [0,1]");
        for (size_t i = 0; i < breakpoints_.size(); ++i) {
            if (!(breakpoints_[i] > 0.0) || !std::isfinite(breakpoints_[i]))
                throw std::invalid_argument("StaircaseAperture: breakpoints must be positive");
            if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
                throw std::invalid_argument(
                    "StaircaseAperture: breakpoints must be strictly increasing");
        }
    }

    static StaircaseAperture constant(double level) { return {{}, {level}}; }

    double eval(double tau) const {
        if (!(tau >= 0.0)) throw std::domain_error("StaircaseAperture::eval: tau must be >= 0");
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), tau);
        return levels_[static_cast<size_t>(it - breakpoints_.begin())];
    }

    // Jump times and derivative-consistent weights d_n = chi_n - chi_{n-1}.
    std::vector<std::pair<double, double>> jumps() const {
        std::vector<std::pair<double, double>> out;
        out.reserve(breakpoints_.size());
        for (size_t n = 0; n < breakpoints_.size(); ++n)
            out.emplace_back(breakpoints_[n], levels_[n + 1] - levels_[n]);
        return out;
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& levels() const { return levels_; }

private:
    std::vector<double> breakpoints_;
    std::vector<double> levels_;
};

// Piecewise-linear transparency profile through samples (times[i], values[i]),
// held constant after the last sample. The first sample time must be 0.
class SampledAperture {
public:
    SampledAperture(std::vector<double> times, std::vector<double> values)
        : times_(std::move(times)), values_(std::move(values)) {
        if (times_.empty() || times_.size() != values_.size())
            throw std::invalid_argument("SampledAperture: times/values size mismatch");
        if (times_.front() != 0.0)
            throw std::invalid_argument("SampledAperture: first sample time must be 0");
        for (size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i]))
                throw std::invalid_argument("SampledAperture: times must be strictly increasing");
        for (double v : values_)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("SampledAperture: value " + std::to_string(v) +
                                            " outside [0,1]");
    }

    double eval(double tau) const {
        if (!(tau >= 0.0)) throw std::domain_error("SampledAperture::eval: tau must be >= 0");
        if (tau >= times_.back()) return values_.back();
        const auto it = std::upper_bound(times_.begin(), times_.end(), tau);
        const size_t i = static_cast<size_t>(it - times_.begin());  // tau < times_[i], i >= 1
        const double f = (tau - times_[i - 1]) / (times_[i] - times_[i - 1]);
        return values_[i - 1] + f * (values_[i] - values_[i - 1]);
    }

    // Slope of the interpolant strictly inside (0, s_M), away from knots.
    double derivative(double tau) const {
        if (!(tau > 0.0 && tau < times_.back()))
            throw std::domain_error("SampledAperture::derivative: tau outside (0, s_M)");
        const auto it = std::lower_bound(times_.begin(), times_.end(), tau);
        if (it != times_.end() && *it == tau)
            throw std::domain_error(
                "SampledAperture::derivative: tau hits a knot; split intervals at knots");
        const size_t i = static_cast<size_t>(it - times_.begin());
        return (values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]);
    }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

using ApertureFunction = std::variant<StaircaseAperture, SampledAperture>;

inline double aperture_eval(const ApertureFunction& a, double tau) {
    return std::visit([tau](const auto& ap) { return ap.eval(tau); }, a);
}

inline bool is_staircase(const ApertureFunction& a) {
    return std::holds_alternative<StaircaseAperture>(a);
}

// Tile one grating cell `periods` times. The cell holds levels on uniform
// steps of width dt, so one period spans dt * levels.size(); breakpoints of
// the cell must fall inside that span. Where consecutive periods share a
// level the no-op boundary jump is dropped.
inline StaircaseAperture grating(const StaircaseAperture& cell, int periods, double dt) {
    if (periods < 1) throw std::invalid_argument("grating: periods must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("grating: dt must be positive");
    const double period = dt * static_cast<double>(cell.levels().size());
    for (double b : cell.breakpoints())
        if (!(b < period))
            throw std::invalid_argument("grating: cell breakpoints overlap the next period");
    std::vector<double> bp;
    std::vector<double> lv{cell.levels().front()};
    for (int i = 0; i < periods; ++i) {
        const double off = period * static_cast<double>(i);
        if (i > 0 && cell.levels().front() != cell.levels().back()) {
            bp.push_back(off);
            lv.push_back(cell.levels().front());
        }
        for (size_t j = 0; j < cell.breakpoints().size(); ++j) {
            bp.push_back(off + cell.breakpoints()[j]);
            lv.push_back(cell.levels()[j + 1]);
        }
    }
    return StaircaseAperture(std::move(bp), std::move(lv));
}

// The profile seen by an observer starting at time t0: tau -> chi(t0 + tau).
inline ApertureFunction shifted(const ApertureFunction& a, double t0) {
    if (!(t0 >= 0.0)) throw std::invalid_argument("shifted: t0 must be >= 0");
    if (const auto* st = std::get_if<StaircaseAperture>(&a)) {
        std::vector<double> bp;
        std::vector<double> lv{st->eval(t0)};
        const auto& b = st->breakpoints();
        const auto& l = st->levels();
        for (size_t i = 0; i < b.size(); ++i) {
            if (b[i] > t0) {
                bp.push_back(b[i] - t0);
                lv.push_back(l[i + 1]);
            }
        }
        return StaircaseAperture(std::move(bp), std::move(lv));
    }
    const auto& sa = std::get<SampledAperture>(a);
    std::vector<double> ts{0.0};
    std::vector<double> vs{sa.eval(t0)};
    for (size_t i = 0; i < sa.times().size(); ++i) {
        if (sa.times()[i] > t0) {
            ts.push_back(sa.times()[i] - t0);
            vs.push_back(sa.values()[i]);
        }
    }
    if (ts.size() == 1) return StaircaseAperture({}, {vs[0]});
    return SampledAperture(std::move(ts), std::move(vs));
}

}  // namespace dit
