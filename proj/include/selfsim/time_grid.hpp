#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "selfsim/errors.hpp"
#include "selfsim/tolerances.hpp"

namespace selfsim {

// Strictly increasing, finite sample times.  Process samplers require a
// grid starting at 0; the stationary (log-time) side of the Lamperti
// correspondence uses grids on the whole real line.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times) : t_(std::move(times)) {
        if (t_.empty()) throw InvalidIndex("TimeGrid: empty");
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (!std::isfinite(t_[i])) throw NonPositiveTime("TimeGrid: non-finite time");
            if (i > 0 && !(t_[i] > t_[i - 1]))
                throw NonPositiveTime("TimeGrid: times must be strictly increasing");
        }
    }

    static TimeGrid uniform(double t0, double t1, std::size_t n) {
        if (n < 2) throw InvalidIndex("TimeGrid::uniform: need at least 2 points");
        if (!(t1 > t0)) throw InvalidScale("TimeGrid::uniform: t1 must exceed t0");
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i)
            t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        t.back() = t1;
        return TimeGrid(std::move(t));
    }

    // n points with log-equal spacing on [t0, t1], both endpoints included.
    static TimeGrid log_spaced(double t0, double t1, std::size_t n) {
        if (n < 2) throw InvalidIndex("TimeGrid::log_spaced: need at least 2 points");
        if (!(t0 > 0.0)) throw NonPositiveTime("TimeGrid::log_spaced: t0 must be positive");
        if (!(t1 > t0)) throw InvalidScale("TimeGrid::log_spaced: t1 must exceed t0");
        const double l0 = std::log(t0), l1 = std::log(t1);
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i)
            t[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                                     static_cast<double>(n - 1));
        t.front() = t0;
        t.back() = t1;
        return TimeGrid(std::move(t));
    }

    std::size_t size() const { return t_.size(); }
    double operator[](std::size_t i) const { return t_[i]; }
    double front() const { return t_.front(); }
    double back() const { return t_.back(); }
    const std::vector<double>& times() const { return t_; }

    bool starts_at_zero() const { return t_.front() == 0.0; }

    TimeGrid scaled(double c) const {
        if (!(c > 0.0) || !std::isfinite(c)) throw InvalidScale("TimeGrid::scaled: c must be positive");
        std::vector<double> t(t_);
        for (double& x : t) x *= c;
        return TimeGrid(std::move(t));
    }

    // Index of `time` up to relative tolerance; exact-match intent, the
    // tolerance only absorbs round-off from rescaling.
    std::size_t index_of(double time) const {
        std::size_t lo = 0, hi = t_.size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (t_[mid] < time) lo = mid + 1; else hi = mid;
        }
        const double tol = tolerances().grid_match_rel * std::max(1.0, std::abs(time));
        for (std::size_t cand : {lo, lo > 0 ? lo - 1 : lo}) {
            if (cand < t_.size() && std::abs(t_[cand] - time) <= tol) return cand;
        }
        throw TimeNotOnGrid("TimeGrid::index_of: time not on grid");
    }

    bool operator==(const TimeGrid& o) const { return t_ == o.t_; }

private:
    std::vector<double> t_;
};

}  // namespace selfsim
