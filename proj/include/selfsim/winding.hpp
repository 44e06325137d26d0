#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "selfsim/path.hpp"
#include "selfsim/tolerances.hpp"

namespace selfsim {

// Continuously unwrapped polar view of a planar path avoiding the origin.
struct AngularPath {
    TimeGrid grid;
    std::vector<double> theta;   // radians, unwrapped
    std::vector<double> radius;  // > 0
};

namespace detail {

enum class UnwrapFail { none, origin_too_close, ambiguous_step };

struct UnwrapCore {
    UnwrapFail fail = UnwrapFail::none;
    std::size_t fail_index = 0;
    std::vector<double> theta;
    std::vector<double> radius;
};

// Increment convention: between samples the path is the straight chord,
// so the argument advances by the principal angle between consecutive
// position vectors, atan2(cross, dot) in (-pi, pi).  The exactly
// antipodal case (cross == 0, dot < 0) leaves the turn direction
// undefined and is rejected.
inline UnwrapCore unwrap_core(const Path& path, double guard) {
    UnwrapCore out;
    const std::size_t n = path.size();
    out.theta.resize(n);
    out.radius.resize(n);
    const auto& v = path.values();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = v(static_cast<Eigen::Index>(i), 0);
        const double y = v(static_cast<Eigen::Index>(i), 1);
        out.radius[i] = std::hypot(x, y);
        if (!(out.radius[i] >= guard)) {
            out.fail = UnwrapFail::origin_too_close;
            out.fail_index = i;
            return out;
        }
        if (i == 0) {
            out.theta[0] = std::atan2(y, x);
            continue;
        }
        const double px = v(static_cast<Eigen::Index>(i - 1), 0);
        const double py = v(static_cast<Eigen::Index>(i - 1), 1);
        const double cross = px * y - py * x;
        const double dot = px * x + py * y;
        if (cross == 0.0 && dot < 0.0) {
            out.fail = UnwrapFail::ambiguous_step;
            out.fail_index = i;
            return out;
        }
        out.theta[i] = out.theta[i - 1] + std::atan2(cross, dot);
    }
    return out;
}

inline void throw_unwrap_failure(const UnwrapCore& core, const Path& path,
                                 double guard, const std::string& context) {
    std::ostringstream msg;
    msg << std::setprecision(17);
    if (core.fail == UnwrapFail::origin_too_close) {
        msg << context << ": radius " << core.radius[core.fail_index] << " below guard "
            << guard << " at t=" << path.time(core.fail_index);
        throw OriginTooClose(msg.str());
    }
    msg << context << ": antipodal step at t=" << path.time(core.fail_index)
        << ", grid too coarse";
    throw AmbiguousStep(msg.str());
}

}  // namespace detail

inline AngularPath unwrap_argument(const Path& path,
                                   double min_radius_guard = tolerances().min_radius_guard) {
    if (path.dimension() != 2) throw GridMismatch("unwrap_argument: path must be planar");
    if (!(min_radius_guard > 0.0)) throw InvalidScale("unwrap_argument: guard must be positive");
    auto core = detail::unwrap_core(path, min_radius_guard);
    if (core.fail != detail::UnwrapFail::none)
        detail::throw_unwrap_failure(core, path, min_radius_guard, "unwrap_argument");
    return AngularPath{path.grid(), std::move(core.theta), std::move(core.radius)};
}

struct WindingRecord {
    double nu = 0.0;  // radians
    double s = 0.0;
    double t = 0.0;
    double turns() const { return nu / (2.0 * std::numbers::pi); }
};

inline WindingRecord winding_between(const AngularPath& apath, double s, double t) {
    const std::size_t i = apath.grid.index_of(s);
    const std::size_t j = apath.grid.index_of(t);
    if (!(i < j)) throw InvalidIndex("winding_between: s must precede t");
    return WindingRecord{apath.theta[j] - apath.theta[i], apath.grid[i], apath.grid[j]};
}

inline double min_radius(const Path& path) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.size(); ++i)
        m = std::min(m, path.values().row(static_cast<Eigen::Index>(i)).norm());
    return m;
}

// One row per truncation level of a limsup/liminf sweep.
struct SweepRecord {
    std::size_t level = 0;  // 1-based position in the level sequence
    double s = 0.0;
    double t = 0.0;
    double nu = 0.0;
    double run_max = 0.0;  // running max of nu over levels so far
    double run_min = 0.0;
    double min_radius = 0.0;  // over the grid points of [s, t]
};

namespace detail {

inline std::vector<SweepRecord> sweep_records(const AngularPath& apath,
                                              const std::vector<std::pair<double, double>>& st,
                                              const std::vector<double>& radius) {
    std::vector<SweepRecord> out;
    out.reserve(st.size());
    for (std::size_t k = 0; k < st.size(); ++k) {
        const std::size_t i = apath.grid.index_of(st[k].first);
        const std::size_t j = apath.grid.index_of(st[k].second);
        if (!(i < j)) throw InvalidIndex("winding sweep: level must give s < t");
        SweepRecord r;
        r.level = k + 1;
        r.s = apath.grid[i];
        r.t = apath.grid[j];
        r.nu = apath.theta[j] - apath.theta[i];
        r.min_radius = *std::min_element(radius.begin() + static_cast<std::ptrdiff_t>(i),
                                         radius.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        if (k == 0) {
            r.run_max = r.nu;
            r.run_min = r.nu;
        } else {
            r.run_max = std::max(out.back().run_max, r.nu);
            r.run_min = std::min(out.back().run_min, r.nu);
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace detail

// nu[s_k, t] for a decreasing level sequence s_k, from an already
// unwrapped path whose grid contains every level and t.
inline std::vector<SweepRecord> sweep_near_zero(const AngularPath& apath,
                                                const std::vector<double>& s_levels,
                                                double t) {
    std::vector<std::pair<double, double>> st;
    st.reserve(s_levels.size());
    for (std::size_t k = 0; k < s_levels.size(); ++k) {
        if (k > 0 && !(s_levels[k] < s_levels[k - 1]))
            throw InvalidScale("sweep_near_zero: levels must decrease");
        if (!(s_levels[k] > 0.0)) throw NonPositiveTime("sweep_near_zero: levels must be positive");
        st.emplace_back(s_levels[k], t);
    }
    return detail::sweep_records(apath, st, apath.radius);
}

// nu[s, t_k] for an increasing horizon sequence t_k.
inline std::vector<SweepRecord> sweep_at_infinity(const AngularPath& apath, double s,
                                                  const std::vector<double>& t_levels) {
    std::vector<std::pair<double, double>> st;
    st.reserve(t_levels.size());
    for (std::size_t k = 0; k < t_levels.size(); ++k) {
        if (k > 0 && !(t_levels[k] > t_levels[k - 1]))
            throw InvalidScale("sweep_at_infinity: levels must increase");
        st.emplace_back(s, t_levels[k]);
    }
    return detail::sweep_records(apath, st, apath.radius);
}

// Log-spaced grid on [t_min, t_max] with roughly `points_per_efold`
// intervals per unit of log-time, containing every anchor exactly.
// Constant resolution per e-fold is what makes near-zero sweeps of
// self-similar paths meaningful: each level is resolved equally well.
inline TimeGrid winding_master_grid(const std::vector<double>& anchors,
                                    std::size_t points_per_efold) {
    if (anchors.size() < 2) throw InvalidIndex("winding_master_grid: need at least 2 anchors");
    if (points_per_efold < 1) throw InvalidIndex("winding_master_grid: need at least 1 point per efold");
    std::vector<double> a(anchors);
    std::sort(a.begin(), a.end());
    if (!(a.front() > 0.0)) throw NonPositiveTime("winding_master_grid: anchors must be positive");
    std::vector<double> t;
    for (std::size_t j = 0; j + 1 < a.size(); ++j) {
        if (!(a[j + 1] > a[j])) continue;  // duplicate anchor
        const double efolds = std::log(a[j + 1] / a[j]);
        const std::size_t segments =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::ceil(efolds * static_cast<double>(points_per_efold))));
        const TimeGrid seg = TimeGrid::log_spaced(a[j], a[j + 1], segments + 1);
        const std::size_t start = t.empty() ? 0 : 1;
        for (std::size_t i = start; i < seg.size(); ++i) t.push_back(seg[i]);
    }
    return TimeGrid(std::move(t));
}

using PathGenerator = std::function<Path(const TimeGrid&)>;

// Finite-truncation estimates of nu_+-(0, t]: generate the path once on a
// master grid covering [min level, t], unwrap once, then difference the
// angle at each level.  Failures report the offending sweep.
inline std::vector<SweepRecord> winding_near_zero(const PathGenerator& generate, double t,
                                                  const std::vector<double>& s_levels,
                                                  std::size_t points_per_efold,
                                                  double min_radius_guard =
                                                      tolerances().min_radius_guard) {
    if (s_levels.empty()) throw InvalidIndex("winding_near_zero: no levels");
    std::vector<double> anchors(s_levels);
    anchors.push_back(t);
    const TimeGrid grid = winding_master_grid(anchors, points_per_efold);
    const Path path = generate(grid);
    if (path.dimension() != 2) throw GridMismatch("winding_near_zero: path must be planar");
    auto core = detail::unwrap_core(path, min_radius_guard);
    if (core.fail != detail::UnwrapFail::none)
        detail::throw_unwrap_failure(core, path, min_radius_guard, "winding_near_zero");
    AngularPath apath{path.grid(), std::move(core.theta), std::move(core.radius)};
    return sweep_near_zero(apath, s_levels, t);
}

inline std::vector<SweepRecord> winding_at_infinity(const PathGenerator& generate, double s,
                                                    const std::vector<double>& t_levels,
                                                    std::size_t points_per_efold,
                                                    double min_radius_guard =
                                                        tolerances().min_radius_guard) {
    if (t_levels.empty()) throw InvalidIndex("winding_at_infinity: no levels");
    std::vector<double> anchors(t_levels);
    anchors.push_back(s);
    const TimeGrid grid = winding_master_grid(anchors, points_per_efold);
    const Path path = generate(grid);
    if (path.dimension() != 2) throw GridMismatch("winding_at_infinity: path must be planar");
    auto core = detail::unwrap_core(path, min_radius_guard);
    if (core.fail != detail::UnwrapFail::none)
        detail::throw_unwrap_failure(core, path, min_radius_guard, "winding_at_infinity");
    AngularPath apath{path.grid(), std::move(core.theta), std::move(core.radius)};
    return sweep_at_infinity(apath, s, t_levels);
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << "level,s,t,nu,run_max,run_min,min_radius\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : records) {
        os << r.level << "," << r.s << "," << r.t << "," << r.nu << "," << r.run_max << ","
           << r.run_min << "," << r.min_radius << "\n";
    }
}

}  // namespace selfsim
