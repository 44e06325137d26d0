#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "selfsim/errors.hpp"
#include "selfsim/path.hpp"
#include "selfsim/simplex.hpp"

namespace selfsim {

// Sign of the orientation determinant (b - a) x (c - a): +1 when a,b,c
// turn counterclockwise, -1 clockwise, 0 collinear.  A floating-point
// filter certifies the double-precision sign when it is safely above the
// rounding error bound; otherwise the determinant is re-evaluated in
// __float128, where products of doubles are exact (106 < 113 mantissa
// bits).  Anything still indistinguishable from zero there is reported
// collinear, which is the conservative answer for a strict hull.
inline int orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c) {
    const double acx = a.x() - c.x();
    const double bcx = b.x() - c.x();
    const double acy = a.y() - c.y();
    const double bcy = b.y() - c.y();
    const double detl = acx * bcy;
    const double detr = acy * bcx;
    const double det = detl - detr;
    const double detsum = std::abs(detl) + std::abs(detr);
    constexpr double filter = 3.3306690738754716e-16;
    if (std::abs(det) > filter * detsum) return det > 0.0 ? 1 : -1;
    if (detsum == 0.0) return 0;
    const __float128 qdet =
        (static_cast<__float128>(a.x()) - static_cast<__float128>(c.x())) *
            (static_cast<__float128>(b.y()) - static_cast<__float128>(c.y())) -
        (static_cast<__float128>(a.y()) - static_cast<__float128>(c.y())) *
            (static_cast<__float128>(b.x()) - static_cast<__float128>(c.x()));
    if (qdet > 0) return 1;
    if (qdet < 0) return -1;
    return 0;
}

struct HullSnapshot2D {
    std::vector<Eigen::Vector2d> vertices;  // counterclockwise, strictly convex
    bool full_dimensional = false;
};

namespace detail {

inline bool lex_less(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
}

}  // namespace detail

// Andrew's monotone chain with the exact-sign predicate.  Strict hull:
// collinear mid-edge points are never vertices.  Degenerate inputs give
// 1-vertex (all equal) or 2-vertex (collinear) snapshots, flagged
// non-full-dimensional.  `tolerance` merges points whose coordinates
// differ by at most that much into one (0 keeps only exact duplicates
// merged).
inline HullSnapshot2D hull_2d(std::vector<Eigen::Vector2d> points, double tolerance = 0.0) {
    if (points.empty()) throw EmptySample("hull_2d: no points");
    for (const auto& p : points)
        if (!p.allFinite()) throw MalformedInput("hull_2d: non-finite point");
    std::sort(points.begin(), points.end(), detail::lex_less);
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (!pts.empty() && std::abs(p.x() - pts.back().x()) <= tolerance &&
            std::abs(p.y() - pts.back().y()) <= tolerance)
            continue;
        pts.push_back(p);
    }

    HullSnapshot2D snap;
    if (pts.size() == 1) {
        snap.vertices = pts;
        return snap;
    }
    std::vector<Eigen::Vector2d> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && orient2d(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && orient2d(h[k - 2], h[k - 1], *it) <= 0) --k;
        h[k++] = *it;
    }
    h.resize(k - 1);
    snap.vertices = std::move(h);
    snap.full_dimensional = snap.vertices.size() >= 3;
    return snap;
}

// True iff p lies strictly outside the hull, decided with the exact
// predicate.  Boundary points count as inside (not a new vertex).
inline bool strictly_outside(const HullSnapshot2D& hull, const Eigen::Vector2d& p) {
    const auto& v = hull.vertices;
    if (v.empty()) throw EmptySample("strictly_outside: empty hull");
    if (v.size() == 1) return p.x() != v[0].x() || p.y() != v[0].y();
    if (v.size() == 2) {
        if (orient2d(v[0], v[1], p) != 0) return true;
        const Eigen::Vector2d lo = detail::lex_less(v[0], v[1]) ? v[0] : v[1];
        const Eigen::Vector2d hi = detail::lex_less(v[0], v[1]) ? v[1] : v[0];
        return detail::lex_less(p, lo) || detail::lex_less(hi, p);
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (orient2d(v[i], v[(i + 1) % v.size()], p) < 0) return true;
    }
    return false;
}

// Origin strictly inside a 2D hull: strictly left of every CCW edge.
// This is the exact planar specialization of contains_origin_interior.
inline bool hull_contains_origin_interior(const HullSnapshot2D& hull) {
    if (!hull.full_dimensional) return false;
    const Eigen::Vector2d origin(0.0, 0.0);
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
        if (orient2d(hull.vertices[i], hull.vertices[(i + 1) % hull.vertices.size()],
                     origin) <= 0)
            return false;
    }
    return true;
}

struct HullFunctionals {
    double area = 0.0;
    double perimeter = 0.0;
    double diameter = 0.0;
};

// Shoelace area, closed-traversal perimeter, max pairwise vertex
// distance.  A 2-vertex hull has perimeter 2x its length (the closed
// traversal walks the segment both ways), which keeps the perimeter
// monotone when a third point later arrives.
inline HullFunctionals hull_functionals(const HullSnapshot2D& hull) {
    const auto& v = hull.vertices;
    if (v.empty()) throw EmptySample("hull_functionals: empty hull");
    HullFunctionals f;
    if (v.size() >= 2) {
        double twice_area = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            twice_area += a.x() * b.y() - b.x() * a.y();
            f.perimeter += (b - a).norm();
        }
        f.area = 0.5 * std::abs(twice_area);
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j)
                f.diameter = std::max(f.diameter, (v[j] - v[i]).norm());
    }
    return f;
}

struct HullTimeline {
    TimeGrid grid;
    std::vector<char> change_flags;    // hull gained a vertex at this index
    std::vector<char> interior_flags;  // origin strictly inside, true-absorbing
    std::vector<HullFunctionals> functionals;
    HullSnapshot2D final_hull;
};

// Prefix-hull sweep of a planar path.  change_flags[i] is true iff the
// i-th sample lies strictly outside the previous prefix hull (always true
// at i = 0); the hull is rebuilt only on change.  interior_flags use the
// exact edge test and are monotone by construction of V(t).
inline HullTimeline incremental_hull_timeline(const Path& path) {
    if (path.dimension() != 2)
        throw GridMismatch("incremental_hull_timeline: path must be planar");
    const std::size_t n = path.size();
    HullTimeline tl{path.grid(), std::vector<char>(n, 0), std::vector<char>(n, 0),
                    std::vector<HullFunctionals>(n), HullSnapshot2D{}};
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(n);
    HullSnapshot2D hull;
    bool interior = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d p(path.values()(static_cast<Eigen::Index>(i), 0),
                                path.values()(static_cast<Eigen::Index>(i), 1));
        pts.push_back(p);
        const bool changed = (i == 0) ? true : strictly_outside(hull, p);
        if (changed) {
            hull = hull_2d(pts);
            tl.functionals[i] = hull_functionals(hull);
            if (!interior) interior = hull_contains_origin_interior(hull);
        } else {
            tl.functionals[i] = tl.functionals[i - 1];
        }
        tl.change_flags[i] = changed ? 1 : 0;
        tl.interior_flags[i] = interior ? 1 : 0;
    }
    tl.final_hull = std::move(hull);
    return tl;
}

inline std::optional<double> first_interior_time(const HullTimeline& tl) {
    for (std::size_t i = 0; i < tl.interior_flags.size(); ++i)
        if (tl.interior_flags[i]) return tl.grid[i];
    return std::nullopt;
}

// Fraction of indices >= from_index where the hull changed; the empirical
// witness that hull paths are staircase-like (tends to 0 under grid
// refinement).
inline double staircase_fraction(const HullTimeline& tl, std::size_t from_index) {
    const std::size_t n = tl.change_flags.size();
    if (from_index >= n) throw InvalidIndex("staircase_fraction: from_index out of range");
    std::size_t hits = 0;
    for (std::size_t i = from_index; i < n; ++i) hits += tl.change_flags[i] ? 1u : 0u;
    return static_cast<double>(hits) / static_cast<double>(n - from_index);
}

// Quadrant membership of path samples.  Quadrants are indexed by a bit
// per coordinate (bit j set means coordinate j strictly positive, clear
// means strictly negative); a sample with any zero coordinate lies in no
// OPEN quadrant and is skipped.
struct QuadrantHits {
    std::size_t dimension = 0;
    std::vector<std::optional<std::size_t>> first_index;  // size 2^d, by bitmask

    bool all_hit() const {
        for (const auto& h : first_index)
            if (!h) return false;
        return true;
    }
};

inline QuadrantHits quadrant_hit_times(const Path& path) {
    const std::size_t d = path.dimension();
    if (d > 16) throw InvalidIndex("quadrant_hit_times: dimension too large");
    QuadrantHits q;
    q.dimension = d;
    q.first_index.assign(std::size_t{1} << d, std::nullopt);
    std::size_t found = 0;
    for (std::size_t i = 0; i < path.size() && found < q.first_index.size(); ++i) {
        std::size_t mask = 0;
        bool open = true;
        for (std::size_t j = 0; j < d; ++j) {
            const double x = path.values()(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j));
            if (x > 0.0) mask |= std::size_t{1} << j;
            else if (!(x < 0.0)) { open = false; break; }
        }
        if (open && !q.first_index[mask]) {
            q.first_index[mask] = i;
            ++found;
        }
    }
    return q;
}

// The witness points themselves: one sample per quadrant when all hit.
inline Eigen::MatrixXd quadrant_witness_points(const Path& path, const QuadrantHits& hits) {
    if (!hits.all_hit()) throw EmptySample("quadrant_witness_points: not all quadrants hit");
    Eigen::MatrixXd w(static_cast<Eigen::Index>(hits.first_index.size()),
                      static_cast<Eigen::Index>(path.dimension()));
    for (std::size_t m = 0; m < hits.first_index.size(); ++m)
        w.row(static_cast<Eigen::Index>(m)) =
            path.values().row(static_cast<Eigen::Index>(*hits.first_index[m]));
    return w;
}

inline void write_timeline_csv(std::ostream& os, const HullTimeline& tl) {
    os << "i,t,changed,interior,area,perimeter,diameter\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < tl.change_flags.size(); ++i) {
        os << i << "," << tl.grid[i] << "," << int(tl.change_flags[i]) << ","
           << int(tl.interior_flags[i]) << "," << tl.functionals[i].area << ","
           << tl.functionals[i].perimeter << "," << tl.functionals[i].diameter << "\n";
    }
}

}  // namespace selfsim
