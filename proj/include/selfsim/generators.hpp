#pragma once

#include <cmath>
#include <numbers>

#include "selfsim/path.hpp"

namespace selfsim {

// Deterministic planar paths with closed-form hulls and winding, used as
// oracles and negative controls.

// One counterclockwise turn per unit time on a circle of the given
// radius; clockwise when radius is paired with negative `turns_sign`.
inline Path circle_path(const TimeGrid& grid, double radius = 1.0, double turns_sign = 1.0) {
    if (!(radius > 0.0)) throw InvalidScale("circle_path: radius must be positive");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(grid.size()), 2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = turns_sign * 2.0 * std::numbers::pi * grid[i];
        x(static_cast<Eigen::Index>(i), 0) = radius * std::cos(a);
        x(static_cast<Eigen::Index>(i), 1) = radius * std::sin(a);
    }
    return Path(grid, std::move(x));
}

// Logarithmic spiral X(t) = (t cos(log t), t sin(log t)) on positive
// times: the continuous argument is exactly log t, so nu[s, t] =
// log t - log s, growing one radian per e-fold toward either end.
inline Path spiral_path(const TimeGrid& grid) {
    if (!(grid.front() > 0.0)) throw NonPositiveTime("spiral_path: times must be positive");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(grid.size()), 2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double a = std::log(t);
        x(static_cast<Eigen::Index>(i), 0) = t * std::cos(a);
        x(static_cast<Eigen::Index>(i), 1) = t * std::sin(a);
    }
    return Path(grid, std::move(x));
}

// Straight ray X(t) = t v: constant argument, zero winding, endpoint
// always extreme in the hull.
inline Path ray_path(const TimeGrid& grid, const Eigen::Vector2d& direction) {
    if (!(direction.norm() > 0.0)) throw InvalidScale("ray_path: zero direction");
    if (!(grid.front() >= 0.0)) throw NonPositiveTime("ray_path: times must be >= 0");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(grid.size()), 2);
    for (std::size_t i = 0; i < grid.size(); ++i)
        x.row(static_cast<Eigen::Index>(i)) = grid[i] * direction.transpose();
    return Path(grid, std::move(x));
}

}  // namespace selfsim
