#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <utility>

#include "selfsim/errors.hpp"
#include "selfsim/time_grid.hpp"

namespace selfsim {

// A sampled trajectory: one state row per grid time.
class Path {
public:
    Path(TimeGrid grid, Eigen::MatrixXd values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (static_cast<std::size_t>(values_.rows()) != grid_.size())
            throw GridMismatch("Path: value rows must match grid size");
        if (values_.cols() < 1) throw InvalidIndex("Path: dimension must be at least 1");
        if (!values_.allFinite()) throw MalformedInput("Path: non-finite state");
    }

    const TimeGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& values() const { return values_; }
    std::size_t size() const { return grid_.size(); }
    std::size_t dimension() const { return static_cast<std::size_t>(values_.cols()); }

    double time(std::size_t i) const { return grid_[i]; }
    Eigen::VectorXd state(std::size_t i) const {
        if (i >= size()) throw InvalidIndex("Path::state: index out of range");
        return values_.row(static_cast<Eigen::Index>(i)).transpose();
    }

    // Self-similar rescaling: t -> c t, x -> c^H x.
    Path rescaled(double c, double hurst) const {
        if (!(c > 0.0) || !std::isfinite(c)) throw InvalidScale("Path::rescaled: c must be positive");
        return Path(grid_.scaled(c), values_ * std::pow(c, hurst));
    }

    // Sub-path on grid indices [first, last].
    Path slice(std::size_t first, std::size_t last) const {
        if (first > last || last >= size()) throw InvalidIndex("Path::slice: bad range");
        std::vector<double> t(grid_.times().begin() + static_cast<std::ptrdiff_t>(first),
                              grid_.times().begin() + static_cast<std::ptrdiff_t>(last) + 1);
        return Path(TimeGrid(std::move(t)),
                    values_.middleRows(static_cast<Eigen::Index>(first),
                                       static_cast<Eigen::Index>(last - first + 1)));
    }

private:
    TimeGrid grid_;
    Eigen::MatrixXd values_;
};

}  // namespace selfsim
