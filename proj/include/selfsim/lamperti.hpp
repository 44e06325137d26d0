#pragma once

#include <cmath>

#include "selfsim/path.hpp"

namespace selfsim {

// Lamperti correspondence between an H-self-similar process X on (0, inf)
// and a stationary process L on the line:
//
//     L(u) = e^{-Hu} X(e^u),    X(t) = t^H L(log t).
//
// The forward map needs strictly positive times (log-time of 0 does not
// exist), so paths pinned at t = 0 must be sliced first.

inline Path lamperti_transform(const Path& path, double hurst) {
    if (!(hurst > 0.0) || !std::isfinite(hurst))
        throw InvalidScale("lamperti_transform: hurst must be positive");
    if (!(path.time(0) > 0.0))
        throw NonPositiveTime("lamperti_transform: all times must be positive");
    const std::size_t n = path.size();
    std::vector<double> u(n);
    Eigen::MatrixXd values(path.values());
    for (std::size_t i = 0; i < n; ++i) {
        const double t = path.time(i);
        u[i] = std::log(t);
        values.row(static_cast<Eigen::Index>(i)) *= std::pow(t, -hurst);
    }
    return Path(TimeGrid(std::move(u)), std::move(values));
}

inline Path lamperti_inverse(const Path& stationary, double hurst) {
    if (!(hurst > 0.0) || !std::isfinite(hurst))
        throw InvalidScale("lamperti_inverse: hurst must be positive");
    const std::size_t n = stationary.size();
    std::vector<double> t(n);
    Eigen::MatrixXd values(stationary.values());
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = std::exp(stationary.time(i));
        values.row(static_cast<Eigen::Index>(i)) *= std::pow(t[i], hurst);
    }
    return Path(TimeGrid(std::move(t)), std::move(values));
}

}  // namespace selfsim
