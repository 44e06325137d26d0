#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "selfsim/errors.hpp"
#include "selfsim/tolerances.hpp"

namespace selfsim {

namespace detail {

struct SimplexSolution {
    double objective = 0.0;
    Eigen::VectorXd x;
};

// Maximize c'x subject to Ax <= b, x >= 0, with b >= 0 so the slack basis
// is feasible and no phase-1 is needed.  Bland's rule, so termination is
// guaranteed; the iteration cap is a safety net only.
inline SimplexSolution simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (b.size() != m || c.size() != n) throw GridMismatch("simplex_max: shape mismatch");
    if (b.minCoeff() < 0.0) throw Error("simplex_max: rhs must be nonnegative");

    Eigen::MatrixXd T(m + 1, n + m + 1);
    T.setZero();
    T.block(0, 0, m, n) = A;
    T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    T.col(n + m).head(m) = b;
    T.row(m).head(n) = -c.transpose();

    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

    const double eps = 1e-11;
    const long cap = 200 * static_cast<long>(m + n) + 10000;
    for (long iter = 0; iter < cap; ++iter) {
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < n + m; ++j) {
            if (T(m, j) < -eps) { enter = j; break; }
        }
        if (enter < 0) {
            SimplexSolution s;
            s.x = Eigen::VectorXd::Zero(n);
            for (Eigen::Index i = 0; i < m; ++i)
                if (basis[static_cast<std::size_t>(i)] < n)
                    s.x[basis[static_cast<std::size_t>(i)]] = T(i, n + m);
            s.objective = T(m, n + m);
            return s;
        }
        Eigen::Index leave = -1;
        double best_ratio = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double a = T(i, enter);
            if (a > eps) {
                const double ratio = T(i, n + m) / a;
                if (leave < 0 || ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps &&
                     basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) throw Error("simplex_max: unbounded objective");
        T.row(leave) /= T(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }
    throw Error("simplex_max: iteration cap exceeded");
}

}  // namespace detail

// Strict origin-interior test for conv(points), any dimension.  The origin
// fails to be interior exactly when some nonzero direction u has
// <x_i, u> <= 0 for every point, so we search the cone {Xu <= 0} boxed to
// ||u||_inf <= 1 for a coordinate bounded away from zero, via 2d LPs
// maximizing +/- u_j.  In exact arithmetic each LP optimum is 0 (interior)
// or 1 (a supporting direction exists); the tolerance only absorbs pivots'
// round-off.  Points are direction-normalized first, which is exact for
// the cone condition and keeps the tolerance band geometry-uniform.
struct InteriorCertificate {
    bool interior = false;
    double objective = 0.0;          // largest LP optimum seen
    Eigen::VectorXd direction;       // supporting direction when not interior
};

inline InteriorCertificate origin_interior_certificate(const Eigen::MatrixXd& points) {
    if (points.rows() == 0) throw EmptySample("origin_interior_certificate: no points");
    const Eigen::Index d = points.cols();
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const double nrm = points.row(i).norm();
        if (nrm > 0.0) rows.push_back(points.row(i).transpose() / nrm);
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());

    Eigen::MatrixXd A(n + 2 * d, 2 * d);
    Eigen::VectorXd b(n + 2 * d);
    for (Eigen::Index i = 0; i < n; ++i) {
        A.row(i).head(d) = rows[static_cast<std::size_t>(i)].transpose();
        A.row(i).tail(d) = -rows[static_cast<std::size_t>(i)].transpose();
        b[i] = 0.0;
    }
    A.bottomRows(2 * d) = Eigen::MatrixXd::Identity(2 * d, 2 * d);
    b.tail(2 * d).setOnes();

    InteriorCertificate cert;
    cert.interior = true;
    cert.direction = Eigen::VectorXd::Zero(d);
    for (Eigen::Index j = 0; j < 2 * d; ++j) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * d);
        const Eigen::Index coord = j % d;
        const double sign = (j < d) ? 1.0 : -1.0;
        c[coord] = sign;
        c[d + coord] = -sign;
        const auto sol = detail::simplex_max(A, b, c);
        if (sol.objective > cert.objective) {
            cert.objective = sol.objective;
            cert.direction = sol.x.head(d) - sol.x.tail(d);
        }
        if (sol.objective > tolerances().lp_interior) cert.interior = false;
    }
    if (cert.interior) cert.direction.setZero();
    return cert;
}

inline bool contains_origin_interior(const Eigen::MatrixXd& points) {
    return origin_interior_certificate(points).interior;
}

}  // namespace selfsim
