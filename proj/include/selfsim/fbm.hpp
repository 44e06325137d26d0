#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>

#include "selfsim/path.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/tolerances.hpp"

namespace selfsim {

// Scalar fractional Brownian kernel (per unit of <Qe,e>).
inline double fbm_covariance(double t, double s, double h) {
    if (!(h > 0.0 && h < 1.0)) throw InvalidIndex("fbm_covariance: h must lie in (0,1)");
    if (!(t >= 0.0 && s >= 0.0)) throw NonPositiveTime("fbm_covariance: times must be >= 0");
    return 0.5 * (std::pow(t, 2.0 * h) + std::pow(s, 2.0 * h) -
                  std::pow(std::abs(t - s), 2.0 * h));
}

struct FbmSpec {
    double hindex = 0.5;
    std::size_t dim = 1;
    Eigen::MatrixXd q;  // covariance of the process at t=1

    // Standard spec: identity coordinate covariance at every H.
    static FbmSpec standard(double h, std::size_t d) {
        FbmSpec s;
        s.hindex = h;
        s.dim = d;
        s.q = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(d));
        s.validate();
        return s;
    }

    void validate() const {
        if (!(hindex > 0.0 && hindex < 1.0))
            throw InvalidIndex("FbmSpec: hindex must lie in (0,1)");
        if (dim < 1) throw InvalidIndex("FbmSpec: dim must be >= 1");
        if (q.rows() != static_cast<Eigen::Index>(dim) ||
            q.cols() != static_cast<Eigen::Index>(dim))
            throw MalformedInput("FbmSpec: q must be dim x dim");
        if ((q - q.transpose()).cwiseAbs().maxCoeff() > tolerances().symmetry_abs)
            throw MalformedInput("FbmSpec: q must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < tolerances().psd_floor)
            throw MalformedInput("FbmSpec: q must be positive semidefinite");
    }
};

inline bool check_nondegenerate_fbm(const FbmSpec& spec) {
    spec.validate();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(spec.q);
    const auto& sv = svd.singularValues();
    const double cutoff = tolerances().rank_rel * sv.maxCoeff();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return rank == static_cast<Eigen::Index>(spec.dim);
}

namespace detail {

// Sampling factor F with F F' = M for a symmetric PSD matrix, via
// Cholesky when it succeeds and pivoted LDL' with clamping of tiny
// negative pivots otherwise.  Pivots below the PSD floor (scaled by the
// matrix magnitude) mean the input was not a covariance matrix.
inline Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success)
        throw FactorizationFailure("psd_factor: LDLT failed");
    Eigen::VectorXd d = ldlt.vectorD();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] < tolerances().psd_floor * scale)
            throw FactorizationFailure("psd_factor: matrix indefinite beyond tolerance");
        d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
    }
    Eigen::MatrixXd f = ldlt.matrixL();
    f = f * d.asDiagonal();
    return ldlt.transpositionsP().transpose() * f;
}

// Mixing matrix A with A A' = q: symmetric square root when q has full
// numerical rank, pivoted lower factor otherwise.  The choice does not
// affect the law, only which bits come out; it is fixed for determinism.
inline Eigen::MatrixXd coordinate_mixer(const Eigen::MatrixXd& q) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    if (es.info() != Eigen::Success)
        throw FactorizationFailure("coordinate_mixer: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cutoff = tolerances().rank_rel * std::max(0.0, ev.maxCoeff());
    bool full_rank = true;
    Eigen::VectorXd root(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] <= cutoff) full_rank = false;
        root[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
    }
    if (full_rank)
        return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    return psd_factor(q);
}

}  // namespace detail

// Exact FBM sampling on a fixed grid: factor the kernel matrix of the
// positive grid times once, then every draw is factor * normals plus a
// coordinate mix.  H = 1/2 uses the closed-form Cholesky factor of
// min(t,s) (independent increments), which avoids the O(n^3)
// factorization entirely.
class FbmSampler {
public:
    FbmSampler(FbmSpec spec, TimeGrid grid) : spec_(std::move(spec)), grid_(std::move(grid)) {
        spec_.validate();
        if (!(grid_.front() >= 0.0))
            throw NonPositiveTime("FbmSampler: grid times must be >= 0");
        zero_first_ = grid_.starts_at_zero();
        const std::size_t m = grid_.size() - (zero_first_ ? 1 : 0);
        if (m == 0) throw InvalidIndex("FbmSampler: no positive grid times");
        mixer_ = detail::coordinate_mixer(spec_.q);
        if (spec_.hindex == 0.5) {
            sqrt_dt_.resize(m);
            double prev = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double t = grid_[i + (zero_first_ ? 1 : 0)];
                sqrt_dt_[i] = std::sqrt(t - prev);
                prev = t;
            }
        } else {
            Eigen::MatrixXd kernel(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i) {
                const double ti = grid_[i + (zero_first_ ? 1 : 0)];
                for (std::size_t j = 0; j <= i; ++j) {
                    const double tj = grid_[j + (zero_first_ ? 1 : 0)];
                    const double k = fbm_covariance(ti, tj, spec_.hindex);
                    kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
                    kernel(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
                }
            }
            factor_ = detail::psd_factor(kernel);
        }
    }

    const FbmSpec& spec() const { return spec_; }
    const TimeGrid& grid() const { return grid_; }

    // Draw order is fixed (coordinate-major), so output is a pure function
    // of (spec, grid, seed).
    Path sample(std::uint64_t seed) const {
        const std::size_t m = sqrt_dt_.empty() ? static_cast<std::size_t>(factor_.rows())
                                               : sqrt_dt_.size();
        const auto d = static_cast<Eigen::Index>(spec_.dim);
        CounterRng rng(seed);
        Eigen::MatrixXd z(static_cast<Eigen::Index>(m), d);
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i)
                z(i, j) = rng.next_normal();
        Eigen::MatrixXd w;
        if (!sqrt_dt_.empty()) {
            w.resize(static_cast<Eigen::Index>(m), d);
            for (Eigen::Index j = 0; j < d; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    acc += sqrt_dt_[i] * z(static_cast<Eigen::Index>(i), j);
                    w(static_cast<Eigen::Index>(i), j) = acc;
                }
            }
        } else {
            w = factor_ * z;
        }
        Eigen::MatrixXd x(static_cast<Eigen::Index>(grid_.size()), d);
        if (zero_first_) {
            x.row(0).setZero();
            x.bottomRows(static_cast<Eigen::Index>(m)) = w * mixer_.transpose();
        } else {
            x = w * mixer_.transpose();
        }
        return Path(grid_, std::move(x));
    }

private:
    FbmSpec spec_;
    TimeGrid grid_;
    bool zero_first_ = false;
    Eigen::MatrixXd factor_;      // empty when the H=1/2 fast path applies
    std::vector<double> sqrt_dt_;
    Eigen::MatrixXd mixer_;
};

inline Path sample_fbm(const FbmSpec& spec, const TimeGrid& grid, std::uint64_t seed) {
    return FbmSampler(spec, grid).sample(seed);
}

// Time reversal about the horizon: Y(t) = X(T) - X(T - t) on the same
// grid, which must be reflection-symmetric so T - t_i is itself a grid
// time.
inline Path reversed_increment_path(const Path& path) {
    const std::size_t n = path.size();
    const double total = path.grid().back();
    if (!(path.grid().front() == 0.0))
        throw AsymmetricGrid("reversed_increment_path: grid must start at 0");
    const double tol = tolerances().grid_match_rel * std::max(1.0, std::abs(total));
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(path.grid()[i] + path.grid()[n - 1 - i] - total) > tol)
            throw AsymmetricGrid("reversed_increment_path: grid not symmetric under t -> T - t");
    }
    Eigen::MatrixXd y(path.values().rows(), path.values().cols());
    const Eigen::MatrixXd& x = path.values();
    for (std::size_t i = 0; i < n; ++i)
        y.row(static_cast<Eigen::Index>(i)) =
            x.row(static_cast<Eigen::Index>(n - 1)) -
            x.row(static_cast<Eigen::Index>(n - 1 - i));
    return Path(path.grid(), std::move(y));
}

}  // namespace selfsim
