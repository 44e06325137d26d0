#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "selfsim/errors.hpp"

namespace selfsim {

inline double sample_mean(const std::vector<double>& x) {
    if (x.empty()) throw EmptySample("sample_mean: empty");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw InsufficientSamples("sample_variance: need at least 2 points");
    const double m = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double sample_median(std::vector<double> x) {
    if (x.empty()) throw EmptySample("sample_median: empty");
    const std::size_t n = x.size();
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n / 2), x.end());
    double hi = x[n / 2];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lo + hi);
}

// Biased (1/n) autocovariance estimate at the given lag, the standard
// choice for stationarity diagnostics.
inline double sample_autocovariance(const std::vector<double>& x, std::size_t lag) {
    if (x.size() < lag + 2) throw InsufficientSamples("sample_autocovariance: series too short");
    const double m = sample_mean(x);
    double s = 0.0;
    for (std::size_t i = 0; i + lag < x.size(); ++i) s += (x[i] - m) * (x[i + lag] - m);
    return s / static_cast<double>(x.size());
}

// Two-sample Kolmogorov-Smirnov.

inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw EmptySample("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic p-value with the small-sample correction of Stephens;
// adequate for the sample sizes used here (hundreds and up).
inline double ks_pvalue(double statistic, std::size_t na, std::size_t nb) {
    if (na == 0 || nb == 0) throw EmptySample("ks_pvalue: empty sample");
    const double ne = static_cast<double>(na) * static_cast<double>(nb) /
                      static_cast<double>(na + nb);
    const double sne = std::sqrt(ne);
    const double lambda = (sne + 0.12 + 0.11 / sne) * statistic;
    if (lambda <= 0.0) return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * lambda * lambda * static_cast<double>(k) *
                                     static_cast<double>(k));
        p += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

inline KsResult ks_test(const std::vector<double>& a, const std::vector<double>& b) {
    KsResult r;
    r.statistic = ks_statistic(a, b);
    r.p_value = ks_pvalue(r.statistic, a.size(), b.size());
    return r;
}

// Empirical characteristic function over sample rows: phi(u) = mean of
// exp(i <u, X_j>).  Also reports the standard error of the real part,
// which is what symmetric-law checks compare.
struct EcfResult {
    std::complex<double> value{0.0, 0.0};
    double real_se = 0.0;
};

inline EcfResult empirical_cf(const Eigen::MatrixXd& samples, const Eigen::VectorXd& u) {
    if (samples.rows() < 2) throw InsufficientSamples("empirical_cf: need at least 2 samples");
    if (samples.cols() != u.size()) throw GridMismatch("empirical_cf: dimension mismatch");
    const Eigen::VectorXd proj = samples * u;
    const auto n = static_cast<double>(proj.size());
    double cr = 0.0, ci = 0.0, cr2 = 0.0;
    for (Eigen::Index i = 0; i < proj.size(); ++i) {
        const double c = std::cos(proj[i]);
        cr += c;
        ci += std::sin(proj[i]);
        cr2 += c * c;
    }
    EcfResult r;
    r.value = {cr / n, ci / n};
    const double var = std::max(0.0, (cr2 / n - (cr / n) * (cr / n)) * n / (n - 1.0));
    r.real_se = std::sqrt(var / n);
    return r;
}

}  // namespace selfsim
