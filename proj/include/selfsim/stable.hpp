#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "selfsim/path.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/tolerances.hpp"

namespace selfsim {

struct SpectralAtom {
    Eigen::VectorXd direction;  // unit vector
    double weight = 0.0;
};

// Distribution of jump directions on the unit sphere.
struct SpectralMeasure {
    enum class Kind { discrete, uniform_sphere };

    Kind kind = Kind::uniform_sphere;
    std::size_t dim = 1;
    std::vector<SpectralAtom> atoms;  // discrete only

    static SpectralMeasure uniform(std::size_t d) {
        SpectralMeasure m;
        m.kind = Kind::uniform_sphere;
        m.dim = d;
        m.validate();
        return m;
    }

    static SpectralMeasure discrete(std::size_t d, std::vector<SpectralAtom> atoms) {
        SpectralMeasure m;
        m.kind = Kind::discrete;
        m.dim = d;
        m.atoms = std::move(atoms);
        m.validate();
        return m;
    }

    void validate() const {
        if (dim < 1) throw InvalidIndex("SpectralMeasure: dim must be >= 1");
        if (kind == Kind::uniform_sphere) {
            if (!atoms.empty()) throw MalformedInput("SpectralMeasure: uniform-sphere has no atoms");
            return;
        }
        if (atoms.empty()) throw MalformedInput("SpectralMeasure: discrete measure needs atoms");
        double total = 0.0;
        for (const auto& a : atoms) {
            if (a.direction.size() != static_cast<Eigen::Index>(dim))
                throw MalformedInput("SpectralMeasure: atom dimension mismatch");
            if (std::abs(a.direction.norm() - 1.0) > tolerances().unit_norm_abs)
                throw MalformedInput("SpectralMeasure: atom direction must have unit norm");
            if (!(a.weight > 0.0)) throw MalformedInput("SpectralMeasure: atom weight must be positive");
            total += a.weight;
        }
        if (std::abs(total - 1.0) > tolerances().symmetry_abs)
            throw MalformedInput("SpectralMeasure: weights must sum to 1");
    }

    // Closed under negation with matching weights (uniform-sphere always).
    bool is_symmetric() const {
        if (kind == Kind::uniform_sphere) return true;
        for (const auto& a : atoms) {
            bool matched = false;
            for (const auto& b : atoms) {
                if ((a.direction + b.direction).cwiseAbs().maxCoeff() <=
                        tolerances().unit_norm_abs &&
                    std::abs(a.weight - b.weight) <= tolerances().symmetry_abs) {
                    matched = true;
                    break;
                }
            }
            if (!matched) return false;
        }
        return true;
    }
};

inline bool check_nondegenerate_stable(const SpectralMeasure& sigma) {
    sigma.validate();
    if (sigma.kind == SpectralMeasure::Kind::uniform_sphere) return true;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(sigma.dim),
                      static_cast<Eigen::Index>(sigma.atoms.size()));
    for (std::size_t j = 0; j < sigma.atoms.size(); ++j)
        m.col(static_cast<Eigen::Index>(j)) = sigma.atoms[j].direction;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double cutoff = tolerances().rank_rel * sv.maxCoeff();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return rank == static_cast<Eigen::Index>(sigma.dim);
}

// Total sigma-mass of the closed quadrant selected by theta (bit j set:
// coordinate j >= 0; clear: <= 0).
inline double quadrant_mass(const SpectralMeasure& sigma, std::size_t theta) {
    sigma.validate();
    if (theta >= (std::size_t{1} << sigma.dim))
        throw InvalidIndex("quadrant_mass: theta out of range");
    if (sigma.kind == SpectralMeasure::Kind::uniform_sphere)
        return std::pow(0.5, static_cast<double>(sigma.dim));
    double mass = 0.0;
    for (const auto& a : sigma.atoms) {
        bool inside = true;
        for (std::size_t j = 0; j < sigma.dim; ++j) {
            const double x = a.direction[static_cast<Eigen::Index>(j)];
            const bool want_pos = (theta >> j) & 1u;
            if ((want_pos && x < 0.0) || (!want_pos && x > 0.0)) {
                inside = false;
                break;
            }
        }
        if (inside) mass += a.weight;
    }
    return mass;
}

struct StableSpec {
    double alpha = 1.5;
    SpectralMeasure sigma;
    double scale = 1.0;           // the free constant multiplying the series
    std::size_t truncation = 10000;  // series terms kept

    double hurst() const { return 1.0 / alpha; }

    void validate() const {
        if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
            throw InvalidAlpha("StableSpec: alpha must lie in (0,1) or (1,2)");
        sigma.validate();
        if (!(scale > 0.0)) throw InvalidScale("StableSpec: scale must be positive");
        if (truncation < 1) throw InvalidIndex("StableSpec: truncation must be >= 1");
        if (alpha > 1.0 && !sigma.is_symmetric())
            throw AsymmetricMeasure("StableSpec: alpha > 1 requires a symmetric measure");
    }
};

struct JumpEvent {
    std::size_t k = 0;  // 1-based series index
    double eta = 0.0;   // jump time in (0,1)
    Eigen::VectorXd jump;
};

struct StablePathSample {
    Path path;
    std::vector<JumpEvent> events;  // in series order
};

namespace detail {

// Vose alias table: every draw consumes exactly two uniforms, so the
// per-term stream layout is independent of the weights.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t n = weights.size();
        prob_.assign(n, 0.0);
        alias_.assign(n, 0);
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i)
            scaled[i] = weights[i] * static_cast<double>(n) / total;
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i)
            (scaled[i] < 1.0 ? small : large).push_back(i);
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            const std::size_t l = large.back();
            small.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t i : large) prob_[i] = 1.0;
        for (std::size_t i : small) prob_[i] = 1.0;
    }

    std::size_t draw(CounterRng& rng) const {
        const double u1 = rng.next_uniform();
        const double u2 = rng.next_uniform();
        auto i = static_cast<std::size_t>(u1 * static_cast<double>(prob_.size()));
        if (i >= prob_.size()) i = prob_.size() - 1;
        return u2 < prob_[i] ? i : alias_[i];
    }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

}  // namespace detail

// Truncated jump-series sampler on [0,1]: after K terms of
//
//     S(t) = c * sum_k Gamma_k^{-1/alpha} eps_k 1[eta_k <= t],
//
// S is a right-continuous step function recorded at grid times.  The
// per-term draw order is (gamma_k, eps_k, eta_k), so two runs with the
// same seed and different K agree on every shared term, which is what the
// truncation-coupling check relies on.
class StableSampler {
public:
    StableSampler(StableSpec spec, TimeGrid grid) : spec_(std::move(spec)), grid_(std::move(grid)) {
        spec_.validate();
        if (!(grid_.front() >= 0.0))
            throw NonPositiveTime("StableSampler: grid times must be >= 0");
        if (grid_.back() > 1.0)
            throw InvalidScale("StableSampler: grid must lie within [0,1]");
        if (spec_.sigma.kind == SpectralMeasure::Kind::discrete) {
            std::vector<double> w;
            w.reserve(spec_.sigma.atoms.size());
            for (const auto& a : spec_.sigma.atoms) w.push_back(a.weight);
            alias_.emplace(w);
        }
    }

    const StableSpec& spec() const { return spec_; }
    const TimeGrid& grid() const { return grid_; }

    StablePathSample sample_with_events(std::uint64_t seed) const {
        std::vector<JumpEvent> events;
        events.reserve(spec_.truncation);
        Path path = assemble(seed, &events);
        return StablePathSample{std::move(path), std::move(events)};
    }

    Path sample(std::uint64_t seed) const { return assemble(seed, nullptr); }

private:
    // Jumps are binned at the first grid index whose time is >= eta and the
    // bins prefix-summed, in term order either way, so sample() and
    // sample_with_events() produce bit-identical paths.
    Path assemble(std::uint64_t seed, std::vector<JumpEvent>* events) const {
        CounterRng rng(seed);
        const std::size_t k_max = spec_.truncation;
        const auto d = static_cast<Eigen::Index>(spec_.sigma.dim);
        const auto n = static_cast<Eigen::Index>(grid_.size());

        Eigen::MatrixXd bins = Eigen::MatrixXd::Zero(n, d);
        Eigen::VectorXd eps(d);
        double gamma = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            gamma += rng.next_exponential();
            if (alias_) {
                eps = spec_.sigma.atoms[alias_->draw(rng)].direction;
            } else {
                for (Eigen::Index j = 0; j < d; ++j) eps[j] = rng.next_normal();
                const double nrm = eps.norm();
                if (!(nrm > 0.0)) throw Error("StableSampler: degenerate sphere draw");
                eps /= nrm;
            }
            const double eta = rng.next_uniform();
            const double mag = spec_.scale * std::pow(gamma, -1.0 / spec_.alpha);
            if (events) {
                JumpEvent ev;
                ev.k = k;
                ev.eta = eta;
                ev.jump = mag * eps;
                events->push_back(std::move(ev));
            }
            const auto it = std::lower_bound(grid_.times().begin(), grid_.times().end(), eta);
            if (it == grid_.times().end()) continue;  // lands past the horizon
            bins.row(static_cast<Eigen::Index>(it - grid_.times().begin())) +=
                mag * eps.transpose();
        }

        Eigen::MatrixXd x(n, d);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i = 0; i < n; ++i) {
            acc += bins.row(i).transpose();
            x.row(i) = acc.transpose();
        }
        return Path(grid_, std::move(x));
    }

    StableSpec spec_;
    TimeGrid grid_;
    std::optional<detail::AliasTable> alias_;
};

inline Path sample_lepage(const StableSpec& spec, const TimeGrid& grid, std::uint64_t seed) {
    return StableSampler(spec, grid).sample(seed);
}

inline StablePathSample sample_lepage_with_events(const StableSpec& spec, const TimeGrid& grid,
                                                  std::uint64_t seed) {
    return StableSampler(spec, grid).sample_with_events(seed);
}

// High-probability sup-norm bound on the discarded series tail
// c * sum_{k>K} Gamma_k^{-1/alpha} eps_k 1[eta_k <= t].
//
// Step 1: pick delta so that P{Gamma_k < (1-delta) k for some k > K} is
// within budget, from the Chernoff bound P{Gamma_k <= (1-delta)k} <=
// exp(k (delta + ln(1-delta))) summed over k > K.
//
// Step 2, alpha < 1: on that event the tail is dominated termwise, so
// sup_t ||tail|| <= c (1-delta)^{-1/alpha} * integral_K^inf x^{-1/alpha} dx
// deterministically; all the failure probability sits in step 1.
//
// Step 2, alpha > 1 (measure symmetric by construction): conditioned on
// the gammas the terms are independent, symmetric, and norm-bounded by
// b_k = c ((1-delta)k)^{-1/alpha}; a reflection inequality turns the
// running sup into the full sum, and a Hoeffding bound on the full sum
// gives sqrt(2 vbar ln(4 / budget)) with vbar = sum b_k^2, integral-
// bounded.  Dimension does not enter: both inequalities hold for norms of
// vector sums.
inline double truncation_tail_bound(const StableSpec& spec, double confidence) {
    spec.validate();
    if (!(confidence > 0.0 && confidence < 1.0))
        throw InvalidScale("truncation_tail_bound: confidence must lie in (0,1)");
    const double eps = 1.0 - confidence;
    const double k = static_cast<double>(spec.truncation);
    const double a = spec.alpha;
    const double gamma_budget = (a < 1.0) ? eps : eps / 2.0;

    const auto union_tail = [&](double delta) {
        const double phi = delta + std::log1p(-delta);  // < 0
        return std::exp((k + 1.0) * phi) / (-std::expm1(phi));
    };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    if (union_tail(hi) > gamma_budget)
        return std::numeric_limits<double>::infinity();  // K too small to certify
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (union_tail(mid) <= gamma_budget) hi = mid; else lo = mid;
    }
    const double delta = hi;

    if (a < 1.0) {
        return spec.scale * std::pow(1.0 - delta, -1.0 / a) * (a / (1.0 - a)) *
               std::pow(k, 1.0 - 1.0 / a);
    }
    const double vbar = spec.scale * spec.scale * std::pow(1.0 - delta, -2.0 / a) *
                        std::pow(k, 1.0 - 2.0 / a) / (2.0 / a - 1.0);
    return std::sqrt(2.0 * vbar * std::log(4.0 / (eps / 2.0)));
}

// Characteristic-function exponent lambda(u) >= 0 of the full (untruncated)
// law at t = 1, so E exp(i<u, S(1)>) = exp(-lambda(u)):
//
//     lambda(u) = c^alpha K_alpha integral_S |<u, s>|^alpha sigma(ds),
//     K_alpha   = pi / (2 Gamma(alpha) sin(pi alpha / 2)),
//
// with the uniform-sphere integral reducing to
// ||u||^alpha Gamma((alpha+1)/2) Gamma(d/2) / (Gamma((d+alpha)/2) sqrt(pi)).
inline double stable_cf_exponent(const StableSpec& spec, const Eigen::VectorXd& u) {
    spec.validate();
    if (static_cast<std::size_t>(u.size()) != spec.sigma.dim)
        throw GridMismatch("stable_cf_exponent: u dimension mismatch");
    const double a = spec.alpha;
    const double k_alpha =
        std::numbers::pi / (2.0 * std::tgamma(a) * std::sin(std::numbers::pi * a / 2.0));
    double integral = 0.0;
    if (spec.sigma.kind == SpectralMeasure::Kind::uniform_sphere) {
        const double d = static_cast<double>(spec.sigma.dim);
        const double moment = std::tgamma((a + 1.0) / 2.0) * std::tgamma(d / 2.0) /
                              (std::tgamma((d + a) / 2.0) * std::sqrt(std::numbers::pi));
        integral = std::pow(u.norm(), a) * moment;
    } else {
        for (const auto& atom : spec.sigma.atoms)
            integral += atom.weight * std::pow(std::abs(u.dot(atom.direction)), a);
    }
    return std::pow(spec.scale, a) * k_alpha * integral;
}

// Additive correction to the exponent from dropping jumps smaller than the
// truncation cutoff: with the tail scaled to its mean, Gamma_K ~= K, the
// truncated law has E exp(i<u, S_K(1)>) ~= exp(-lambda(u) + corr(u)) where
//
//     corr(u) = sum_atoms w integral_0^{y0} (1 - cos y) alpha y^{-alpha-1} dy,
//     y0      = |c <u, eps>| K^{-1/alpha},
//
// evaluated by the alternating series alpha |a|^alpha sum_j (-1)^{j+1}
// y0^{2j-alpha} / ((2j)! (2j-alpha)) per atom of size a = c <u, eps>.  For
// the uniform sphere the atom average is replaced by a 256-point trapezoid
// over the polar angle against the sphere's cross-section weight.
inline double stable_cf_truncation_correction(const StableSpec& spec, const Eigen::VectorXd& u) {
    spec.validate();
    if (static_cast<std::size_t>(u.size()) != spec.sigma.dim)
        throw GridMismatch("stable_cf_truncation_correction: u dimension mismatch");
    const double a = spec.alpha;
    const double kinv = std::pow(static_cast<double>(spec.truncation), -1.0 / a);
    const auto one_atom = [&](double inner) {
        const double amp = std::abs(spec.scale * inner);
        if (amp == 0.0) return 0.0;
        const double y0 = amp * kinv;
        double sum = 0.0, fact = 1.0;
        for (int j = 1; j <= 40; ++j) {
            fact *= (2.0 * j - 1.0) * (2.0 * j);
            const double term = std::pow(y0, 2.0 * j - a) / (fact * (2.0 * j - a));
            sum += (j % 2 == 1) ? term : -term;
            if (term < 1e-300) break;
        }
        return a * std::pow(amp, a) * sum;
    };
    if (spec.sigma.kind == SpectralMeasure::Kind::discrete) {
        double corr = 0.0;
        for (const auto& atom : spec.sigma.atoms)
            corr += atom.weight * one_atom(u.dot(atom.direction));
        return corr;
    }
    const double unorm = u.norm();
    if (spec.sigma.dim == 1) return 0.5 * (one_atom(unorm) + one_atom(-unorm));
    const double d = static_cast<double>(spec.sigma.dim);
    const double beta =
        std::tgamma(d / 2.0) / (std::tgamma((d - 1.0) / 2.0) * std::sqrt(std::numbers::pi));
    const int m = 256;
    double corr = 0.0, wsum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double theta = std::numbers::pi * static_cast<double>(i) / m;
        double w = beta * std::pow(std::sin(theta), d - 2.0);
        if (i == 0 || i == m) w *= 0.5;
        corr += w * one_atom(unorm * std::cos(theta));
        wsum += w;
    }
    return corr / wsum;  // renormalized so the angular weight averages to 1 exactly
}

inline void write_events_csv(std::ostream& os, const std::vector<JumpEvent>& events,
                             std::size_t dim) {
    os << "k,eta";
    for (std::size_t j = 1; j <= dim; ++j) os << ",jump_x" << j;
    os << "\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& ev : events) {
        os << ev.k << "," << ev.eta;
        for (Eigen::Index j = 0; j < ev.jump.size(); ++j) os << "," << ev.jump[j];
        os << "\n";
    }
}

}  // namespace selfsim
