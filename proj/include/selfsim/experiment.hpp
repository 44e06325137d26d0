#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "selfsim/config.hpp"
#include "selfsim/fbm.hpp"
#include "selfsim/generators.hpp"
#include "selfsim/hull.hpp"
#include "selfsim/report.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/simplex.hpp"
#include "selfsim/stable.hpp"
#include "selfsim/stats.hpp"
#include "selfsim/winding.hpp"

namespace selfsim {
namespace detail {

// Work-stealing over replicate indices.  Each index writes only its own
// slot, so the records are identical at any thread count.
inline void for_each_index(std::size_t count, std::size_t threads,
                           const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// One path per seed.  A shared sampler is built once per grid; stub
// generators are deterministic and ignore the seed.
inline std::function<Path(std::uint64_t)> make_path_source(const ExperimentPlan& plan,
                                                           const TimeGrid& grid) {
    switch (plan.generator) {
        case GeneratorKind::fbm: {
            auto sampler = std::make_shared<FbmSampler>(plan.fbm, grid);
            return [sampler](std::uint64_t seed) { return sampler->sample(seed); };
        }
        case GeneratorKind::stable: {
            const double back = grid.back();
            if (back <= 1.0) {
                auto sampler = std::make_shared<StableSampler>(plan.stable, grid);
                return [sampler](std::uint64_t seed) { return sampler->sample(seed); };
            }
            // Sample on grid/back inside the sampler's [0,1] domain and map
            // values by self-similarity; the output keeps the caller's grid
            // times bit-exactly (t/back == 1 for t == back under IEEE).
            std::vector<double> inner(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) inner[i] = grid[i] / back;
            auto sampler = std::make_shared<StableSampler>(plan.stable, TimeGrid(std::move(inner)));
            const double factor = std::pow(back, plan.stable.hurst());
            auto outer = std::make_shared<TimeGrid>(grid);
            return [sampler, factor, outer](std::uint64_t seed) {
                return Path(*outer, sampler->sample(seed).values() * factor);
            };
        }
        case GeneratorKind::circle: {
            auto g = std::make_shared<TimeGrid>(grid);
            const double r = plan.circle_radius;
            return [g, r](std::uint64_t) { return circle_path(*g, r); };
        }
        case GeneratorKind::spiral: {
            auto g = std::make_shared<TimeGrid>(grid);
            return [g](std::uint64_t) { return spiral_path(*g); };
        }
        case GeneratorKind::ray: {
            auto g = std::make_shared<TimeGrid>(grid);
            const Eigen::Vector2d v = plan.ray_direction;
            return [g, v](std::uint64_t) { return ray_path(*g, v); };
        }
    }
    throw ConfigError("make_path_source: unknown generator");
}

namespace detail {

// Runs one body per replicate with simulation failures quarantined into
// the record instead of aborting the run.
template <typename Body>
inline std::vector<ReplicateRecord> run_quarantined(const ExperimentPlan& plan,
                                                    const SeedScheme& scheme, Body&& body) {
    std::vector<ReplicateRecord> records(plan.replicates);
    for_each_index(plan.replicates, plan.threads, [&](std::size_t i) {
        ReplicateRecord& rec = records[i];
        rec.index = i;
        rec.seed = scheme.replicate_seed(i);
        rec.ok = true;
        try {
            body(rec);
        } catch (const Error& e) {
            rec.ok = false;
            rec.error = e.what();
            rec.values.clear();
        }
    });
    return records;
}

inline double binomial_se(double p, std::size_t n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

// Mean of a value key over successful replicates.
inline double mean_value(const std::vector<ReplicateRecord>& recs, const std::string& key) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& r : recs) {
        if (!r.ok) continue;
        const auto it = r.values.find(key);
        if (it == r.values.end()) continue;
        s += it->second;
        ++n;
    }
    if (n == 0) throw EmptySample("mean_value: no successful replicates carry '" + key + "'");
    return s / static_cast<double>(n);
}

inline std::vector<double> collect_values(const std::vector<ReplicateRecord>& recs,
                                          const std::string& key) {
    std::vector<double> out;
    out.reserve(recs.size());
    for (const auto& r : recs) {
        if (!r.ok) continue;
        const auto it = r.values.find(key);
        if (it != r.values.end()) out.push_back(it->second);
    }
    return out;
}

// Every refinement check subsamples the already generated fine path, so
// coarse hulls use subsets of the fine point set and monotonicity holds
// path by path, not just in distribution.
inline Path subsample_path(const Path& path, std::size_t stride) {
    std::vector<double> t;
    Eigen::MatrixXd v((path.size() - 1) / stride + 1,
                      static_cast<Eigen::Index>(path.dimension()));
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < path.size(); i += stride) {
        t.push_back(path.time(i));
        v.row(row++) = path.values().row(static_cast<Eigen::Index>(i));
    }
    return Path(TimeGrid(std::move(t)), v.topRows(row));
}

inline std::size_t refinement_stride(const ExperimentPlan& plan) {
    if (plan.refine_resolution < 2 || plan.refine_resolution > plan.resolution ||
        plan.resolution % plan.refine_resolution != 0)
        throw ConfigError("refine_resolution must divide resolution");
    return plan.resolution / plan.refine_resolution;
}

inline bool origin_interior_of(const Path& path) {
    if (path.dimension() == 2) {
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(path.size());
        for (std::size_t i = 0; i < path.size(); ++i)
            pts.emplace_back(path.values()(static_cast<Eigen::Index>(i), 0),
                             path.values()(static_cast<Eigen::Index>(i), 1));
        return hull_contains_origin_interior(hull_2d(std::move(pts)));
    }
    return contains_origin_interior(path.values());
}

inline bool origin_interior_of_points(const Eigen::MatrixXd& points) {
    if (points.cols() == 2) {
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(static_cast<std::size_t>(points.rows()));
        for (Eigen::Index i = 0; i < points.rows(); ++i)
            pts.emplace_back(points(i, 0), points(i, 1));
        return hull_contains_origin_interior(hull_2d(std::move(pts)));
    }
    return contains_origin_interior(points);
}

inline void fill_interior_probability(const ExperimentPlan& plan, const SeedScheme& scheme,
                                      ExperimentReport& report) {
    const TimeGrid grid = TimeGrid::uniform(0.0, plan.horizon, plan.resolution + 1);
    const auto source = make_path_source(plan, grid);
    const std::size_t stride = refinement_stride(plan);

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path path = source(rec.seed);
        bool interior = false;
        double first_time = -1.0;
        if (plan.dim == 2) {
            const HullTimeline tl = incremental_hull_timeline(path);
            interior = tl.interior_flags.back() != 0;
            if (const auto t = first_interior_time(tl)) first_time = *t;
        } else {
            interior = contains_origin_interior(path.values());
        }
        const bool coarse = origin_interior_of(subsample_path(path, stride));

        const QuadrantHits hits = quadrant_hit_times(path);
        rec.values["interior"] = interior ? 1.0 : 0.0;
        rec.values["interior_coarse"] = coarse ? 1.0 : 0.0;
        rec.values["first_interior_time"] = first_time;
        rec.values["witness_all_hit"] = hits.all_hit() ? 1.0 : 0.0;
        if (hits.all_hit()) {
            const bool witness_ok =
                origin_interior_of_points(quadrant_witness_points(path, hits));
            rec.values["witness_interior"] = witness_ok ? 1.0 : 0.0;
            rec.values["witness_violation"] = (witness_ok && interior) ? 0.0 : 1.0;
        }
    });

    const double p_fine = mean_value(report.replicates, "interior");
    const double p_coarse = mean_value(report.replicates, "interior_coarse");
    report.aggregates["p_interior"] = p_fine;
    report.aggregates["p_interior_se"] = binomial_se(p_fine, plan.replicates);
    report.aggregates["p_interior_coarse"] = p_coarse;
    report.aggregates["witness_hit_rate"] = mean_value(report.replicates, "witness_all_hit");
    const auto violations = collect_values(report.replicates, "witness_violation");
    double nviol = 0.0;
    for (double v : violations) nviol += v;
    report.aggregates["witness_violations"] = nviol;
    std::vector<double> times;
    for (double t : collect_values(report.replicates, "first_interior_time"))
        if (t >= 0.0) times.push_back(t);
    report.aggregates["first_interior_median"] = times.empty() ? -1.0 : sample_median(times);

    report.verdicts["interior_probability"] = p_fine >= plan.threshold_p;
    report.verdicts["refinement_monotone"] = p_fine >= p_coarse;
    report.verdicts["witness_sound"] = nviol == 0.0;
}

inline void fill_endpoint_interior(const ExperimentPlan& plan, const SeedScheme& scheme,
                                   ExperimentReport& report) {
    const TimeGrid grid = TimeGrid::uniform(0.0, plan.horizon, plan.resolution + 1);
    const auto source = make_path_source(plan, grid);
    const std::size_t stride = refinement_stride(plan);

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path path = source(rec.seed);
        const Eigen::MatrixXd translated =
            path.values().rowwise() - path.values().row(path.values().rows() - 1);
        const bool endpoint = origin_interior_of_points(translated);

        const Path reversed = reversed_increment_path(path);
        const bool rev_origin = origin_interior_of(reversed);

        const Path coarse_path = subsample_path(path, stride);
        const Eigen::MatrixXd coarse_translated =
            coarse_path.values().rowwise() -
            coarse_path.values().row(coarse_path.values().rows() - 1);
        const bool coarse = origin_interior_of_points(coarse_translated);

        rec.values["endpoint_interior"] = endpoint ? 1.0 : 0.0;
        rec.values["reversed_origin_interior"] = rev_origin ? 1.0 : 0.0;
        rec.values["identity_match"] = (endpoint == rev_origin) ? 1.0 : 0.0;
        rec.values["endpoint_interior_coarse"] = coarse ? 1.0 : 0.0;
    });

    const double q_fine = mean_value(report.replicates, "endpoint_interior");
    const double q_coarse = mean_value(report.replicates, "endpoint_interior_coarse");
    const double match = mean_value(report.replicates, "identity_match");
    report.aggregates["p_endpoint"] = q_fine;
    report.aggregates["p_endpoint_se"] = binomial_se(q_fine, plan.replicates);
    report.aggregates["p_endpoint_coarse"] = q_coarse;
    report.aggregates["identity_match_rate"] = match;

    report.verdicts["endpoint_probability"] = q_fine >= plan.threshold_p;
    report.verdicts["reversal_identity"] = match == 1.0;
    report.verdicts["refinement_monotone"] = q_fine >= q_coarse;
}

// Relative slack for comparing hull functionals computed independently at
// neighbouring indices; covers accumulation round-off only.
inline constexpr double kFunctionalSlack = 1e-9;

inline std::size_t count_monotone_violations(const std::vector<HullFunctionals>& f,
                                             double HullFunctionals::*member) {
    std::size_t bad = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double prev = f[i - 1].*member;
        const double next = f[i].*member;
        if (next < prev - kFunctionalSlack * std::max(1.0, std::abs(prev))) ++bad;
    }
    return bad;
}

inline void fill_staircase(const ExperimentPlan& plan, const SeedScheme& scheme,
                           ExperimentReport& report) {
    const TimeGrid grid = TimeGrid::uniform(0.0, plan.horizon, plan.resolution + 1);
    const auto source = make_path_source(plan, grid);
    const std::size_t stride = refinement_stride(plan);

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path path = source(rec.seed);
        const HullTimeline fine = incremental_hull_timeline(path);
        const HullTimeline coarse = incremental_hull_timeline(subsample_path(path, stride));

        const auto tail_from = [&](const HullTimeline& tl) {
            std::size_t i = 0;
            while (i < tl.grid.size() && tl.grid[i] < plan.staircase_tail * plan.horizon) ++i;
            return std::min(i, tl.grid.size() - 1);
        };
        rec.values["fraction_fine"] = staircase_fraction(fine, tail_from(fine));
        rec.values["fraction_coarse"] = staircase_fraction(coarse, tail_from(coarse));
        rec.values["viol_area"] =
            static_cast<double>(count_monotone_violations(fine.functionals,
                                                          &HullFunctionals::area));
        rec.values["viol_perimeter"] =
            static_cast<double>(count_monotone_violations(fine.functionals,
                                                          &HullFunctionals::perimeter));
        rec.values["viol_diameter"] =
            static_cast<double>(count_monotone_violations(fine.functionals,
                                                          &HullFunctionals::diameter));
    });

    const double mean_fine = mean_value(report.replicates, "fraction_fine");
    const double mean_coarse = mean_value(report.replicates, "fraction_coarse");
    double viol = 0.0;
    for (const char* key : {"viol_area", "viol_perimeter", "viol_diameter"})
        for (double v : collect_values(report.replicates, key)) viol += v;
    report.aggregates["mean_fraction_fine"] = mean_fine;
    report.aggregates["mean_fraction_coarse"] = mean_coarse;
    report.aggregates["functional_violations"] = viol;

    report.verdicts["staircase_refines"] = mean_fine < mean_coarse;
    report.verdicts["functional_monotone"] = viol == 0.0;
}

inline void fill_winding_growth(const ExperimentPlan& plan, const SeedScheme& scheme,
                                ExperimentReport& report) {
    std::vector<double> s_levels(plan.levels), t_levels(plan.levels);
    std::vector<double> anchors{plan.horizon};
    for (std::size_t k = 1; k <= plan.levels; ++k) {
        s_levels[k - 1] = plan.horizon * std::exp(-static_cast<double>(k));
        t_levels[k - 1] = plan.horizon * std::exp(static_cast<double>(k));
        anchors.push_back(s_levels[k - 1]);
        anchors.push_back(t_levels[k - 1]);
    }
    const TimeGrid grid = winding_master_grid(anchors, plan.points_per_efold);
    const auto source = make_path_source(plan, grid);
    const double two_pi = 2.0 * std::numbers::pi;

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path path = source(rec.seed);
        const AngularPath apath = unwrap_argument(path, plan.min_radius_guard);
        const auto near = sweep_near_zero(apath, s_levels, plan.horizon);
        const auto far = sweep_at_infinity(apath, plan.horizon, t_levels);

        for (std::size_t k = 0; k < plan.levels; ++k) {
            const std::string suffix = "_" + std::to_string(k + 1);
            rec.values["nu_nz" + suffix] = near[k].nu;
            rec.values["nu_inf" + suffix] = far[k].nu;
        }
        const bool grew_max = near.back().run_max > near.front().run_max ||
                              far.back().run_max > far.front().run_max;
        const bool grew_min = near.back().run_min < near.front().run_min ||
                              far.back().run_min < far.front().run_min;
        rec.values["growth_max"] = grew_max ? 1.0 : 0.0;
        rec.values["growth_min"] = grew_min ? 1.0 : 0.0;
        rec.values["exceed_first"] = far.front().run_max > two_pi ? 1.0 : 0.0;
        rec.values["exceed_last"] = far.back().run_max > two_pi ? 1.0 : 0.0;
        rec.values["abs_nu_last"] = std::abs(far.back().nu);
        rec.values["min_radius"] = min_radius(path);
    });

    report.aggregates["growth_max_rate"] = mean_value(report.replicates, "growth_max");
    report.aggregates["growth_min_rate"] = mean_value(report.replicates, "growth_min");
    report.aggregates["exceed_first_rate"] = mean_value(report.replicates, "exceed_first");
    report.aggregates["exceed_last_rate"] = mean_value(report.replicates, "exceed_last");
    const auto abs_last = collect_values(report.replicates, "abs_nu_last");
    const double median_ratio =
        abs_last.empty() ? 0.0
                         : sample_median(abs_last) / (static_cast<double>(plan.levels) / 2.0);
    report.aggregates["median_abs_nu_ratio"] = median_ratio;

    report.verdicts["winding_growth"] =
        report.aggregates["growth_max_rate"] >= plan.growth_fraction &&
        report.aggregates["growth_min_rate"] >= plan.growth_fraction;
    report.verdicts["exceedance_grows"] =
        report.aggregates["exceed_last_rate"] > report.aggregates["exceed_first_rate"];
    report.verdicts["median_band"] =
        median_ratio >= plan.median_lo && median_ratio <= plan.median_hi;
}

// Sub-stream seeds for replicates that need two independent draws.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return CounterRng(seed).derive(tag).key();
}

inline void fill_self_similarity(const ExperimentPlan& plan, const SeedScheme& scheme,
                                 ExperimentReport& report) {
    if (plan.scale_factor == 1.0) throw ConfigError("self_similarity_ks: scale_factor must differ from 1");
    const double t_scaled = plan.scale_factor * plan.t0;
    std::vector<double> times{0.0, plan.t0, t_scaled};
    std::sort(times.begin(), times.end());
    const TimeGrid grid{times};
    const auto source = make_path_source(plan, grid);
    const std::size_t i_scaled = grid.index_of(t_scaled);
    const std::size_t i_base = grid.index_of(plan.t0);
    const double factor = std::pow(plan.scale_factor, plan.hurst());

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path a = source(substream(rec.seed, 1));
        const Path b = source(substream(rec.seed, 2));
        rec.values["sample_a"] = a.state(i_scaled).norm();
        rec.values["sample_b"] = factor * b.state(i_base).norm();
    });

    const auto sa = collect_values(report.replicates, "sample_a");
    const auto sb = collect_values(report.replicates, "sample_b");
    const KsResult ks = ks_test(sa, sb);
    report.aggregates["ks_statistic"] = ks.statistic;
    report.aggregates["ks_p_value"] = ks.p_value;
    report.verdicts["ks_accept"] = ks.p_value >= plan.ks_level;
}

inline void fill_reversibility(const ExperimentPlan& plan, const SeedScheme& scheme,
                               ExperimentReport& report) {
    if (!(plan.t0 < plan.horizon))
        throw ConfigError("reversibility_ks: t0 must be below the horizon");
    std::vector<double> times{0.0, plan.t0, plan.horizon - plan.t0, plan.horizon};
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const TimeGrid grid{times};
    const auto source = make_path_source(plan, grid);
    const std::size_t i_t0 = grid.index_of(plan.t0);

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path a = source(substream(rec.seed, 1));
        const Path b = source(substream(rec.seed, 2));
        const Path reversed = reversed_increment_path(a);
        for (std::size_t j = 0; j < plan.dim; ++j) {
            const std::string suffix = "_" + std::to_string(j + 1);
            rec.values["rev" + suffix] =
                reversed.values()(static_cast<Eigen::Index>(i_t0), static_cast<Eigen::Index>(j));
            rec.values["fwd" + suffix] =
                b.values()(static_cast<Eigen::Index>(i_t0), static_cast<Eigen::Index>(j));
        }
    });

    bool accept = true;
    for (std::size_t j = 0; j < plan.dim; ++j) {
        const std::string suffix = "_" + std::to_string(j + 1);
        const KsResult ks = ks_test(collect_values(report.replicates, "rev" + suffix),
                                    collect_values(report.replicates, "fwd" + suffix));
        report.aggregates["ks_statistic" + suffix] = ks.statistic;
        report.aggregates["ks_p_value" + suffix] = ks.p_value;
        accept = accept && ks.p_value >= plan.ks_level;
    }
    report.verdicts["ks_accept"] = accept;
}

inline void fill_stationarity(const ExperimentPlan& plan, const SeedScheme& scheme,
                              ExperimentReport& report) {
    const double tau1 = std::exp(plan.u1);
    const double tau2 = std::exp(plan.u2);
    const bool with_autocov = plan.generator == GeneratorKind::fbm;
    const double tau_lag = std::exp(plan.u1 + plan.autocov_lag);
    std::vector<double> times{0.0, tau1, tau2};
    if (with_autocov) times.push_back(tau_lag);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const TimeGrid grid{times};
    const auto source = make_path_source(plan, grid);
    const std::size_t i1 = grid.index_of(tau1);
    const std::size_t i2 = grid.index_of(tau2);
    const double h = plan.hurst();
    const double w1 = std::exp(-h * plan.u1);
    const double w2 = std::exp(-h * plan.u2);
    const double wlag = std::exp(-h * (plan.u1 + plan.autocov_lag));

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path a = source(substream(rec.seed, 1));
        const Path b = source(substream(rec.seed, 2));
        for (std::size_t j = 0; j < plan.dim; ++j) {
            const std::string suffix = "_" + std::to_string(j + 1);
            const auto jj = static_cast<Eigen::Index>(j);
            rec.values["lam_a" + suffix] =
                w1 * a.values()(static_cast<Eigen::Index>(i1), jj);
            rec.values["lam_b" + suffix] =
                w2 * b.values()(static_cast<Eigen::Index>(i2), jj);
        }
        if (with_autocov) {
            const std::size_t ilag = grid.index_of(tau_lag);
            const double l0 = w1 * a.values()(static_cast<Eigen::Index>(i1), 0);
            const double llag = wlag * a.values()(static_cast<Eigen::Index>(ilag), 0);
            rec.values["lam_prod"] = l0 * llag;
            rec.values["lam_sq"] = l0 * l0;
        }
    });

    bool accept = true;
    for (std::size_t j = 0; j < plan.dim; ++j) {
        const std::string suffix = "_" + std::to_string(j + 1);
        const KsResult ks = ks_test(collect_values(report.replicates, "lam_a" + suffix),
                                    collect_values(report.replicates, "lam_b" + suffix));
        report.aggregates["ks_statistic" + suffix] = ks.statistic;
        report.aggregates["ks_p_value" + suffix] = ks.p_value;
        accept = accept && ks.p_value >= plan.ks_level;
    }
    report.verdicts["ks_accept"] = accept;
    if (with_autocov) {
        const double acov = mean_value(report.replicates, "lam_prod");
        const double acov0 = mean_value(report.replicates, "lam_sq");
        report.aggregates["autocov_lag"] = acov;
        report.aggregates["autocov_zero"] = acov0;
        report.verdicts["autocov_decays"] = std::abs(acov) < acov0;
    }
}

inline void fill_stable_cf(const ExperimentPlan& plan, const SeedScheme& scheme,
                           ExperimentReport& report) {
    const TimeGrid grid{std::vector<double>{0.0, 1.0}};
    const auto source = make_path_source(plan, grid);

    report.replicates = run_quarantined(plan, scheme, [&](ReplicateRecord& rec) {
        const Path path = source(rec.seed);
        for (std::size_t j = 0; j < plan.dim; ++j)
            rec.values["s_" + std::to_string(j + 1)] =
                path.values()(static_cast<Eigen::Index>(grid.size() - 1),
                              static_cast<Eigen::Index>(j));
    });

    std::vector<const ReplicateRecord*> good;
    good.reserve(report.replicates.size());
    for (const auto& r : report.replicates)
        if (r.ok) good.push_back(&r);
    if (good.empty()) throw EmptySample("stable_cf: all replicates failed");
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(good.size()),
                            static_cast<Eigen::Index>(plan.dim));
    for (std::size_t i = 0; i < good.size(); ++i)
        for (std::size_t j = 0; j < plan.dim; ++j)
            samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                good[i]->values.at("s_" + std::to_string(j + 1));

    bool accept = true;
    for (std::size_t i = 0; i < plan.u_values.size(); ++i) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(plan.dim));
        u[0] = plan.u_values[i];
        const EcfResult ecf = empirical_cf(samples, u);
        const double lambda = stable_cf_exponent(plan.stable, u);
        const double corr = stable_cf_truncation_correction(plan.stable, u);
        const double oracle = std::exp(-lambda + corr);
        const std::string suffix = "_" + std::to_string(i + 1);
        report.aggregates["ecf_re" + suffix] = ecf.value.real();
        report.aggregates["ecf_im" + suffix] = ecf.value.imag();
        report.aggregates["ecf_se" + suffix] = ecf.real_se;
        report.aggregates["cf_oracle" + suffix] = oracle;
        report.aggregates["cf_dev_se" + suffix] =
            ecf.real_se > 0.0 ? std::abs(ecf.value.real() - oracle) / ecf.real_se : 0.0;
        accept = accept && std::abs(ecf.value.real() - oracle) <= 4.0 * ecf.real_se;
    }
    report.verdicts["cf_match"] = accept;
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentPlan& plan) {
    const auto start = std::chrono::steady_clock::now();
    SeedScheme scheme;
    scheme.master_seed = plan.master_seed;
    scheme.experiment_id = experiment_id(plan.kind);

    ExperimentReport report;
    report.config = plan.config_echo;
    report.seeds["master_seed"] = plan.master_seed;
    report.seeds["experiment_id"] = scheme.experiment_id;
    report.seeds["first_replicate_seed"] = scheme.replicate_seed(0);

    switch (plan.kind) {
        case ExperimentKind::interior_prob:
            detail::fill_interior_probability(plan, scheme, report);
            break;
        case ExperimentKind::endpoint_interior:
            detail::fill_endpoint_interior(plan, scheme, report);
            break;
        case ExperimentKind::staircase:
            detail::fill_staircase(plan, scheme, report);
            break;
        case ExperimentKind::winding_growth:
            detail::fill_winding_growth(plan, scheme, report);
            break;
        case ExperimentKind::self_similarity_ks:
            detail::fill_self_similarity(plan, scheme, report);
            break;
        case ExperimentKind::reversibility_ks:
            detail::fill_reversibility(plan, scheme, report);
            break;
        case ExperimentKind::stationarity_ks:
            detail::fill_stationarity(plan, scheme, report);
            break;
        case ExperimentKind::stable_cf:
            detail::fill_stable_cf(plan, scheme, report);
            break;
    }

    report.succeeded = 0;
    report.failed = 0;
    for (const auto& r : report.replicates) (r.ok ? report.succeeded : report.failed)++;
    report.aggregates["replicates_failed"] = static_cast<double>(report.failed);
    const auto stop = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(stop - start).count();
    return report;
}

}  // namespace selfsim
