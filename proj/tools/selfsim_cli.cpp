// Command-line front end: simulate paths, compute hull timelines and
// winding sweeps from path CSVs, and run full Monte Carlo experiments.
//
// Exit codes: 0 success, 2 experiment verdict failure, 3 configuration
// error, 4 runtime error.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/selfsim.hpp"

namespace {

constexpr int kExitVerdict = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw selfsim::MalformedInput("cannot open output file: " + path);
    return os;
}

selfsim::Path load_path_csv(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw selfsim::MalformedInput("cannot open path file: " + file);
    return selfsim::read_path_csv(is);
}

// simulate shares the generator vocabulary with the experiment harness,
// so it is configured through the same key=value pairs.
selfsim::ConfigMap config_from_args(const std::vector<std::string>& pairs) {
    std::stringstream ss;
    for (const auto& p : pairs) ss << p << "\n";
    return selfsim::ConfigMap::parse(ss);
}

int run_simulate(const std::vector<std::string>& sets, const std::string& out_file,
                 const std::string& events_file) {
    selfsim::ConfigMap cfg = config_from_args(sets);
    cfg.set("experiment", cfg.get_string("experiment", "interior_prob"));
    const selfsim::ExperimentPlan plan = selfsim::build_plan(cfg);
    const selfsim::TimeGrid grid =
        selfsim::TimeGrid::uniform(0.0, plan.horizon, plan.resolution + 1);

    const auto make_path = [&]() -> selfsim::Path {
        if (plan.generator == selfsim::GeneratorKind::stable) {
            auto sample =
                selfsim::sample_lepage_with_events(plan.stable, grid, plan.master_seed);
            if (!events_file.empty()) {
                auto os = open_output(events_file);
                selfsim::write_events_csv(os, sample.events, plan.stable.sigma.dim);
            }
            return std::move(sample.path);
        }
        if (!events_file.empty())
            throw selfsim::ConfigError("events output applies to the stable generator only");
        return selfsim::make_path_source(plan, grid)(plan.master_seed);
    };
    const selfsim::Path path = make_path();
    auto os = open_output(out_file);
    selfsim::write_path_csv(os, path);
    std::cout << "wrote " << path.size() << " samples to " << out_file << "\n";
    return 0;
}

int run_hull(const std::string& in_file, const std::string& out_file) {
    const selfsim::Path path = load_path_csv(in_file);
    const selfsim::HullTimeline tl = selfsim::incremental_hull_timeline(path);
    auto os = open_output(out_file);
    selfsim::write_timeline_csv(os, tl);
    const auto first = selfsim::first_interior_time(tl);
    std::cout << "hull changes: "
              << std::count(tl.change_flags.begin(), tl.change_flags.end(), char{1})
              << ", origin interior: " << (tl.interior_flags.back() ? "yes" : "no");
    if (first) std::cout << " (from t = " << *first << ")";
    std::cout << "\n";
    return 0;
}

int run_wind(const std::string& in_file, const std::string& out_file, std::size_t levels,
             double guard) {
    const selfsim::Path path = load_path_csv(in_file);
    const selfsim::AngularPath apath = selfsim::unwrap_argument(path, guard);
    const double t0 = path.grid().front();
    const double t1 = path.grid().back();
    if (!(t0 > 0.0))
        throw selfsim::NonPositiveTime("wind: path must start at a positive time");

    // Levels are spaced evenly in log time from just above the start to
    // the horizon, anchored on existing grid points.
    std::vector<double> t_levels;
    const double l0 = std::log(t0), l1 = std::log(t1);
    for (std::size_t k = 1; k <= levels; ++k) {
        const double target =
            std::exp(l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(levels));
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < path.size(); ++i) {
            const double gap = std::abs(std::log(path.time(i)) - std::log(target));
            if (gap < best_gap) { best_gap = gap; best = i; }
        }
        const double t = path.time(best);
        if (t > t0 && (t_levels.empty() || t > t_levels.back())) t_levels.push_back(t);
    }
    if (t_levels.empty()) throw selfsim::InvalidIndex("wind: grid too short for any level");
    const auto records = selfsim::sweep_at_infinity(apath, t0, t_levels);
    auto os = open_output(out_file);
    selfsim::write_sweep_csv(os, records);
    std::cout << "nu[" << t0 << ", " << t1 << "] = " << records.back().nu << " rad ("
              << records.back().nu / (2.0 * std::numbers::pi) << " turns)\n";
    return 0;
}

int run_experiment_cmd(const std::string& config_file, const std::string& report_file,
                       const std::string& aggregates_file, std::uint64_t seed_override,
                       bool has_seed, std::uint64_t replicates_override,
                       std::uint64_t resolution_override) {
    std::ifstream is(config_file);
    if (!is) throw selfsim::ConfigError("cannot open config file: " + config_file);
    selfsim::ConfigMap cfg = selfsim::ConfigMap::parse(is);
    if (has_seed) cfg.set("master_seed", std::to_string(seed_override));
    if (replicates_override > 0) cfg.set("replicates", std::to_string(replicates_override));
    if (resolution_override > 0) cfg.set("resolution", std::to_string(resolution_override));

    const selfsim::ExperimentPlan plan = selfsim::build_plan(cfg);
    const selfsim::ExperimentReport report = selfsim::run_experiment(plan);

    if (!report_file.empty()) {
        auto os = open_output(report_file);
        selfsim::write_report_json(os, report);
    }
    if (!aggregates_file.empty()) {
        auto os = open_output(aggregates_file);
        selfsim::write_aggregates_csv(os, report);
    }

    std::cout << selfsim::experiment_name(plan.kind) << ": " << report.succeeded
              << " replicates ok, " << report.failed << " quarantined, "
              << report.wall_seconds << " s\n";
    for (const auto& [name, pass] : report.verdicts)
        std::cout << "  " << name << ": " << (pass ? "pass" : "FAIL") << "\n";
    return report.all_passed() ? 0 : kExitVerdict;
}

// Built-in controls with known outcomes; a quick installation check.
int run_selfcheck() {
    std::size_t passed = 0, failed = 0;
    const auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "  ok   " : "  FAIL ") << name << "\n";
        (ok ? passed : failed)++;
    };

    {
        const selfsim::TimeGrid grid = selfsim::TimeGrid::uniform(0.0, 1.0, 257);
        const auto tl = selfsim::incremental_hull_timeline(selfsim::circle_path(grid));
        check("circle hull changes at every sample",
              selfsim::staircase_fraction(tl, 0) == 1.0);
        check("circle encloses the origin", tl.interior_flags.back() == 1);
    }
    {
        const selfsim::TimeGrid grid = selfsim::TimeGrid::uniform(0.0, 1.0, 257);
        const auto path = selfsim::ray_path(grid, Eigen::Vector2d(1.0, 2.0));
        const auto tl = selfsim::incremental_hull_timeline(path);
        check("ray never encloses the origin", tl.interior_flags.back() == 0);
        const auto endpoint = path.values().rowwise() - path.values().row(path.values().rows() - 1);
        check("ray endpoint is never interior", !selfsim::contains_origin_interior(endpoint));
    }
    {
        const std::vector<double> levels{std::exp(-1.0), std::exp(-2.0), std::exp(-3.0)};
        const auto rec = selfsim::winding_near_zero(
            [](const selfsim::TimeGrid& g) { return selfsim::spiral_path(g); }, 1.0, levels,
            256);
        bool exact = true;
        for (std::size_t k = 0; k < rec.size(); ++k)
            exact = exact && std::abs(rec[k].nu - static_cast<double>(k + 1)) < 1e-6;
        check("log spiral winds by exactly log t", exact);
    }
    {
        const std::vector<double> a{0.1, 0.2, 0.3, 0.4};
        check("identical samples give KS statistic 0",
              selfsim::ks_test(a, a).statistic == 0.0);
        check("disjoint samples give KS statistic 1",
              selfsim::ks_test({0.0}, {1.0}).statistic == 1.0);
    }
    {
        selfsim::StableSpec spec;
        spec.alpha = 0.8;
        spec.sigma = selfsim::SpectralMeasure::discrete(
            1, {selfsim::SpectralAtom{Eigen::VectorXd::Ones(1), 1.0}});
        const selfsim::TimeGrid grid = selfsim::TimeGrid::uniform(0.0, 1.0, 65);
        bool all_one_sided = true;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto path = selfsim::sample_lepage(spec, grid, seed);
            all_one_sided = all_one_sided && path.values().minCoeff() >= 0.0;
        }
        check("one-sided stable paths stay nonnegative", all_one_sided);
    }

    std::cout << passed << " checks passed, " << failed << " failed\n";
    return failed == 0 ? 0 : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-similar process simulation and path-geometry toolkit"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "sample one path to CSV");
    std::vector<std::string> sim_sets;
    std::string sim_out = "path.csv", sim_events;
    simulate->add_option("-c,--config", sim_sets,
                         "generator settings as key=value (generator, hurst, alpha, ...)");
    simulate->add_option("-o,--output", sim_out, "path CSV output file");
    simulate->add_option("--events", sim_events, "jump events CSV (stable generator)");

    auto* hull = app.add_subcommand("hull", "hull timeline of a path CSV");
    std::string hull_in, hull_out = "timeline.csv";
    hull->add_option("input", hull_in, "path CSV")->required();
    hull->add_option("-o,--output", hull_out, "timeline CSV output file");

    auto* wind = app.add_subcommand("wind", "winding sweep of a planar path CSV");
    std::string wind_in, wind_out = "sweep.csv";
    std::size_t wind_levels = 8;
    double wind_guard = selfsim::tolerances().min_radius_guard;
    wind->add_option("input", wind_in, "path CSV (positive start time)")->required();
    wind->add_option("-o,--output", wind_out, "sweep CSV output file");
    wind->add_option("--levels", wind_levels, "number of log-spaced levels");
    wind->add_option("--guard", wind_guard, "minimum distance to the origin");

    auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    std::string exp_config, exp_report = "report.json", exp_csv;
    std::uint64_t exp_seed = 0, exp_replicates = 0, exp_resolution = 0;
    bool exp_has_seed = false;
    experiment->add_option("config", exp_config, "experiment config file")->required();
    experiment->add_option("-o,--report", exp_report, "JSON report output file");
    experiment->add_option("--aggregates", exp_csv, "aggregates CSV output file");
    auto* seed_opt = experiment->add_option("--seed", exp_seed, "override master_seed");
    experiment->add_option("--replicates", exp_replicates, "override replicate count");
    experiment->add_option("--resolution", exp_resolution, "override grid resolution");

    auto* selfcheck = app.add_subcommand("selfcheck", "run built-in known-answer checks");

    CLI11_PARSE(app, argc, argv);
    exp_has_seed = seed_opt->count() > 0;

    try {
        if (simulate->parsed()) return run_simulate(sim_sets, sim_out, sim_events);
        if (hull->parsed()) return run_hull(hull_in, hull_out);
        if (wind->parsed()) return run_wind(wind_in, wind_out, wind_levels, wind_guard);
        if (experiment->parsed())
            return run_experiment_cmd(exp_config, exp_report, exp_csv, exp_seed, exp_has_seed,
                                      exp_replicates, exp_resolution);
        if (selfcheck->parsed()) return run_selfcheck();
    } catch (const selfsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const selfsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
