#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>
#include <sstream>
#include <string>

#include "selfsim/config.hpp"
#include "selfsim/report.hpp"

using selfsim::build_plan;
using selfsim::ConfigError;
using selfsim::ConfigMap;
using selfsim::ExperimentKind;
using selfsim::GeneratorKind;

namespace {

ConfigMap parse_text(const std::string& text) {
    std::stringstream ss(text);
    return ConfigMap::parse(ss);
}

selfsim::ExperimentPlan plan_from(const std::string& text) {
    return build_plan(parse_text(text));
}

}  // namespace

TEST_CASE("config text parsing") {
    const auto cfg = parse_text(
        "# full-line comment\n"
        "experiment = interior_prob   # trailing comment\n"
        "\n"
        "  generator=fbm\n"
        "hurst = 0.7\n");
    REQUIRE(cfg.require_string("experiment") == "interior_prob");
    REQUIRE(cfg.require_string("generator") == "fbm");
    REQUIRE(cfg.get_double("hurst", 0.0) == 0.7);
    REQUIRE(cfg.get_double("missing", 1.25) == 1.25);
    REQUIRE_FALSE(cfg.has("missing"));

    REQUIRE_THROWS_AS(parse_text("a = 1\na = 2\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_text("just some words\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_text("= 3\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_text("x = abc\n").get_double("x", 0.0), ConfigError);
    REQUIRE_THROWS_AS(parse_text("x = -4\n").get_u64("x", 0), ConfigError);
    REQUIRE_THROWS_AS(parse_text("x = 1.5\n").get_u64("x", 0), ConfigError);
    REQUIRE_THROWS_AS(parse_text("").require_string("experiment"), ConfigError);

    const auto list = parse_text("u_values = 0.5, 1, 2\n").get_double_list("u_values", {});
    REQUIRE(list == std::vector<double>{0.5, 1.0, 2.0});
}

TEST_CASE("plan defaults") {
    const auto p = plan_from("experiment = interior_prob\ngenerator = fbm\n");
    REQUIRE(p.kind == ExperimentKind::interior_prob);
    REQUIRE(p.generator == GeneratorKind::fbm);
    REQUIRE(p.dim == 2);
    REQUIRE(p.fbm.hindex == 0.5);
    REQUIRE(p.fbm.q.isIdentity(0.0));
    REQUIRE(p.resolution == 4096);
    REQUIRE(p.replicates == 2000);
    REQUIRE(p.master_seed == 20260819);
    REQUIRE(p.threads == 1);
    REQUIRE(p.threshold_p == 0.99);
    REQUIRE(p.refine_resolution == 64);
    REQUIRE(p.config_echo.at("experiment") == "interior_prob");

    const auto q = plan_from("experiment = endpoint_interior\ngenerator = fbm\n");
    REQUIRE(q.threshold_p == 0.95);

    // stationarity defaults differ per generator family
    const auto fbm_stat = plan_from("experiment = stationarity_ks\ngenerator = fbm\n");
    REQUIRE(fbm_stat.u1 == 0.0);
    REQUIRE(fbm_stat.u2 == Catch::Approx(std::log(2.0)));
    const auto stable_stat = plan_from("experiment = stationarity_ks\ngenerator = stable\n");
    REQUIRE(stable_stat.u1 == Catch::Approx(std::log(0.25)));
    REQUIRE(stable_stat.u2 == Catch::Approx(std::log(0.5)));
}

TEST_CASE("plan parses generator families") {
    const auto p = plan_from(
        "experiment = interior_prob\n"
        "generator = fbm\n"
        "hurst = 0.7\n"
        "dim = 2\n"
        "q = 4, 0, 0, 1\n");
    REQUIRE(p.fbm.hindex == 0.7);
    REQUIRE(p.fbm.q(0, 0) == 4.0);
    REQUIRE(p.fbm.q(1, 1) == 1.0);
    REQUIRE(p.fbm.q(0, 1) == 0.0);

    const auto s = plan_from(
        "experiment = stable_cf\n"
        "generator = stable\n"
        "alpha = 0.8\n"
        "dim = 2\n"
        "sigma = 1, 1 @ 2\n"
        "truncation = 500\n"
        "scale = 0.5\n");
    REQUIRE(s.stable.alpha == 0.8);
    REQUIRE(s.stable.truncation == 500);
    REQUIRE(s.stable.scale == 0.5);
    REQUIRE(s.stable.sigma.atoms.size() == 1);
    REQUIRE(s.stable.sigma.atoms[0].weight == 1.0);  // renormalized
    REQUIRE(s.stable.sigma.atoms[0].direction.norm() == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(s.stable.sigma.atoms[0].direction[0] ==
            Catch::Approx(std::sqrt(0.5)).epsilon(1e-14));

    const auto two = plan_from(
        "experiment = stable_cf\n"
        "generator = stable\n"
        "alpha = 1.5\n"
        "dim = 2\n"
        "sigma = 1, 0 @ 1; -1, 0 @ 1\n");
    REQUIRE(two.stable.sigma.atoms.size() == 2);
    REQUIRE(two.stable.sigma.atoms[0].weight == 0.5);

    const auto r = plan_from(
        "experiment = interior_prob\n"
        "generator = ray\n"
        "direction = 0, 2\n");
    REQUIRE(r.ray_direction.x() == 0.0);
    REQUIRE(r.ray_direction.y() == 2.0);
}

TEST_CASE("plan rejects contradictions") {
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\n"), ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = nope\ngenerator = fbm\n"), ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = nope\n"), ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = fbm\nbogus = 1\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = fbm\ndim = 0\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = fbm\nresolution = 1\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = fbm\nreplicates = 0\n"),
                      ConfigError);
    // generator-level validation surfaces as a config error
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = fbm\nhurst = 1.5\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = stable\nalpha = 1\n"),
                      ConfigError);
    // planar-only experiments and generators
    REQUIRE_THROWS_AS(plan_from("experiment = staircase\ngenerator = fbm\ndim = 3\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = winding_growth\ngenerator = fbm\ndim = 3\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(plan_from("experiment = interior_prob\ngenerator = circle\ndim = 3\n"),
                      ConfigError);
    // cross-field constraints
    REQUIRE_THROWS_AS(plan_from("experiment = stable_cf\ngenerator = fbm\n"), ConfigError);
    REQUIRE_THROWS_AS(
        plan_from("experiment = winding_growth\ngenerator = stable\nalpha = 0.8\n"),
        ConfigError);
    REQUIRE_THROWS_AS(
        plan_from("experiment = interior_prob\ngenerator = stable\nhorizon = 2\n"),
        ConfigError);
    REQUIRE_THROWS_AS(
        plan_from("experiment = stationarity_ks\ngenerator = fbm\nu1 = 1\nu2 = 0\n"),
        ConfigError);
    REQUIRE_THROWS_AS(
        plan_from("experiment = interior_prob\ngenerator = fbm\nrefine_resolution = 1\n"),
        ConfigError);
    REQUIRE_THROWS_AS(
        plan_from("experiment = interior_prob\ngenerator = fbm\nq = 1, 0, 0\n"), ConfigError);
    REQUIRE_THROWS_AS(
        plan_from("experiment = stable_cf\ngenerator = stable\nsigma = 1, 0 @ x\n"),
        ConfigError);
}

TEST_CASE("experiment ids are stable and distinct") {
    REQUIRE(selfsim::experiment_id(ExperimentKind::interior_prob) == 1);
    REQUIRE(selfsim::experiment_id(ExperimentKind::stable_cf) == 8);
    for (int i = 0; i <= static_cast<int>(ExperimentKind::stable_cf); ++i) {
        const auto kind = static_cast<ExperimentKind>(i);
        REQUIRE(selfsim::detail::parse_experiment_kind(selfsim::experiment_name(kind)) == kind);
    }
}

TEST_CASE("report json round-trips through a parser") {
    selfsim::ExperimentReport report;
    report.config = {{"experiment", "interior_prob"}, {"generator", "fbm"}};
    report.seeds = {{"master_seed", 42}, {"experiment_id", 1}, {"first_replicate_seed", 99}};
    selfsim::ReplicateRecord ok;
    ok.index = 0;
    ok.seed = 99;
    ok.values["interior"] = 1.0;
    selfsim::ReplicateRecord bad;
    bad.index = 1;
    bad.seed = 100;
    bad.ok = false;
    bad.error = "radius below guard";
    report.replicates = {ok, bad};
    report.aggregates["p_interior"] = 0.5;
    report.verdicts["interior_probability"] = false;
    report.verdicts["witness_sound"] = true;
    report.succeeded = 1;
    report.failed = 1;
    report.wall_seconds = 0.25;

    REQUIRE_FALSE(report.all_passed());
    report.verdicts["interior_probability"] = true;
    REQUIRE(report.all_passed());
    report.verdicts["interior_probability"] = false;

    std::stringstream ss;
    selfsim::write_report_json(ss, report);
    const auto j = nlohmann::json::parse(ss.str());
    REQUIRE(j.at("version").get<std::string>() == selfsim::kVersion);
    REQUIRE(j.at("config").at("generator") == "fbm");
    REQUIRE(j.at("seeds").at("master_seed") == 42);
    REQUIRE(j.at("replicates").size() == 2);
    REQUIRE(j.at("replicates")[0].at("values").at("interior") == 1.0);
    REQUIRE_FALSE(j.at("replicates")[0].contains("error"));
    REQUIRE(j.at("replicates")[1].at("ok") == false);
    REQUIRE(j.at("replicates")[1].at("error") == "radius below guard");
    REQUIRE(j.at("aggregates").at("p_interior") == 0.5);
    REQUIRE(j.at("verdicts").at("interior_probability") == false);
    REQUIRE(j.at("verdicts").at("witness_sound") == true);
    REQUIRE(j.at("counts").at("succeeded") == 1);
    REQUIRE(j.at("counts").at("failed") == 1);
    REQUIRE(j.at("wall_seconds") == 0.25);
}

TEST_CASE("aggregates csv lists values then verdicts") {
    selfsim::ExperimentReport report;
    report.aggregates["alpha"] = 1.5;
    report.verdicts["ks_accept"] = true;
    std::stringstream ss;
    selfsim::write_aggregates_csv(ss, report);
    std::string line;
    std::getline(ss, line);
    REQUIRE(line == "key,value");
    std::getline(ss, line);
    REQUIRE(line == "alpha,1.5");
    std::getline(ss, line);
    REQUIRE(line == "verdict_ks_accept,1");
    REQUIRE_FALSE(std::getline(ss, line));
}
