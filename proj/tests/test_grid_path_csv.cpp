#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <sstream>
#include <vector>

#include "selfsim/path.hpp"
#include "selfsim/path_csv.hpp"
#include "selfsim/time_grid.hpp"

using selfsim::Path;
using selfsim::TimeGrid;

TEST_CASE("grid construction enforces strict increase and finiteness") {
    REQUIRE_THROWS_AS(TimeGrid(std::vector<double>{}), selfsim::Error);
    REQUIRE_THROWS_AS(TimeGrid({0.0, 0.0}), selfsim::NonPositiveTime);
    REQUIRE_THROWS_AS(TimeGrid({1.0, 0.5}), selfsim::NonPositiveTime);
    REQUIRE_THROWS_AS(TimeGrid({0.0, std::numeric_limits<double>::infinity()}), selfsim::Error);
    REQUIRE_NOTHROW(TimeGrid({-2.0, -1.0, 3.0}));  // log-time grids are negative
}

TEST_CASE("uniform and log grids hit both endpoints exactly") {
    const TimeGrid u = TimeGrid::uniform(0.0, 1.0, 5);
    REQUIRE(u.size() == 5);
    REQUIRE(u.front() == 0.0);
    REQUIRE(u.back() == 1.0);
    REQUIRE(u[2] == 0.5);
    REQUIRE(u.starts_at_zero());

    const TimeGrid l = TimeGrid::log_spaced(0.01, 100.0, 9);
    REQUIRE(l.front() == 0.01);
    REQUIRE(l.back() == 100.0);
    REQUIRE(l[4] == Catch::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < l.size(); ++i) {
        const double r = l[i] / l[i - 1];
        REQUIRE(r == Catch::Approx(l[1] / l[0]).epsilon(1e-9));
    }
}

TEST_CASE("index_of finds exact grid times and rejects others") {
    const TimeGrid g = TimeGrid::uniform(0.0, 2.0, 9);
    REQUIRE(g.index_of(0.0) == 0);
    REQUIRE(g.index_of(0.75) == 3);
    REQUIRE(g.index_of(2.0) == 8);
    REQUIRE_THROWS_AS(g.index_of(0.7), selfsim::TimeNotOnGrid);
    REQUIRE_THROWS_AS(g.index_of(-1.0), selfsim::TimeNotOnGrid);
}

TEST_CASE("scaled grids preserve relative spacing") {
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 3).scaled(4.0);
    REQUIRE(g.back() == 4.0);
    REQUIRE(g[1] == 2.0);
    REQUIRE_THROWS_AS(g.scaled(0.0), selfsim::InvalidScale);
    REQUIRE_THROWS_AS(g.scaled(-1.0), selfsim::InvalidScale);
}

TEST_CASE("path validation and accessors") {
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 3);
    Eigen::MatrixXd v(3, 2);
    v << 0, 0, 1, -1, 2, 0.5;
    const Path p(g, v);
    REQUIRE(p.size() == 3);
    REQUIRE(p.dimension() == 2);
    REQUIRE(p.time(1) == 0.5);
    REQUIRE(p.state(1)[1] == -1.0);
    REQUIRE_THROWS_AS(p.state(3), selfsim::InvalidIndex);

    Eigen::MatrixXd bad = v;
    bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(Path(g, bad), selfsim::MalformedInput);
    REQUIRE_THROWS_AS(Path(g, Eigen::MatrixXd::Zero(2, 2)), selfsim::GridMismatch);
}

TEST_CASE("rescaling multiplies time by c and state by c^H") {
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 3);
    Eigen::MatrixXd v(3, 1);
    v << 0, 1, 2;
    const Path p(g, v);
    const Path q = p.rescaled(4.0, 0.5);
    REQUIRE(q.time(2) == 4.0);
    REQUIRE(q.state(1)[0] == Catch::Approx(2.0));  // 1 * 4^0.5
}

TEST_CASE("slice keeps the chosen window") {
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 5);
    Eigen::MatrixXd v(5, 1);
    v << 0, 1, 2, 3, 4;
    const Path p(g, v);
    const Path s = p.slice(1, 3);
    REQUIRE(s.size() == 3);
    REQUIRE(s.time(0) == 0.25);
    REQUIRE(s.state(2)[0] == 3.0);
    REQUIRE_THROWS_AS(p.slice(3, 2), selfsim::InvalidIndex);
    REQUIRE_THROWS_AS(p.slice(0, 5), selfsim::InvalidIndex);
}

TEST_CASE("path csv round-trips bit-exactly") {
    const TimeGrid g{std::vector<double>{0.0, 1.0 / 3.0, 0.7, 1.0}};
    Eigen::MatrixXd v(4, 3);
    v << 0, 0, 0, 0.1, -2.5e-17, 3, 1e300, -1e-300, 0.25, 1, 2, 3;
    const Path p(g, v);
    std::stringstream ss;
    selfsim::write_path_csv(ss, p);
    const Path q = selfsim::read_path_csv(ss);
    REQUIRE(q.size() == p.size());
    REQUIRE(q.dimension() == p.dimension());
    for (std::size_t i = 0; i < p.size(); ++i) {
        REQUIRE(q.time(i) == p.time(i));
        for (std::size_t j = 0; j < p.dimension(); ++j)
            REQUIRE(q.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                    p.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
}

TEST_CASE("malformed path csv is rejected") {
    const auto parse = [](const std::string& text) {
        std::stringstream ss(text);
        return selfsim::read_path_csv(ss);
    };
    REQUIRE_THROWS_AS(parse(""), selfsim::MalformedInput);
    REQUIRE_THROWS_AS(parse("a,b\n1,2\n"), selfsim::MalformedInput);
    REQUIRE_THROWS_AS(parse("t,x1\n0,1\n0.5\n"), selfsim::MalformedInput);
    REQUIRE_THROWS_AS(parse("t,x1\n0,one\n"), selfsim::MalformedInput);
    REQUIRE_THROWS_AS(parse("t,x1\n1,0\n0,1\n"), selfsim::Error);  // decreasing times
}
