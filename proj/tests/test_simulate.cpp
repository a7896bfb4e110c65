#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "netrates/errors.hpp"
#include "netrates/simulate.hpp"

using namespace netrates;

namespace {

Graph single_node() { return Graph(1, {}); }

Graph path3() { return Graph(3, {{0, 1}, {1, 2}}); }

ModelParams contact(double mu, double beta, double delta) {
    return {Model::Contact, mu, beta, delta};
}

// Fraction of observation time node 0 spends infected.
double infected_time_fraction(const Trajectory& tr) {
    Configuration x = tr.initial;
    double infected_time = 0.0;
    double t_prev = 0.0;
    for (const Event& e : tr.events) {
        if (x.get(0)) infected_time += e.t - t_prev;
        x.set(e.node, e.new_state);
        t_prev = e.t;
    }
    if (x.get(0)) infected_time += tr.t_end - t_prev;
    return infected_time / tr.t_end;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("absorbing states") {
    const Graph g = path3();
    const Configuration x0(3); // all susceptible
    SUBCASE("time stop terminates at the horizon") {
        const Trajectory tr = simulate(g, contact(0, 0, 1), x0, StopRule::time(5.0), 1);
        CHECK(tr.events.empty());
        CHECK(tr.t_end == 5.0);
        CHECK(tr.absorbed);
    }
    SUBCASE("event stop on an absorbing start is an error") {
        CHECK_THROWS_AS(simulate(g, contact(0, 0, 1), x0, StopRule::events(10), 1),
                        NumericalError);
    }
    SUBCASE("event stop hitting an absorbing state mid-run ends early") {
        // mu = 0: all-infected is absorbing and reachable
        Configuration one(3);
        one.set(0, true);
        const Trajectory tr = simulate(g, contact(0, 2, 1), one, StopRule::events(100), 3);
        CHECK(tr.absorbed);
        CHECK(tr.events.size() == 2); // two remaining infections, then stuck
        CHECK(tr.t_end == tr.events.back().t);
    }
}

TEST_CASE("event-count stop yields exactly M-1 events") {
    const Graph g = path3();
    Configuration x0(3);
    x0.set(1, true);
    const Trajectory tr = simulate(g, contact(1, 1, 1), x0, StopRule::events(5000), 99);
    CHECK(tr.events.size() == 4999);
    CHECK(tr.t_end == tr.events.back().t);
    double prev = 0.0;
    for (const Event& e : tr.events) {
        CHECK(e.t > prev);
        prev = e.t;
    }
}

TEST_CASE("two-state chain matches the stationary fraction") {
    const Graph g = single_node();
    const Configuration x0(1);
    // tolerance = 3 standard errors of the time-average estimator,
    // se^2 = 2 pi0 pi1 / ((mu+beta) T)
    for (const auto& [mu, beta] : {std::pair<double, double>{1, 1}, {2, 1}}) {
        const double T = 1e5;
        const Trajectory tr = simulate(g, contact(mu, beta, 0), x0, StopRule::time(T), 4242);
        const double pi1 = beta / (beta + mu);
        const double se = std::sqrt(2.0 * pi1 * (1.0 - pi1) / ((mu + beta) * T));
        const double frac = infected_time_fraction(tr);
        CHECK(std::abs(frac - pi1) < 3.0 * se);
        CHECK(std::abs(frac - pi1) < 0.01);
    }
}

TEST_CASE("sojourn times in a frozen class are exponential (KS test)") {
    const Graph g = path3();
    const ModelParams p = contact(1, 1, 1);
    Configuration x0(3);
    x0.set(0, true);
    const Trajectory tr = simulate(g, p, x0, StopRule::events(200000), 7);

    // class of configuration 100: rate mu + 2 beta + delta = 4
    const HoldingSignature target = signature(g, Configuration::from_string("100"), p.model);
    const double rate = holding_rate(g, Configuration::from_string("100"), p);

    std::vector<double> sojourns;
    StateTracker st(g, tr.initial);
    double t_prev = 0.0;
    for (const Event& e : tr.events) {
        if (st.signature(p.model) == target) sojourns.push_back(e.t - t_prev);
        st.flip(e.node);
        t_prev = e.t;
    }
    REQUIRE(sojourns.size() >= 10000);

    std::sort(sojourns.begin(), sojourns.end());
    const double n = static_cast<double>(sojourns.size());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < sojourns.size(); ++i) {
        const double cdf = 1.0 - std::exp(-rate * sojourns[i]);
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i + 1) / n));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i) / n));
    }
    const double critical = 1.628 / std::sqrt(n); // alpha = 0.01
    CHECK(d_stat < critical);
}

TEST_CASE("determinism: identical inputs give identical bytes") {
    const Graph g = path3();
    Configuration x0(3);
    x0.set(2, true);
    const auto p1 = temp_path("nr_det1.traj");
    const auto p2 = temp_path("nr_det2.traj");
    write_trajectory(simulate(g, contact(1, 0.5, 2), x0, StopRule::events(2000), 31), p1);
    write_trajectory(simulate(g, contact(1, 0.5, 2), x0, StopRule::events(2000), 31), p2);
    const std::string b1 = slurp(p1);
    CHECK(!b1.empty());
    CHECK(b1 == slurp(p2));
}

TEST_CASE("trajectory round trip") {
    const Graph g = path3();
    SUBCASE("no events") {
        const Trajectory tr = simulate(g, contact(0, 0, 1), Configuration(3),
                                       StopRule::time(5.0), 1);
        const auto path = temp_path("nr_rt0.traj");
        write_trajectory(tr, path);
        CHECK(read_trajectory(path) == tr);
    }
    SUBCASE("a million events round-trips losslessly") {
        Configuration x0(3);
        x0.set(1, true);
        const Trajectory tr =
            simulate(g, contact(1, 1, 1), x0, StopRule::events(1000001), 555);
        REQUIRE(tr.events.size() == 1000000);
        const auto path = temp_path("nr_rt1m.traj");
        write_trajectory(tr, path);
        const Trajectory back = read_trajectory(path);
        CHECK(back == tr);
        std::filesystem::remove(path);
    }
}

TEST_CASE("malformed trajectory files are rejected") {
    const std::string header = "model contact\nn 2\nseed 1\nprng mt19937_64-v1\n"
                               "t_end 10.0\ninitial 00\n";
    auto write_file = [](const std::string& name, const std::string& body) {
        const auto path = temp_path(name);
        std::ofstream out(path);
        out << body;
        return path;
    };
    SUBCASE("non-monotone times") {
        const auto path = write_file("nr_bad_mono.traj", header + "1.0 0 1\n0.5 1 1\n");
        CHECK_THROWS_WITH_AS(read_trajectory(path), doctest::Contains("increasing"), DataError);
    }
    SUBCASE("no-op event") {
        const auto path = write_file("nr_bad_noop.traj", header + "1.0 0 0\n");
        CHECK_THROWS_AS(read_trajectory(path), DataError);
    }
    SUBCASE("node out of range") {
        const auto path = write_file("nr_bad_node.traj", header + "1.0 7 1\n");
        CHECK_THROWS_AS(read_trajectory(path), DataError);
    }
    SUBCASE("events past t_end") {
        const auto path = write_file("nr_bad_tend.traj", header + "11.0 0 1\n");
        CHECK_THROWS_AS(read_trajectory(path), DataError);
    }
    SUBCASE("incomplete header") {
        const auto path = write_file("nr_bad_header.traj", "model contact\nn 2\n1.0 0 1\n");
        CHECK_THROWS_AS(read_trajectory(path), DataError);
    }
}

TEST_CASE("random initial configuration follows the two-stage protocol") {
    // same seed, same bits; p0 near 1 makes most nodes infected
    Rng a(12), b(12);
    const Configuration xa = random_configuration(50, a);
    const Configuration xb = random_configuration(50, b);
    CHECK(xa == xb);

    // the first draw is p0: replaying it manually must predict the bits
    Rng probe(12);
    const double p0 = probe.uniform01();
    int infected = 0;
    for (int i = 0; i < 50; ++i) infected += probe.uniform01() < p0 ? 1 : 0;
    CHECK(xa.infected_count() == infected);
}
