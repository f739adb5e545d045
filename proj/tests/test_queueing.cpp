#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "des_oracle.hpp"
#include "eov/queueing.hpp"

using namespace eov;

namespace {

// Closed-form oracles. M/M/1: rho / (mu (1 - rho)); M/D/1 is the
// Pollaczek-Khinchine value, exactly half of it.
double mm1_wait(double lambda, double mu) {
    const double rho = lambda / mu;
    return rho / (mu * (1.0 - rho));
}

double md1_wait(double lambda, double mu) {
    const double rho = lambda / mu;
    return rho / (2.0 * mu * (1.0 - rho));
}

const std::vector<std::pair<double, double>> kStablePairs = {
    {0.05, 1.0}, {0.10, 1.0},  {0.20, 1.0},  {0.35, 1.0},  {0.50, 1.0},
    {0.65, 1.0}, {0.80, 1.0},  {0.90, 1.0},  {0.95, 1.0},  {0.99, 1.0},
    {2.0, 10.0}, {5.0, 10.0},  {7.5, 10.0},  {9.0, 10.0},  {9.9, 10.0},
    {30.0, 100.0}, {55.0, 100.0}, {70.0, 100.0}, {85.0, 100.0}, {99.0, 100.0},
};

} // namespace

TEST_CASE("utilization is the direct ratio") {
    CHECK(utilization({2.0, 1.0, 4}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(utilization({1.0, 1.0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(utilization({150.0, 50.0, 4}) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("erlang_c_wait matches the M/M/1 closed form at c = 1") {
    CHECK(erlang_c_wait({0.5, 1.0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [lambda, mu] : kStablePairs)
        CHECK(erlang_c_wait({lambda, mu, 1}) ==
              doctest::Approx(mm1_wait(lambda, mu)).epsilon(1e-12));
}

TEST_CASE("erlang_c_wait vanishes as load vanishes") {
    CHECK(erlang_c_wait({1e-9, 1.0, 4}) < 1e-8);
    CHECK(erlang_c_wait({0.0, 1.0, 4}) == 0.0);
}

TEST_CASE("erlang_c_wait against a brute-force M/M/c simulation") {
    const double sim =
        oracle::mean_queue_wait(3.0, 1.0, 4, false, 1'000'000, 20240601);
    const double model = erlang_c_wait({3.0, 1.0, 4});
    CHECK(std::abs(sim - model) / model < 0.02);
}

TEST_CASE("erlang_c_wait is monotone in load and in servers") {
    double previous = 0.0;
    for (double lambda : {0.2, 0.6, 1.0, 1.6, 2.2, 2.6, 2.9}) {
        const double w = erlang_c_wait({lambda, 1.0, 3});
        CHECK(w > previous);
        previous = w;
    }
    previous = std::numeric_limits<double>::infinity();
    for (int servers : {1, 2, 3, 4, 6, 8}) {
        const double w = erlang_c_wait({0.9, 1.0, servers});
        CHECK(w < previous);
        previous = w;
    }
}

TEST_CASE("mdc server factor") {
    CHECK(mdc_server_factor(1) == 0.0);
    CHECK(mdc_server_factor(2) ==
          doctest::Approx((std::sqrt(14.0) - 2.0) / 32.0).epsilon(1e-15));
    CHECK(mdc_server_factor(2) == doctest::Approx(0.054426793336685674));
    for (int servers = 1; servers <= 64; ++servers)
        CHECK(mdc_server_factor(servers) >= 0.0);
}

TEST_CASE("mdc_wait with one server is exactly Pollaczek-Khinchine") {
    CHECK(mdc_wait({0.5, 1.0, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    for (const auto& [lambda, mu] : kStablePairs) {
        const QueueLoad load{lambda, mu, 1};
        CHECK(mdc_wait(load) ==
              doctest::Approx(md1_wait(lambda, mu)).epsilon(1e-12));
        CHECK(mdc_wait(load) ==
              doctest::Approx(0.5 * erlang_c_wait(load)).epsilon(1e-12));
    }
}

TEST_CASE("mdc_wait against a brute-force M/D/4 simulation") {
    const double sim =
        oracle::mean_queue_wait(3.0, 1.0, 4, true, 1'000'000, 20240602);
    const double model = mdc_wait({3.0, 1.0, 4});
    CHECK(std::abs(sim - model) / sim < 0.10);
}

TEST_CASE("kingman_wait reproduces M/M/1 and M/D/1") {
    for (const auto& [lambda, mu] : kStablePairs) {
        const QueueLoad load{lambda, mu, 1};
        CHECK(kingman_wait(load, {1.0, 1.0}) ==
              doctest::Approx(erlang_c_wait(load)).epsilon(1e-12));
        CHECK(kingman_wait(load, {1.0, 0.0}) ==
              doctest::Approx(md1_wait(lambda, mu)).epsilon(1e-12));
    }
    CHECK(kingman_wait({0.5, 1.0, 1}, {1.0, 0.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kingman_wait({0.7, 1.0, 1}, {0.0, 0.0}) == 0.0);
}

TEST_CASE("all waits vanish in the empty-system limit") {
    for (int servers : {1, 2, 4}) {
        const double lambda = 1e-6 * servers;   // rho = 1e-6
        CHECK(erlang_c_wait({lambda, 1.0, servers}) < 1e-4);
        CHECK(mdc_wait({lambda, 1.0, servers}) < 1e-4);
    }
    CHECK(kingman_wait({1e-6, 1.0, 1}, {1.0, 1.0}) < 1e-4);
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(erlang_c_wait({1.0, 1.0, 1}), UnstableQueue);
    CHECK_THROWS_AS(erlang_c_wait({5.0, 1.0, 4}), UnstableQueue);
    CHECK_THROWS_AS(mdc_wait({2.0, 1.0, 2}), UnstableQueue);
    CHECK_THROWS_AS(mdc_wait({0.0, 1.0, 2}), DegenerateLoad);
    CHECK_THROWS_AS(kingman_wait({1.0, 1.0, 1}, {1.0, 1.0}), UnstableQueue);
    CHECK_THROWS_AS(kingman_wait({0.5, 1.0, 2}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(utilization({std::nan(""), 1.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(utilization({1.0, 0.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(utilization({1.0, 1.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(kingman_wait({0.5, 1.0, 1}, {-1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("unstable queue error carries the utilization") {
    try {
        erlang_c_wait({3.0, 1.0, 2});
        FAIL("expected UnstableQueue");
    } catch (const UnstableQueue& e) {
        CHECK(e.utilization() == doctest::Approx(1.5));
        CHECK_FALSE(e.stage().has_value());
    }
}
