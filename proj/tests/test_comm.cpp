#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "eov/comm.hpp"

using namespace eov;

namespace {
constexpr double kTxBits = 24576.0;   // 3 KB
}

TEST_CASE("link_latency examples") {
    const LinkParams link{0.010, 1e9, 1, false};
    CHECK(link_latency(link, {kTxBits, 100.0}) ==
          doctest::Approx(0.0124576).epsilon(1e-12));
    CHECK(link_latency(link, {kTxBits, 0.0}) == 0.010);

    const LinkParams broadcast{0.010, 1e9, 14, false};
    CHECK(link_latency(broadcast, {kTxBits, 100.0}) ==
          doctest::Approx(0.0444064).epsilon(1e-12));
}

TEST_CASE("round_trip_latency doubles the one-way term") {
    const LinkParams link{0.010, 1e9, 1, false};
    const MessageLoad load{kTxBits, 100.0};
    CHECK(round_trip_latency(link, load) ==
          doctest::Approx(0.0249152).epsilon(1e-12));
    CHECK(round_trip_latency(link, load) == 2.0 * link_latency(link, load));
    CHECK(round_trip_latency(link, {kTxBits, 0.0}) == 0.020);

    const LinkParams free_network{0.0, 1e18, 1, false};
    CHECK(round_trip_latency(free_network, load) < 1e-8);
}

TEST_CASE("latency is affine in the message rate") {
    const LinkParams link{0.004, 2.5e8, 3, false};
    const MessageLoad probe{kTxBits, 0.0};
    const double intercept = link_latency(link, probe);
    const double slope =
        link_latency(link, {kTxBits, 1.0}) - intercept;
    CHECK(intercept == doctest::Approx(link.overhead_s).epsilon(1e-12));
    CHECK(slope ==
          doctest::Approx(link.fanout * kTxBits / link.bandwidth_bps)
              .epsilon(1e-12));
    for (double rate : {5.0, 40.0, 333.0, 1500.0, 9999.0}) {
        const double direct = link_latency(link, {kTxBits, rate});
        CHECK(std::abs(direct - (intercept + slope * rate)) < 1e-12);
    }
}

TEST_CASE("monotonicity in fanout, size, rate and bandwidth") {
    const MessageLoad load{kTxBits, 250.0};
    CHECK(link_latency({0.01, 1e9, 2, false}, load) >
          link_latency({0.01, 1e9, 1, false}, load));
    CHECK(link_latency({0.01, 1e9, 1, false}, {2 * kTxBits, 250.0}) >
          link_latency({0.01, 1e9, 1, false}, load));
    CHECK(link_latency({0.01, 1e9, 1, false}, {kTxBits, 300.0}) >
          link_latency({0.01, 1e9, 1, false}, load));
    CHECK(link_latency({0.01, 2e9, 1, false}, load) <
          link_latency({0.01, 1e9, 1, false}, load));
}

TEST_CASE("per-message variant drops the rate dependence") {
    const LinkParams link{0.010, 1e9, 2, true};
    const double expected = 0.010 + 2.0 * kTxBits / 1e9;
    CHECK(link_latency(link, {kTxBits, 100.0}) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(link_latency(link, {kTxBits, 5000.0}) ==
          link_latency(link, {kTxBits, 1.0}));
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(round_trip_latency({0.01, 1e9, 3, false}, {kTxBits, 1.0}),
                    FanoutNotSupported);
    CHECK_THROWS_AS(link_latency({-0.01, 1e9, 1, false}, {kTxBits, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_latency({0.01, 0.0, 1, false}, {kTxBits, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_latency({0.01, 1e9, 0, false}, {kTxBits, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_latency({0.01, 1e9, 1, false}, {0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_latency({0.01, 1e9, 1, false}, {kTxBits, -1.0}),
                    std::invalid_argument);
}
