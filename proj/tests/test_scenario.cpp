#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>

#include "eov/scenario.hpp"

using namespace eov;

namespace {

const std::string kBase =
    "preset = cloud-10gbps\n"
    "workload.clients = 2\n"
    "workload.rate_per_client_tps = 50\n"
    "execute.cores = 2\n"
    "execute.mu_core_tps = 1000\n"
    "order.osns = 3\n"
    "order.mu_order_tps = 20000\n"
    "order.batch_timeout_s = 1\n"
    "order.batch_size = 10\n";

ScenarioConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "test");
}

} // namespace

TEST_CASE("cloud preset supplies the measured cluster constants") {
    const auto sc = parse(kBase);
    CHECK(sc.preset == "cloud-10gbps");
    CHECK(sc.workload.tx_bits == doctest::Approx(24576.0));
    CHECK(sc.execute.link.overhead_s == doctest::Approx(0.010));
    CHECK(sc.execute.link.bandwidth_bps == doctest::Approx(1e10));
    CHECK(sc.order.link_client_to_leader.bandwidth_bps == doctest::Approx(1e10));
    CHECK(sc.order.link_leader_to_followers.bandwidth_bps == doctest::Approx(1e10));
    CHECK(sc.validate.link.bandwidth_bps == doctest::Approx(1e10));
    CHECK(sc.validate.disk.kind == DiskParams::Kind::SSD);
    CHECK(sc.validate.disk.iops == doctest::Approx(200.0));
    CHECK(sc.validate.disk.seek_s == 0.0);
}

TEST_CASE("local preset uses the 1 Gbps HDD cluster") {
    std::string text = kBase;
    text.replace(text.find("cloud-10gbps"), 12, "local-1gbps");
    const auto sc = parse(text);
    CHECK(sc.execute.link.bandwidth_bps == doctest::Approx(1e9));
    CHECK(sc.validate.disk.kind == DiskParams::Kind::HDD);
    CHECK(sc.validate.disk.iops == doctest::Approx(125.0));
    CHECK(sc.validate.disk.seek_s == doctest::Approx(0.008));
}

TEST_CASE("derived fields follow the scenario") {
    auto sc = parse(kBase);
    CHECK(sc.order.link_leader_to_followers.fanout == 2);
    // One IO per block: 10 tx * 3 KB = 30720 bytes.
    CHECK(sc.validate.disk.io_bytes == doctest::Approx(10 * 3072.0));
    CHECK(sc.offered_rate() == doctest::Approx(100.0));

    sc.order.batch_size = 25;
    sc.refresh_derived();
    CHECK(sc.validate.disk.io_bytes == doctest::Approx(25 * 3072.0));

    const auto overridden = parse(kBase + "validate.io_size_kb = 4\n");
    CHECK(overridden.validate.disk.io_bytes == doctest::Approx(4096.0));
}

TEST_CASE("unit conversions happen once at parse time") {
    const auto sc = parse(
        "workload.clients = 1\n"
        "workload.rate_per_client_tps = 10\n"
        "workload.tx_size_kb = 3\n"
        "execute.cores = 1\n"
        "execute.mu_core_tps = 100\n"
        "execute.alpha_ms = 10\n"
        "execute.beta_mbps = 1000\n"
        "order.osns = 3\n"
        "order.mu_order_tps = 1000\n"
        "order.batch_timeout_ms = 250\n"
        "order.batch_size = 5\n"
        "order.c2l_alpha_ms = 10\n"
        "order.c2l_beta_mbps = 1000\n"
        "order.l2f_alpha_ms = 10\n"
        "order.l2f_beta_mbps = 1000\n"
        "validate.disk = hdd\n"
        "validate.iops = 125\n"
        "validate.seek_ms = 8\n"
        "validate.alpha_ms = 10\n"
        "validate.beta_mbps = 1000\n");
    CHECK(sc.workload.tx_bits == doctest::Approx(3 * 8192.0));
    CHECK(sc.execute.link.overhead_s == doctest::Approx(0.010));
    CHECK(sc.execute.link.bandwidth_bps == doctest::Approx(1e9));
    CHECK(sc.order.batch_timeout_s == doctest::Approx(0.25));
    CHECK(sc.validate.disk.seek_s == doctest::Approx(0.008));
}

TEST_CASE("an even OSN count is rejected") {
    std::string text = kBase;
    text.replace(text.find("order.osns = 3"), 14, "order.osns = 4");
    try {
        parse(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "order.osns");
        CHECK(std::string(e.what()).find("odd") != std::string::npos);
    }
}

TEST_CASE("missing required fields are named") {
    std::string text = kBase;
    text.erase(text.find("order.mu_order_tps = 20000\n"), 27);
    try {
        parse(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "order.mu_order_tps");
    }
}

TEST_CASE("parse errors carry the line number") {
    try {
        parse("workload.clients = 2\nthis line has no equals sign\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("test:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse(kBase + "unknown.field = 1\n"), ParseError);
    CHECK_THROWS_AS(parse(kBase + "workload.clients = 3\n"), ParseError);
    CHECK_THROWS_AS(parse(kBase + "execute.alpha_ms = 1\n"
                                  "execute.alpha_s = 0.001\n"),
                    ParseError);
    CHECK_THROWS_AS(parse(kBase + "order.cv_arrival = not-a-number\n"),
                    ParseError);
}

TEST_CASE("scenario round-trips through write and parse") {
    auto sc = parse(kBase +
                    "execute.reply_beta_mbps = 5000\n"
                    "order.cv_arrival = 0.8\n"
                    "validate.io_size_kb = 64\n"
                    "sim.comm_jitter = exponential\n"
                    "comm.per_message_term = true\n"
                    "sweep.parameter = osns\n"
                    "sweep.values = 3, 9, 15\n");
    std::ostringstream out;
    write_scenario(sc, out);
    std::istringstream in(out.str());
    const auto reloaded = parse_scenario(in, "round-trip");
    CHECK(reloaded == sc);
}

TEST_CASE("sweep validation") {
    CHECK_THROWS_AS(parse(kBase + "sweep.parameter = osns\n"
                                  "sweep.values = 3, 4\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse(kBase + "sweep.values = 1, 2\n"), ValidationError);
    const auto sc = parse(kBase + "sweep.parameter = lambda\n"
                                  "sweep.values = 100, 200, 400\n");
    REQUIRE(sc.sweep.has_value());
    CHECK(sc.sweep->parameter == SweepSpec::Parameter::Lambda);
    CHECK(sc.sweep->values == std::vector<double>{100.0, 200.0, 400.0});
}

TEST_CASE("apply_sweep_value") {
    auto sc = parse(kBase);
    apply_sweep_value(sc, SweepSpec::Parameter::Lambda, 500.0);
    CHECK(sc.offered_rate() == doctest::Approx(500.0));
    apply_sweep_value(sc, SweepSpec::Parameter::Osns, 9);
    CHECK(sc.order.osn_count == 9);
    CHECK(sc.order.link_leader_to_followers.fanout == 8);
    apply_sweep_value(sc, SweepSpec::Parameter::BatchSize, 50);
    CHECK(sc.validate.disk.io_bytes == doctest::Approx(50 * 3072.0));
}

TEST_CASE("shipped scenario files load") {
    for (const char* name :
         {"desk-default.scn", "local-1gbps.scn", "cloud-10gbps.scn"}) {
        const auto sc =
            load_scenario(std::string(EOV_SCENARIO_DIR) + "/" + name);
        CHECK(sc.workload.clients >= 1);
        CHECK_NOTHROW(pipeline_predict(sc));
    }
}

TEST_CASE("predictions from a scenario name the saturating stage") {
    std::string text = kBase;
    text.replace(text.find("workload.rate_per_client_tps = 50"), 33,
                 "workload.rate_per_client_tps = 1500");
    const auto sc = parse(text);   // offered 3000 > 2 cores * 1000
    try {
        pipeline_predict(sc);
        FAIL("expected UnstableQueue");
    } catch (const UnstableQueue& e) {
        REQUIRE(e.stage().has_value());
        CHECK(*e.stage() == Stage::Execute);
    }
}
