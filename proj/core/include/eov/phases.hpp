#pragma once

#include <optional>

#include "eov/comm.hpp"
#include "eov/queueing.hpp"

namespace eov {

// Predictions are refused (not clamped) above this utilization: queue-wait
// formulas are near-singular there and the numbers would be meaningless.
inline constexpr double kStabilityMargin = 0.999;

struct ExecuteParams {
    int cores = 1;
    double core_service_rate = 1.0;   // tx/s each core sustains
    LinkParams link;                  // client <-> endorser, shared both ways
    std::optional<LinkParams> reply_link; // per-direction override, if any
    double tx_bits = 1.0;

    bool operator==(const ExecuteParams&) const = default;
};

struct OrderParams {
    int osn_count = 1;                // odd
    double sequencing_rate = 1.0;     // leader tx/s
    LinkParams link_client_to_leader;
    LinkParams link_leader_to_followers; // fanout = osn_count - 1
    double batch_timeout_s = 1.0;
    int batch_size = 1;
    VariationPair var;
    double tx_bits = 1.0;

    bool operator==(const OrderParams&) const = default;
};

struct DiskParams {
    enum class Kind { HDD, SSD };
    Kind kind = Kind::SSD;
    double iops = 1.0;
    double seek_s = 0.0;              // per-IO seek latency, HDD only
    double io_bytes = 1.0;            // data written per IO

    bool operator==(const DiskParams&) const = default;
};

struct ValidateParams {
    DiskParams disk;
    LinkParams link;                  // orderer -> committer
    VariationPair var;
    double tx_bits = 1.0;

    bool operator==(const ValidateParams&) const = default;
};

// Per-phase expected latency split. total is always the exact sum of the
// four components; idle is nonzero only for the order phase.
struct LatencyBreakdown {
    double comm = 0.0;
    double service = 0.0;
    double queueing = 0.0;
    double idle = 0.0;
    double total = 0.0;
};

LatencyBreakdown make_breakdown(double comm, double service, double queueing,
                                double idle = 0.0);

// Execute phase: c parallel cores, deterministic service, Poisson arrivals.
double execute_throughput(const ExecuteParams& p, double arrival_rate);
LatencyBreakdown execute_latency(const ExecuteParams& p, double arrival_rate);

// Order phase: single sequencer plus block cutter.
// Idle time: delta_t = batch_size / arrival_rate is the time the cutter
// needs to collect a full block; a transaction waits half the binding
// trigger, min(batch_timeout, delta_t) / 2.
double order_idle_time(const OrderParams& p, double arrival_rate);
double order_throughput(const OrderParams& p, double arrival_rate);
LatencyBreakdown order_latency(const OrderParams& p, double arrival_rate);

// Validate phase: single committer bounded by disk IO.
double disk_io_rate(const DiskParams& disk);                 // IO/s
double validate_service_rate(const DiskParams& disk, double tx_bits); // tx/s
LatencyBreakdown validate_latency(const ValidateParams& p, double arrival_rate);

struct PipelinePrediction {
    LatencyBreakdown execute;
    LatencyBreakdown order;
    LatencyBreakdown validate;
    double execute_throughput = 0.0;
    double order_throughput = 0.0;
    double validate_throughput = 0.0;
    double execute_utilization = 0.0;
    double order_utilization = 0.0;
    double validate_utilization = 0.0;
    double end_to_end = 0.0;

    Stage bottleneck() const;   // stage with the highest utilization
};

// Chains the three phases: each phase's steady-state throughput is the next
// phase's arrival rate. Throws UnstableQueue tagged with the first
// saturating stage.
PipelinePrediction pipeline_predict(const ExecuteParams& execute,
                                    const OrderParams& order,
                                    const ValidateParams& validate,
                                    double offered_rate);

} // namespace eov
