#include "eov/phases.hpp"

#include <cmath>
#include <stdexcept>

namespace eov {

namespace {

double checked_utilization(const QueueLoad& load, Stage stage) {
    const double rho = utilization(load);
    if (rho >= kStabilityMargin)
        throw UnstableQueue(rho, stage);
    return rho;
}

void require_valid(const OrderParams& p) {
    if (p.osn_count < 1 || p.osn_count % 2 == 0)
        throw std::invalid_argument("osn_count must be odd and >= 1");
    if (p.batch_timeout_s <= 0.0)
        throw std::invalid_argument("batch_timeout must be > 0");
    if (p.batch_size < 1)
        throw std::invalid_argument("batch_size must be >= 1");
}

void require_valid(const DiskParams& disk) {
    if (!std::isfinite(disk.iops) || disk.iops <= 0.0)
        throw std::invalid_argument("disk iops must be finite and > 0");
    if (!std::isfinite(disk.seek_s) || disk.seek_s < 0.0)
        throw std::invalid_argument("disk seek must be finite and >= 0");
    if (disk.kind == DiskParams::Kind::SSD && disk.seek_s != 0.0)
        throw std::invalid_argument("SSD disks have no seek latency");
    if (!std::isfinite(disk.io_bytes) || disk.io_bytes <= 0.0)
        throw std::invalid_argument("io_bytes must be finite and > 0");
}

} // namespace

LatencyBreakdown make_breakdown(double comm, double service, double queueing,
                                double idle) {
    LatencyBreakdown b;
    b.comm = comm;
    b.service = service;
    b.queueing = queueing;
    b.idle = idle;
    b.total = comm + service + queueing + idle;
    return b;
}

double execute_throughput(const ExecuteParams& p, double arrival_rate) {
    const QueueLoad load{arrival_rate, p.core_service_rate, p.cores};
    const double rho = checked_utilization(load, Stage::Execute);
    // psi = c mu rho, which collapses to the arrival rate in steady state.
    return p.cores * p.core_service_rate * rho;
}

LatencyBreakdown execute_latency(const ExecuteParams& p, double arrival_rate) {
    const QueueLoad load{arrival_rate, p.core_service_rate, p.cores};
    const double rho = checked_utilization(load, Stage::Execute);

    const MessageLoad msg{p.tx_bits, arrival_rate};
    const double comm =
        p.reply_link ? link_latency(p.link, msg) + link_latency(*p.reply_link, msg)
                     : round_trip_latency(p.link, msg);
    const double service = 1.0 / p.core_service_rate;
    const double queueing = rho == 0.0 ? 0.0 : mdc_wait(load);
    return make_breakdown(comm, service, queueing);
}

double order_idle_time(const OrderParams& p, double arrival_rate) {
    require_valid(p);
    if (!(arrival_rate > 0.0))
        throw std::invalid_argument("arrival_rate must be > 0");
    const double fill_time = p.batch_size / arrival_rate;
    return std::min(p.batch_timeout_s / 2.0, fill_time / 2.0);
}

double order_throughput(const OrderParams& p, double arrival_rate) {
    require_valid(p);
    const QueueLoad load{arrival_rate, p.sequencing_rate, 1};
    const double rho = checked_utilization(load, Stage::Order);
    // Sequencing on the leader is the single-server bottleneck; follower
    // count does not enter.
    return p.sequencing_rate * rho;
}

LatencyBreakdown order_latency(const OrderParams& p, double arrival_rate) {
    require_valid(p);
    const QueueLoad load{arrival_rate, p.sequencing_rate, 1};
    checked_utilization(load, Stage::Order);

    const MessageLoad msg{p.tx_bits, arrival_rate};
    double comm = link_latency(p.link_client_to_leader, msg);
    if (p.osn_count > 1)
        comm += link_latency(p.link_leader_to_followers, msg);
    const double service = 1.0 / p.sequencing_rate;
    const double idle = order_idle_time(p, arrival_rate);
    const double queueing = kingman_wait(load, p.var);
    return make_breakdown(comm, service, queueing, idle);
}

double disk_io_rate(const DiskParams& disk) {
    require_valid(disk);
    if (disk.kind == DiskParams::Kind::HDD)
        return 1.0 / (disk.seek_s + 1.0 / disk.iops);
    return disk.iops;
}

double validate_service_rate(const DiskParams& disk, double tx_bits) {
    if (!std::isfinite(tx_bits) || tx_bits <= 0.0)
        throw std::invalid_argument("tx_bits must be finite and > 0");
    const double tx_bytes = tx_bits / 8.0;
    return disk_io_rate(disk) * disk.io_bytes / tx_bytes;
}

LatencyBreakdown validate_latency(const ValidateParams& p, double arrival_rate) {
    const double service_rate = validate_service_rate(p.disk, p.tx_bits);
    const QueueLoad load{arrival_rate, service_rate, 1};
    checked_utilization(load, Stage::Validate);

    const MessageLoad msg{p.tx_bits, arrival_rate};
    const double comm = link_latency(p.link, msg);
    const double service = 1.0 / service_rate;
    const double queueing = kingman_wait(load, p.var);
    return make_breakdown(comm, service, queueing);
}

Stage PipelinePrediction::bottleneck() const {
    Stage stage = Stage::Execute;
    double rho = execute_utilization;
    if (order_utilization > rho) {
        stage = Stage::Order;
        rho = order_utilization;
    }
    if (validate_utilization > rho)
        stage = Stage::Validate;
    return stage;
}

PipelinePrediction pipeline_predict(const ExecuteParams& execute,
                                    const OrderParams& order,
                                    const ValidateParams& validate,
                                    double offered_rate) {
    if (!std::isfinite(offered_rate) || offered_rate <= 0.0)
        throw std::invalid_argument("offered_rate must be finite and > 0");

    PipelinePrediction out;

    // Each phase's output feeds the next, so steady-state rates propagate.
    const double lambda_execute = offered_rate;
    out.execute = execute_latency(execute, lambda_execute);
    out.execute_throughput = execute_throughput(execute, lambda_execute);
    out.execute_utilization = utilization(
        {lambda_execute, execute.core_service_rate, execute.cores});

    const double lambda_order = out.execute_throughput;
    out.order = order_latency(order, lambda_order);
    out.order_throughput = order_throughput(order, lambda_order);
    out.order_utilization = utilization({lambda_order, order.sequencing_rate, 1});

    const double lambda_validate = out.order_throughput;
    out.validate = validate_latency(validate, lambda_validate);
    const double mu_validate =
        validate_service_rate(validate.disk, validate.tx_bits);
    out.validate_utilization = utilization({lambda_validate, mu_validate, 1});
    out.validate_throughput = mu_validate * out.validate_utilization;

    out.end_to_end = out.execute.total + out.order.total + out.validate.total;
    return out;
}

} // namespace eov
