#include "eov/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace eov {

namespace {

std::vector<const TxRecord*> committed_after(const std::vector<TxRecord>& trace,
                                             double cutoff) {
    std::vector<const TxRecord*> out;
    out.reserve(trace.size());
    for (const TxRecord& tx : trace)
        if (tx.committed() && tx.t1 >= cutoff)
            out.push_back(&tx);
    if (out.empty())
        throw EmptyTrace("no committed transactions after the warmup cutoff");
    return out;
}

double cv_or_zero(std::vector<double>& samples) {
    if (samples.size() < 2)
        return 0.0;
    return estimate_cv(samples);
}

double gap_cv(std::vector<double> times) {
    std::sort(times.begin(), times.end());
    std::vector<double> gaps;
    gaps.reserve(times.size());
    for (size_t i = 1; i < times.size(); ++i)
        gaps.push_back(times[i] - times[i - 1]);
    return cv_or_zero(gaps);
}

double span_throughput(std::size_t n, double begin, double end) {
    return end > begin ? static_cast<double>(n) / (end - begin) : 0.0;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

double estimate_cv(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw InsufficientSamples("cv needs at least two samples");
    double sum = 0.0;
    for (double v : samples)
        sum += v;
    const double mean = sum / samples.size();
    if (mean == 0.0)
        throw ZeroMean("cv is undefined for zero-mean samples");
    double ss = 0.0;
    for (double v : samples)
        ss += (v - mean) * (v - mean);
    const double variance = ss / (samples.size() - 1);
    return std::sqrt(std::max(variance, 0.0)) / mean;
}

PhaseEstimates estimate_execute(const std::vector<TxRecord>& trace,
                                double warmup_cutoff) {
    const auto txs = committed_after(trace, warmup_cutoff);

    PhaseEstimates e;
    e.samples = txs.size();
    std::vector<double> arrivals, services;
    arrivals.reserve(txs.size());
    services.reserve(txs.size());
    double lo = txs.front()->t1, hi = txs.front()->t4;
    for (const TxRecord* tx : txs) {
        const bool measured = !std::isnan(tx->endorse_service_start);
        const double service =
            measured ? tx->t3 - tx->endorse_service_start : tx->t3 - tx->t2;
        const double queue = measured ? tx->endorse_service_start - tx->t2 : 0.0;
        e.mean_comm += (tx->t2 - tx->t1) + (tx->t4 - tx->t3);
        e.mean_service += service;
        e.mean_queue += queue;
        e.mean_total += tx->t4 - tx->t1;
        arrivals.push_back(tx->t2);
        services.push_back(service);
        lo = std::min(lo, tx->t1);
        hi = std::max(hi, tx->t4);
    }
    const double n = static_cast<double>(txs.size());
    e.mean_comm /= n;
    e.mean_service /= n;
    e.mean_queue /= n;
    e.mean_total /= n;
    e.cv_arrival = gap_cv(std::move(arrivals));
    e.cv_service = cv_or_zero(services);
    e.throughput = span_throughput(txs.size(), lo, hi);
    return e;
}

PhaseEstimates estimate_order(const std::vector<TxRecord>& trace,
                              double warmup_cutoff) {
    const auto txs = committed_after(trace, warmup_cutoff);

    PhaseEstimates e;
    e.samples = txs.size();
    std::vector<double> arrivals, services;
    arrivals.reserve(txs.size());
    double lo = txs.front()->t4, hi = txs.front()->t8;
    for (const TxRecord* tx : txs) {
        const bool measured = !std::isnan(tx->sequence_service_start);
        const double queue =
            measured ? tx->sequence_service_start - tx->t5 : 0.0;
        const double service =
            measured ? tx->sequence_service_end - tx->sequence_service_start : 0.0;
        const double replication =
            measured ? tx->t6 - tx->sequence_service_end : tx->t6 - tx->t5;
        e.mean_comm_c2l += tx->t5 - tx->t4;
        e.mean_comm_replication += replication;
        e.mean_queue += queue;
        e.mean_service += service;
        e.mean_idle += tx->t8 - tx->t7;
        e.mean_total += tx->t8 - tx->t4;
        arrivals.push_back(tx->t5);
        if (measured)
            services.push_back(service);
        lo = std::min(lo, tx->t4);
        hi = std::max(hi, tx->t8);
    }
    const double n = static_cast<double>(txs.size());
    e.mean_comm_c2l /= n;
    e.mean_comm_replication /= n;
    e.mean_comm = e.mean_comm_c2l + e.mean_comm_replication;
    e.mean_queue /= n;
    e.mean_service /= n;
    e.mean_idle /= n;
    e.mean_total /= n;
    e.cv_arrival = gap_cv(std::move(arrivals));
    e.cv_service = cv_or_zero(services);
    e.throughput = span_throughput(txs.size(), lo, hi);
    return e;
}

PhaseEstimates estimate_validate(const std::vector<TxRecord>& trace,
                                 double warmup_cutoff) {
    const auto txs = committed_after(trace, warmup_cutoff);

    PhaseEstimates e;
    e.samples = txs.size();
    // Committer work is block-granular: variation estimates come from block
    // arrivals and block service times, not the bursty per-tx view.
    std::map<std::uint64_t, std::pair<double, double>> per_block;
    double lo = txs.front()->t8, hi = txs.front()->t10;
    for (const TxRecord* tx : txs) {
        const bool measured = !std::isnan(tx->commit_service_start);
        const double service =
            measured ? tx->t10 - tx->commit_service_start : tx->t10 - tx->t9;
        const double queue = measured ? tx->commit_service_start - tx->t9 : 0.0;
        e.mean_comm += tx->t9 - tx->t8;
        e.mean_service += service;
        e.mean_queue += queue;
        e.mean_total += tx->t10 - tx->t8;
        per_block[tx->block_id] = {tx->t9, service};
        lo = std::min(lo, tx->t8);
        hi = std::max(hi, tx->t10);
    }
    const double n = static_cast<double>(txs.size());
    e.mean_comm /= n;
    e.mean_service /= n;
    e.mean_queue /= n;
    e.mean_total /= n;

    std::vector<double> block_arrivals, block_services;
    block_arrivals.reserve(per_block.size());
    for (const auto& [id, entry] : per_block) {
        block_arrivals.push_back(entry.first);
        block_services.push_back(entry.second);
    }
    e.cv_arrival = gap_cv(std::move(block_arrivals));
    e.cv_service = cv_or_zero(block_services);
    e.throughput = span_throughput(txs.size(), lo, hi);
    return e;
}

bool ComparisonReport::all_pass() const {
    for (const auto& m : metrics)
        if (!m.pass)
            return false;
    return true;
}

const MetricComparison* ComparisonReport::find(const std::string& metric) const {
    for (const auto& m : metrics)
        if (m.metric == metric)
            return &m;
    return nullptr;
}

namespace {

MetricComparison make_metric(const std::string& name, double analytical,
                             double simulated, double tolerance,
                             double absolute_floor) {
    MetricComparison m;
    m.metric = name;
    m.analytical = analytical;
    m.simulated = simulated;
    m.rel_error = std::abs(simulated - analytical) / std::max(simulated, 1e-12);
    m.pass = m.rel_error <= tolerance ||
             std::abs(simulated - analytical) <= absolute_floor;
    return m;
}

} // namespace

ComparisonReport compare(const ScenarioConfig& scenario, const SimResult& result,
                         double tolerance, double absolute_floor) {
    ComparisonReport report;
    report.tolerance = tolerance;
    report.absolute_floor = absolute_floor;

    const double offered = scenario.offered_rate();
    const double rho_execute =
        offered / (scenario.execute.cores * scenario.execute.core_service_rate);
    const double rho_order = offered / scenario.order.sequencing_rate;
    const double rho_validate =
        offered /
        validate_service_rate(scenario.validate.disk, scenario.validate.tx_bits);
    report.bottleneck = Stage::Execute;
    if (rho_order > rho_execute)
        report.bottleneck = Stage::Order;
    if (rho_validate > std::max(rho_execute, rho_order))
        report.bottleneck = Stage::Validate;

    if (result.unstable) {
        report.unstable = true;
        return report;
    }

    const auto execute = estimate_execute(result.transactions, result.warmup_cutoff);
    const auto order = estimate_order(result.transactions, result.warmup_cutoff);
    const auto validate =
        estimate_validate(result.transactions, result.warmup_cutoff);

    // Feed the measured variation back into the G/G/1 terms, the one input
    // the analytical model cannot know a priori.
    ScenarioConfig tuned = scenario;
    tuned.order.var = {order.cv_arrival, order.cv_service};
    tuned.validate.var = {validate.cv_arrival, validate.cv_service};
    const PipelinePrediction predict = pipeline_predict(tuned);

    const MessageLoad tx_load{scenario.workload.tx_bits, offered};
    const double model_c2l =
        link_latency(scenario.order.link_client_to_leader, tx_load);
    const double model_l2f =
        scenario.order.osn_count > 1
            ? link_latency(scenario.order.link_leader_to_followers, tx_load)
            : 0.0;

    auto add = [&](const std::string& name, double analytical, double simulated) {
        report.metrics.push_back(
            make_metric(name, analytical, simulated, tolerance, absolute_floor));
    };

    add("execute.total", predict.execute.total, execute.mean_total);
    add("execute.comm", predict.execute.comm, execute.mean_comm);
    add("execute.service", predict.execute.service, execute.mean_service);
    add("execute.queue", predict.execute.queueing, execute.mean_queue);
    add("order.total", predict.order.total, order.mean_total);
    add("order.comm", predict.order.comm, order.mean_comm);
    add("order.comm_c2l", model_c2l, order.mean_comm_c2l);
    add("order.comm_l2f", model_l2f, order.mean_comm_replication);
    add("order.service", predict.order.service, order.mean_service);
    add("order.queue", predict.order.queueing, order.mean_queue);
    add("order.idle", predict.order.idle, order.mean_idle);
    add("validate.total", predict.validate.total, validate.mean_total);
    add("validate.comm", predict.validate.comm, validate.mean_comm);
    add("validate.service", predict.validate.service, validate.mean_service);
    add("validate.queue", predict.validate.queueing, validate.mean_queue);
    add("end_to_end.total", predict.end_to_end,
        execute.mean_total + order.mean_total + validate.mean_total);
    add("throughput.execute", predict.execute_throughput, execute.throughput);
    add("throughput.order", predict.order_throughput, order.throughput);
    add("throughput.validate", predict.validate_throughput, validate.throughput);
    return report;
}

void write_estimates(const PhaseEstimates& execute, const PhaseEstimates& order,
                     const PhaseEstimates& validate, std::ostream& out) {
    out << "phase,total,comm,service,queue,idle,cv_arrival,cv_service,"
           "throughput,samples\n";
    auto row = [&](const char* phase, const PhaseEstimates& e) {
        out << phase << ',' << format_value(e.mean_total) << ','
            << format_value(e.mean_comm) << ',' << format_value(e.mean_service)
            << ',' << format_value(e.mean_queue) << ','
            << format_value(e.mean_idle) << ',' << format_value(e.cv_arrival)
            << ',' << format_value(e.cv_service) << ','
            << format_value(e.throughput) << ',' << e.samples << '\n';
    };
    row("execute", execute);
    row("order", order);
    row("validate", validate);
}

void write_comparison(const ComparisonReport& report, std::ostream& out) {
    out << "metric,analytical,simulated,rel_error,pass\n";
    for (const auto& m : report.metrics)
        out << m.metric << ',' << format_value(m.analytical) << ','
            << format_value(m.simulated) << ',' << format_value(m.rel_error)
            << ',' << (m.pass ? "true" : "false") << '\n';
}

void write_breakdown(const PipelinePrediction& p, std::ostream& out) {
    out << "phase,comm,service,queueing,idle,total,throughput,utilization\n";
    auto row = [&](const char* phase, const LatencyBreakdown& b, double psi,
                   double rho) {
        out << phase << ',' << format_value(b.comm) << ','
            << format_value(b.service) << ',' << format_value(b.queueing) << ','
            << format_value(b.idle) << ',' << format_value(b.total) << ','
            << format_value(psi) << ',' << format_value(rho) << '\n';
    };
    row("execute", p.execute, p.execute_throughput, p.execute_utilization);
    row("order", p.order, p.order_throughput, p.order_utilization);
    row("validate", p.validate, p.validate_throughput, p.validate_utilization);
    out << "end_to_end,,,,," << format_value(p.end_to_end) << ",,\n";
}

} // namespace eov
