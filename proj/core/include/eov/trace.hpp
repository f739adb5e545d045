#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "eov/sim.hpp"

namespace eov {

// Empirical per-phase statistics computed from a committed-transaction
// trace: mean latency components, the coefficients of variation feeding the
// G/G/1 predictions, and throughput over the observed span. The component
// means always add up to mean_total exactly, because they are computed from
// the same per-transaction decomposition. cv fields are 0 when the trace is
// too short to estimate them.
struct PhaseEstimates {
    double mean_total = 0.0;
    double mean_comm = 0.0;
    double mean_service = 0.0;
    double mean_queue = 0.0;
    double mean_idle = 0.0;
    double cv_arrival = 0.0;
    double cv_service = 0.0;
    double throughput = 0.0;
    std::size_t samples = 0;

    // Order phase only: the two communication legs that make up mean_comm.
    // mean_comm_replication covers sequencing handoff to consensus; on
    // traces without server-busy markers it equals the t6 - t5 estimator.
    double mean_comm_c2l = 0.0;
    double mean_comm_replication = 0.0;
};

// Transactions with t1 >= warmup_cutoff enter the statistics; the cutoff
// applies to whole transactions so the three phases see the same sample set.
PhaseEstimates estimate_execute(const std::vector<TxRecord>& trace,
                                double warmup_cutoff = 0.0);
PhaseEstimates estimate_order(const std::vector<TxRecord>& trace,
                              double warmup_cutoff = 0.0);
PhaseEstimates estimate_validate(const std::vector<TxRecord>& trace,
                                 double warmup_cutoff = 0.0);

// Sample standard deviation (unbiased variance) over sample mean.
double estimate_cv(const std::vector<double>& samples);

struct MetricComparison {
    std::string metric;
    double analytical = 0.0;
    double simulated = 0.0;
    double rel_error = 0.0;   // |sim - model| / max(sim, 1e-12)
    bool pass = false;
};

struct ComparisonReport {
    std::vector<MetricComparison> metrics;
    Stage bottleneck = Stage::Execute;
    bool unstable = false;
    double tolerance = 0.1;
    double absolute_floor = 0.0;

    bool all_pass() const;
    const MetricComparison* find(const std::string& metric) const;
};

// Pairs every analytical prediction with its trace estimate. The analytical
// side re-runs the phase models with coefficients of variation estimated
// from this trace. A metric passes when its relative error is within
// `tolerance` or the absolute gap is within `absolute_floor` (for metrics
// whose true value is essentially zero). Saturated scenarios produce a
// report that only carries the unstable flag.
ComparisonReport compare(const ScenarioConfig& scenario, const SimResult& result,
                         double tolerance = 0.1, double absolute_floor = 5e-4);

void write_estimates(const PhaseEstimates& execute, const PhaseEstimates& order,
                     const PhaseEstimates& validate, std::ostream& out);
void write_comparison(const ComparisonReport& report, std::ostream& out);
void write_breakdown(const PipelinePrediction& prediction, std::ostream& out);

} // namespace eov
