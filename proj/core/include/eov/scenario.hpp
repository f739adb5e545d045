#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eov/phases.hpp"

namespace eov {

// Unit conversions used by the scenario layer. Everything is stored
// internally in seconds, bits and bits/second; files speak in the customary
// units (ms, KB, Mbps) or in the SI spellings written by write_scenario.
inline constexpr double kBitsPerKb = 8192.0;
inline constexpr double kBitsPerSecPerMbps = 1e6;

struct WorkloadParams {
    int clients = 1;
    double per_client_rate = 1.0;   // tx/s submitted by each client
    double tx_bits = 3.0 * kBitsPerKb;

    bool operator==(const WorkloadParams&) const = default;
};

enum class CommJitter { None, Exponential };

struct SweepSpec {
    enum class Parameter { Cores, Osns, Lambda, BatchSize };
    Parameter parameter = Parameter::Lambda;
    std::vector<double> values;

    bool operator==(const SweepSpec&) const = default;
};

const char* sweep_parameter_name(SweepSpec::Parameter p);

// Full description of one pipeline deployment. Every nested field is in
// canonical units; load_scenario converts once at parse time.
struct ScenarioConfig {
    WorkloadParams workload;
    ExecuteParams execute;
    OrderParams order;
    ValidateParams validate;
    CommJitter comm_jitter = CommJitter::None;
    std::string preset;                       // tag the file inherited from
    std::optional<double> io_bytes_override;  // absent: one IO per block
    std::optional<SweepSpec> sweep;

    double offered_rate() const {
        return workload.clients * workload.per_client_rate;
    }

    // Recomputes fields derived from others: the leader broadcast fanout,
    // the per-transaction size copied into each phase, and the bytes per
    // disk IO (block bytes unless overridden). Call after any mutation.
    void refresh_derived();

    bool operator==(const ScenarioConfig&) const = default;
};

// Link/disk defaults for the two measured clusters: "local-1gbps"
// (1 Gbps, HDD) and "cloud-10gbps" (10 Gbps, SSD). Service rates are
// deliberately absent; they are deployment-specific and must come from the
// scenario file.
ScenarioConfig preset_scenario(const std::string& name);

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in, const std::string& origin);
void write_scenario(const ScenarioConfig& scenario, std::ostream& out);

// In-place application of one sweep point.
void apply_sweep_value(ScenarioConfig& scenario, SweepSpec::Parameter parameter,
                       double value);

PipelinePrediction pipeline_predict(const ScenarioConfig& scenario);

} // namespace eov
