#pragma once

// Shared helpers for the simulator tests: a compact scenario builder and the
// structural invariant checks applied to every simulation run.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include "eov/sim.hpp"

namespace support {

inline eov::ScenarioConfig make_scenario(int clients, double per_client_rate,
                                         int cores, double mu_core, int osns,
                                         double mu_order, int batch_size,
                                         double batch_timeout_s,
                                         double ssd_iops) {
    eov::ScenarioConfig sc;
    sc.workload.clients = clients;
    sc.workload.per_client_rate = per_client_rate;
    sc.workload.tx_bits = 3.0 * eov::kBitsPerKb;

    const eov::LinkParams link{0.010, 1e10, 1, false};
    sc.execute.cores = cores;
    sc.execute.core_service_rate = mu_core;
    sc.execute.link = link;
    sc.order.osn_count = osns;
    sc.order.sequencing_rate = mu_order;
    sc.order.batch_size = batch_size;
    sc.order.batch_timeout_s = batch_timeout_s;
    sc.order.link_client_to_leader = link;
    sc.order.link_leader_to_followers = link;
    sc.validate.disk = {eov::DiskParams::Kind::SSD, ssd_iops, 0.0, 1.0};
    sc.validate.link = link;
    sc.refresh_derived();
    return sc;
}

// First violated structural invariant, or nullopt if the run is sound:
// timestamp monotonicity, block integrity and membership, conservation.
inline std::optional<std::string> structural_violation(
    const eov::SimResult& r, std::uint64_t batch_size) {
    std::uint64_t committed = 0;
    for (const auto& tx : r.transactions) {
        if (!tx.committed())
            continue;
        ++committed;
        const auto ts = tx.timestamps();
        for (size_t i = 1; i < ts.size(); ++i)
            if (ts[i] < ts[i - 1])
                return "timestamps not monotone for tx " + std::to_string(tx.tx_id);
    }
    if (committed != r.committed)
        return "committed counter does not match trace";
    if (r.committed + (r.transactions.size() - committed) != r.submitted)
        return "conservation violated: submitted != committed + in-flight";

    std::unordered_map<std::uint64_t, std::uint64_t> owner;
    for (const auto& block : r.blocks) {
        if (block.tx_ids.empty())
            return "empty block " + std::to_string(block.block_id);
        if (block.tx_ids.size() > batch_size)
            return "block " + std::to_string(block.block_id) + " exceeds batch size";
        for (auto id : block.tx_ids) {
            if (owner.count(id))
                return "tx " + std::to_string(id) + " appears in two blocks";
            owner[id] = block.block_id;
            if (r.transactions.at(id).block_id != block.block_id)
                return "tx " + std::to_string(id) + " disagrees with its block";
        }
    }
    for (const auto& tx : r.transactions)
        if (tx.committed() && !owner.count(tx.tx_id))
            return "committed tx " + std::to_string(tx.tx_id) + " not in any block";
    return std::nullopt;
}

// Little's law per stage over the post-warmup window. Pure accounting on the
// same realization, so it holds tightly unless the engine mistracks queues.
inline std::optional<std::string> littles_law_violation(const eov::SimResult& r,
                                                        double tolerance = 0.05) {
    const auto check = [&](const char* name,
                           const eov::StageQueueStats& s) -> std::optional<std::string> {
        const double average_length = s.time_average_length();
        const double rate_times_wait = s.arrival_rate() * s.mean_wait();
        const double scale = std::max(average_length, rate_times_wait);
        if (scale < 1e-6)
            return std::nullopt;   // no queueing to speak of
        const double rel = std::abs(average_length - rate_times_wait) / scale;
        if (rel > tolerance) {
            std::ostringstream os;
            os << name << " violates Little's law: L=" << average_length
               << " lambda*W=" << rate_times_wait << " rel=" << rel;
            return os.str();
        }
        return std::nullopt;
    };
    if (auto v = check("endorser", r.endorser_queue))
        return v;
    if (auto v = check("sequencer", r.sequencer_queue))
        return v;
    if (auto v = check("committer", r.committer_queue))
        return v;
    return std::nullopt;
}

} // namespace support
