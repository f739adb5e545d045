#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "eov/rng.hpp"
#include "eov/scenario.hpp"

namespace eov {

inline constexpr std::uint64_t kNoBlock = std::numeric_limits<std::uint64_t>::max();
inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// One transaction's life, timestamped at the ten points of the measurement
// scheme:
//   t1 client submits proposal        t6 consensus reached
//   t2 endorser receives              t7 enters the block cutter
//   t3 endorser replies               t8 block cut
//   t4 client receives / submits tx   t9 committer receives block
//   t5 leader receives                t10 block committed
struct TxRecord {
    std::uint64_t tx_id = 0;
    std::uint32_t client_id = 0;
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0;
    double t6 = 0, t7 = 0, t8 = 0, t9 = 0, t10 = 0;
    std::uint64_t block_id = kNoBlock;

    // Server-busy markers, filled by the simulator so analysis can split
    // service from queueing directly. NaN on hand-built traces; estimators
    // then fall back to timestamp-only accounting.
    double endorse_service_start = kUnset;
    double sequence_service_start = kUnset;
    double sequence_service_end = kUnset;
    double commit_service_start = kUnset;

    bool committed() const { return block_id != kNoBlock && t10 > 0.0; }
    std::array<double, 10> timestamps() const {
        return {t1, t2, t3, t4, t5, t6, t7, t8, t9, t10};
    }
};

struct Block {
    enum class CutReason { Timeout, SizeReached };
    std::uint64_t block_id = 0;
    std::vector<std::uint64_t> tx_ids;
    double cut_time = 0.0;
    CutReason cut_reason = CutReason::SizeReached;
};

const char* cut_reason_name(Block::CutReason reason);

// TxCount: exactly that many submissions, then the pipeline drains to empty.
// SimTime: submissions stop at the given time and the run halts there;
// whatever is still in flight stays uncommitted.
struct Horizon {
    enum class Kind { TxCount, SimTime };
    Kind kind = Kind::TxCount;
    double value = 0.0;

    static Horizon tx_count(std::uint64_t n) {
        return {Kind::TxCount, static_cast<double>(n)};
    }
    static Horizon sim_time(double seconds) { return {Kind::SimTime, seconds}; }
};

struct SimConfig {
    ScenarioConfig scenario;
    std::uint64_t seed = 0;
    Horizon horizon;
    double warmup_fraction = 0.2;   // share of the horizon dropped from stats
};

// Little's-law bookkeeping for one waiting room, accumulated over the
// post-warmup window.
struct StageQueueStats {
    double window_begin = 0.0;
    double window_end = 0.0;
    std::uint64_t arrivals = 0;       // arrivals inside the window
    double wait_sum = 0.0;            // their total queue wait
    double queue_area = 0.0;          // integral of queue length over window
    std::uint64_t empty_touches = 0;  // times the waiting room was seen empty

    double time_average_length() const {
        const double span = window_end - window_begin;
        return span > 0.0 ? queue_area / span : 0.0;
    }
    double arrival_rate() const {
        const double span = window_end - window_begin;
        return span > 0.0 ? arrivals / span : 0.0;
    }
    double mean_wait() const { return arrivals ? wait_sum / arrivals : 0.0; }
};

struct SimResult {
    std::vector<TxRecord> transactions;   // indexed by tx_id; committed + in flight
    std::vector<Block> blocks;
    std::uint64_t submitted = 0;
    std::uint64_t committed = 0;
    bool unstable = false;                // some stage was offered rho >= 1
    double warmup_cutoff = 0.0;           // txs with t1 below this are warmup
    double end_time = 0.0;
    StageQueueStats endorser_queue;
    StageQueueStats sequencer_queue;
    StageQueueStats committer_queue;      // block granularity
};

SimResult run_simulation(const SimConfig& cfg);

// Merged arrival stream of `count` transactions from `clients` independent
// Poisson sources, each at `per_client_rate`. The per-client streams are the
// ones the simulator uses, derived from the same seed.
struct Arrival {
    double time;
    std::uint32_t client;
};
std::vector<Arrival> generate_workload(int clients, double per_client_rate,
                                       std::uint64_t seed, std::uint64_t count);

// Per-message delay realization consistent with the alpha-beta mean:
// deterministic mode returns the mean itself; exponential mode jitters the
// bandwidth term around it.
struct SimLink {
    LinkParams params;
    double message_rate = 0.0;   // messages/s this link carries
    CommJitter jitter = CommJitter::None;
};
double communication_delay(const SimLink& link, double size_bits, RngStream& rng);

// Trace/block export: delimited text, one header row, times with enough
// digits to reload losslessly for comparison purposes.
void write_trace(const std::vector<TxRecord>& transactions, std::ostream& out);
void write_blocks(const std::vector<Block>& blocks, std::ostream& out);

} // namespace eov
