#include "eov/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace eov {

const char* cut_reason_name(Block::CutReason reason) {
    return reason == Block::CutReason::Timeout ? "timeout" : "size_reached";
}

double communication_delay(const SimLink& link, double size_bits,
                           RngStream& rng) {
    const double mean = link_latency(link.params, {size_bits, link.message_rate});
    if (link.jitter == CommJitter::None)
        return mean;
    // Jitter only the bandwidth term; the long-run mean stays the model's.
    const double bandwidth_term = mean - link.params.overhead_s;
    return link.params.overhead_s + bandwidth_term * rng.exp_unit();
}

std::vector<Arrival> generate_workload(int clients, double per_client_rate,
                                       std::uint64_t seed, std::uint64_t count) {
    if (clients < 1)
        throw std::invalid_argument("clients must be >= 1");
    if (!(per_client_rate > 0.0))
        throw std::invalid_argument("per_client_rate must be > 0");

    std::vector<RngStream> streams;
    std::vector<double> next;
    streams.reserve(clients);
    for (int i = 0; i < clients; ++i) {
        streams.emplace_back(seed, "client", static_cast<std::uint64_t>(i));
        next.push_back(streams.back().exponential(per_client_rate));
    }

    std::vector<Arrival> out;
    out.reserve(count);
    while (out.size() < count) {
        int who = 0;
        for (int i = 1; i < clients; ++i)
            if (next[i] < next[who])
                who = i;
        out.push_back({next[who], static_cast<std::uint32_t>(who)});
        next[who] += streams[who].exponential(per_client_rate);
    }
    return out;
}

namespace {

enum class EventKind : std::uint8_t {
    ClientSubmit,
    EndorserArrive,
    EndorserDone,
    LeaderArrive,
    SequenceDone,
    Consensus,
    CutterTimeout,
    BlockArrive,
    BlockDone,
};

struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    std::uint64_t subject;
};

struct LaterEvent {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time)
            return a.time > b.time;
        return a.seq > b.seq;
    }
};

// FIFO waiting room in front of a bank of identical servers, with the
// queue-length integral needed for Little's-law checks.
class Station {
public:
    explicit Station(int servers) : servers_(servers) {}

    void set_window_begin(double t) { window_begin_ = t; }

    bool arrive(std::uint64_t id, double now) {
        advance(now);
        if (now >= window_begin_)
            ++arrivals_;
        if (busy_ < servers_) {
            ++busy_;
            ++empty_touches_;
            return true;
        }
        waiting_.emplace_back(id, now);
        return false;
    }

    std::optional<std::uint64_t> complete(double now) {
        advance(now);
        --busy_;
        if (waiting_.empty()) {
            ++empty_touches_;
            return std::nullopt;
        }
        const auto [id, arrived] = waiting_.front();
        waiting_.pop_front();
        ++busy_;
        if (arrived >= window_begin_)
            wait_sum_ += now - arrived;
        if (waiting_.empty())
            ++empty_touches_;
        return id;
    }

    StageQueueStats finalize(double end_time) {
        advance(end_time);
        StageQueueStats s;
        s.window_begin = std::isfinite(window_begin_) ? window_begin_ : end_time;
        s.window_end = end_time;
        s.arrivals = arrivals_;
        s.wait_sum = wait_sum_;
        s.queue_area = area_;
        s.empty_touches = empty_touches_;
        return s;
    }

private:
    void advance(double now) {
        const double from = std::max(last_change_, window_begin_);
        if (now > from)
            area_ += static_cast<double>(waiting_.size()) * (now - from);
        last_change_ = std::max(last_change_, now);
    }

    int servers_;
    int busy_ = 0;
    std::deque<std::pair<std::uint64_t, double>> waiting_;
    double window_begin_ = std::numeric_limits<double>::infinity();
    double last_change_ = 0.0;
    double area_ = 0.0;
    std::uint64_t arrivals_ = 0;
    double wait_sum_ = 0.0;
    std::uint64_t empty_touches_ = 0;
};

class Engine {
public:
    explicit Engine(const SimConfig& cfg)
        : cfg_(cfg),
          scenario_(cfg.scenario),
          endorser_(scenario_.execute.cores),
          sequencer_(1),
          committer_(1),
          rng_c2e_(cfg.seed, "link.c2e"),
          rng_e2c_(cfg.seed, "link.e2c"),
          rng_c2l_(cfg.seed, "link.c2l"),
          rng_l2f_(cfg.seed, "link.l2f"),
          rng_o2c_(cfg.seed, "link.o2c") {
        if (cfg.horizon.value <= 0.0)
            throw std::invalid_argument("horizon must be > 0");
        if (cfg.warmup_fraction < 0.0 || cfg.warmup_fraction >= 1.0)
            throw std::invalid_argument("warmup fraction must be in [0, 1)");

        tx_bits_ = scenario_.workload.tx_bits;
        endorse_service_ = 1.0 / scenario_.execute.core_service_rate;
        sequence_service_ = 1.0 / scenario_.order.sequencing_rate;
        commit_rate_ =
            validate_service_rate(scenario_.validate.disk, tx_bits_);
        batch_size_ = static_cast<std::uint64_t>(scenario_.order.batch_size);
        batch_timeout_ = scenario_.order.batch_timeout_s;
        osn_count_ = scenario_.order.osn_count;
        majority_acks_ = (osn_count_ - 1) / 2;

        const double offered = scenario_.offered_rate();
        const auto jitter = scenario_.comm_jitter;
        c2e_ = {scenario_.execute.link, offered, jitter};
        e2c_ = {scenario_.execute.reply_link.value_or(scenario_.execute.link),
                offered, jitter};
        c2l_ = {scenario_.order.link_client_to_leader, offered, jitter};
        l2f_ = {scenario_.order.link_leader_to_followers, offered, jitter};
        o2c_ = {scenario_.validate.link,
                offered / static_cast<double>(batch_size_), jitter};

        const double rho_execute =
            offered / (scenario_.execute.cores * scenario_.execute.core_service_rate);
        const double rho_order = offered / scenario_.order.sequencing_rate;
        const double rho_validate = offered / commit_rate_;
        unstable_ = rho_execute >= kStabilityMargin ||
                    rho_order >= kStabilityMargin ||
                    rho_validate >= kStabilityMargin;

        for (int i = 0; i < scenario_.workload.clients; ++i)
            clients_.emplace_back(cfg.seed, "client",
                                  static_cast<std::uint64_t>(i));
    }

    SimResult run() {
        setup_horizon();
        for (std::uint32_t c = 0; c < clients_.size(); ++c)
            schedule_client(c, clients_[c].exponential(per_client_rate()));

        double now = 0.0;
        while (!events_.empty()) {
            const Event ev = events_.top();
            if (hard_stop_ && ev.time > stop_time_)
                break;
            events_.pop();
            now = ev.time;
            dispatch(ev);
        }
        const double end_time = hard_stop_ ? stop_time_ : now;

        SimResult out;
        out.transactions = std::move(records_);
        out.blocks = std::move(blocks_);
        out.submitted = submitted_;
        out.committed = committed_;
        out.unstable = unstable_;
        out.warmup_cutoff = warmup_cutoff_;
        out.end_time = end_time;
        out.endorser_queue = endorser_.finalize(end_time);
        out.sequencer_queue = sequencer_.finalize(end_time);
        out.committer_queue = committer_.finalize(end_time);
        return out;
    }

private:
    double per_client_rate() const { return scenario_.workload.per_client_rate; }

    void setup_horizon() {
        if (cfg_.horizon.kind == Horizon::Kind::TxCount) {
            max_submissions_ = static_cast<std::uint64_t>(cfg_.horizon.value);
            if (max_submissions_ == 0)
                throw std::invalid_argument("horizon must be >= 1 transaction");
            warmup_index_ = static_cast<std::uint64_t>(
                static_cast<double>(max_submissions_) * cfg_.warmup_fraction);
        } else {
            hard_stop_ = true;
            stop_time_ = cfg_.horizon.value;
            warmup_cutoff_ = cfg_.warmup_fraction * stop_time_;
            activate_windows(warmup_cutoff_);
        }
        if (cfg_.warmup_fraction == 0.0) {
            warmup_cutoff_ = 0.0;
            activate_windows(0.0);
        }
    }

    void activate_windows(double t) {
        endorser_.set_window_begin(t);
        sequencer_.set_window_begin(t);
        committer_.set_window_begin(t);
    }

    void schedule(double time, EventKind kind, std::uint64_t subject) {
        events_.push(Event{time, next_seq_++, kind, subject});
    }

    void schedule_client(std::uint32_t client, double time) {
        if (hard_stop_ && time > stop_time_)
            return;
        schedule(time, EventKind::ClientSubmit, client);
    }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
        case EventKind::ClientSubmit: on_submit(ev); break;
        case EventKind::EndorserArrive: on_endorser_arrive(ev); break;
        case EventKind::EndorserDone: on_endorser_done(ev); break;
        case EventKind::LeaderArrive: on_leader_arrive(ev); break;
        case EventKind::SequenceDone: on_sequence_done(ev); break;
        case EventKind::Consensus: on_consensus(ev); break;
        case EventKind::CutterTimeout: on_cutter_timeout(ev); break;
        case EventKind::BlockArrive: on_block_arrive(ev); break;
        case EventKind::BlockDone: on_block_done(ev); break;
        }
    }

    void on_submit(const Event& ev) {
        const auto client = static_cast<std::uint32_t>(ev.subject);
        if (max_submissions_ && submitted_ >= max_submissions_)
            return;

        TxRecord tx;
        tx.tx_id = records_.size();
        tx.client_id = client;
        tx.t1 = ev.time;
        records_.push_back(tx);
        if (max_submissions_ && submitted_ == warmup_index_ &&
            cfg_.warmup_fraction > 0.0) {
            warmup_cutoff_ = ev.time;
            activate_windows(ev.time);
        }
        ++submitted_;

        schedule(ev.time + communication_delay(c2e_, tx_bits_, rng_c2e_),
                 EventKind::EndorserArrive, tx.tx_id);

        if (!max_submissions_ || submitted_ < max_submissions_)
            schedule_client(client,
                            ev.time + clients_[client].exponential(per_client_rate()));
    }

    void on_endorser_arrive(const Event& ev) {
        TxRecord& tx = records_[ev.subject];
        tx.t2 = ev.time;
        if (endorser_.arrive(ev.subject, ev.time))
            start_endorse(ev.subject, ev.time);
    }

    void start_endorse(std::uint64_t id, double now) {
        records_[id].endorse_service_start = now;
        schedule(now + endorse_service_, EventKind::EndorserDone, id);
    }

    void on_endorser_done(const Event& ev) {
        TxRecord& tx = records_[ev.subject];
        tx.t3 = ev.time;
        if (auto next = endorser_.complete(ev.time))
            start_endorse(*next, ev.time);

        tx.t4 = ev.time + communication_delay(e2c_, tx_bits_, rng_e2c_);
        schedule(tx.t4 + communication_delay(c2l_, tx_bits_, rng_c2l_),
                 EventKind::LeaderArrive, ev.subject);
    }

    void on_leader_arrive(const Event& ev) {
        TxRecord& tx = records_[ev.subject];
        tx.t5 = ev.time;
        if (sequencer_.arrive(ev.subject, ev.time))
            start_sequence(ev.subject, ev.time);
    }

    void start_sequence(std::uint64_t id, double now) {
        records_[id].sequence_service_start = now;
        schedule(now + sequence_service_, EventKind::SequenceDone, id);
    }

    void on_sequence_done(const Event& ev) {
        TxRecord& tx = records_[ev.subject];
        tx.sequence_service_end = ev.time;
        if (auto next = sequencer_.complete(ev.time))
            start_sequence(*next, ev.time);
        schedule(ev.time + consensus_delay(), EventKind::Consensus, ev.subject);
    }

    // Followers acknowledge as soon as the replicated entry reaches them;
    // consensus holds once a majority of the cluster has it (the leader
    // votes for itself), so the delay is the majority order statistic of
    // the per-follower broadcast delays.
    double consensus_delay() {
        if (osn_count_ <= 1)
            return 0.0;
        if (scenario_.comm_jitter == CommJitter::None)
            return communication_delay(l2f_, tx_bits_, rng_l2f_);
        follower_delays_.clear();
        for (int i = 0; i < osn_count_ - 1; ++i)
            follower_delays_.push_back(
                communication_delay(l2f_, tx_bits_, rng_l2f_));
        auto nth = follower_delays_.begin() + (majority_acks_ - 1);
        std::nth_element(follower_delays_.begin(), nth, follower_delays_.end());
        return *nth;
    }

    void on_consensus(const Event& ev) {
        TxRecord& tx = records_[ev.subject];
        tx.t6 = ev.time;
        tx.t7 = ev.time;   // hands straight to the block cutter
        if (open_batch_.empty())
            schedule(ev.time + batch_timeout_, EventKind::CutterTimeout,
                     cutter_token_);
        open_batch_.push_back(ev.subject);
        if (open_batch_.size() >= batch_size_)
            cut_block(ev.time, Block::CutReason::SizeReached);
    }

    void on_cutter_timeout(const Event& ev) {
        if (ev.subject == cutter_token_ && !open_batch_.empty())
            cut_block(ev.time, Block::CutReason::Timeout);
    }

    void cut_block(double now, Block::CutReason reason) {
        Block block;
        block.block_id = blocks_.size();
        block.tx_ids = std::move(open_batch_);
        block.cut_time = now;
        block.cut_reason = reason;
        open_batch_.clear();
        ++cutter_token_;

        for (std::uint64_t id : block.tx_ids) {
            records_[id].t8 = now;
            records_[id].block_id = block.block_id;
        }
        const double block_bits = static_cast<double>(block.tx_ids.size()) * tx_bits_;
        blocks_.push_back(std::move(block));
        schedule(now + communication_delay(o2c_, block_bits, rng_o2c_),
                 EventKind::BlockArrive, blocks_.back().block_id);
    }

    void on_block_arrive(const Event& ev) {
        const Block& block = blocks_[ev.subject];
        for (std::uint64_t id : block.tx_ids)
            records_[id].t9 = ev.time;
        if (committer_.arrive(ev.subject, ev.time))
            start_commit(ev.subject, ev.time);
    }

    void start_commit(std::uint64_t block_id, double now) {
        const Block& block = blocks_[block_id];
        for (std::uint64_t id : block.tx_ids)
            records_[id].commit_service_start = now;
        const double service =
            static_cast<double>(block.tx_ids.size()) / commit_rate_;
        schedule(now + service, EventKind::BlockDone, block_id);
    }

    void on_block_done(const Event& ev) {
        const Block& block = blocks_[ev.subject];
        for (std::uint64_t id : block.tx_ids)
            records_[id].t10 = ev.time;
        committed_ += block.tx_ids.size();
        if (auto next = committer_.complete(ev.time))
            start_commit(*next, ev.time);
    }

    const SimConfig& cfg_;
    const ScenarioConfig& scenario_;

    double tx_bits_ = 0.0;
    double endorse_service_ = 0.0;
    double sequence_service_ = 0.0;
    double commit_rate_ = 0.0;
    std::uint64_t batch_size_ = 1;
    double batch_timeout_ = 1.0;
    int osn_count_ = 1;
    int majority_acks_ = 0;
    bool unstable_ = false;

    SimLink c2e_, e2c_, c2l_, l2f_, o2c_;

    std::uint64_t max_submissions_ = 0;   // 0 means time-bounded instead
    bool hard_stop_ = false;
    double stop_time_ = 0.0;
    std::uint64_t warmup_index_ = 0;
    double warmup_cutoff_ = 0.0;

    std::priority_queue<Event, std::vector<Event>, LaterEvent> events_;
    std::uint64_t next_seq_ = 0;

    std::vector<RngStream> clients_;
    Station endorser_;
    Station sequencer_;
    Station committer_;
    RngStream rng_c2e_, rng_e2c_, rng_c2l_, rng_l2f_, rng_o2c_;

    std::vector<TxRecord> records_;
    std::vector<Block> blocks_;
    std::vector<std::uint64_t> open_batch_;
    std::uint64_t cutter_token_ = 0;
    std::vector<double> follower_delays_;

    std::uint64_t submitted_ = 0;
    std::uint64_t committed_ = 0;
};

void append_time(std::string& row, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    row += buf;
}

} // namespace

SimResult run_simulation(const SimConfig& cfg) {
    Engine engine(cfg);
    return engine.run();
}

void write_trace(const std::vector<TxRecord>& transactions, std::ostream& out) {
    out << "tx_id,client_id,t1,t2,t3,t4,t5,t6,t7,t8,t9,t10,block_id\n";
    std::string row;
    for (const TxRecord& tx : transactions) {
        if (!tx.committed())
            continue;
        row.clear();
        row += std::to_string(tx.tx_id);
        row += ',';
        row += std::to_string(tx.client_id);
        for (double t : tx.timestamps()) {
            row += ',';
            append_time(row, t);
        }
        row += ',';
        row += std::to_string(tx.block_id);
        row += '\n';
        out << row;
    }
}

void write_blocks(const std::vector<Block>& blocks, std::ostream& out) {
    out << "block_id,cut_time,cut_reason,tx_count,tx_ids\n";
    std::string row;
    for (const Block& block : blocks) {
        row.clear();
        row += std::to_string(block.block_id);
        row += ',';
        append_time(row, block.cut_time);
        row += ',';
        row += cut_reason_name(block.cut_reason);
        row += ',';
        row += std::to_string(block.tx_ids.size());
        row += ',';
        for (size_t i = 0; i < block.tx_ids.size(); ++i) {
            if (i)
                row += ';';
            row += std::to_string(block.tx_ids[i]);
        }
        row += '\n';
        out << row;
    }
}

} // namespace eov
