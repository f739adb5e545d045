#pragma once

#include "eov/errors.hpp"

namespace eov {

// Alpha-beta link: a constant per-transfer overhead plus a bandwidth term.
// The bandwidth term is load-dependent (fanout * bits * rate / bandwidth):
// per-transaction latency grows with the offered message rate because
// transfers share the link in pipeline parallelism. Setting
// `per_message_term` switches to the conventional fanout * bits / bandwidth
// transfer time instead, for sensitivity studies.
struct LinkParams {
    double overhead_s = 0.0;       // alpha
    double bandwidth_bps = 1.0;    // beta
    int fanout = 1;                // receivers; k-1 for a leader broadcast
    bool per_message_term = false;

    bool operator==(const LinkParams&) const = default;
};

struct MessageLoad {
    double message_bits = 1.0;
    double rate = 0.0;             // messages/s through the link

    bool operator==(const MessageLoad&) const = default;
};

// alpha + fanout * bits * rate / beta  (seconds)
double link_latency(const LinkParams& link, const MessageLoad& load);

// 2 alpha + 2 bits rate / beta, the request/reply pair over one shared link.
// Only defined for fanout == 1.
double round_trip_latency(const LinkParams& link, const MessageLoad& load);

} // namespace eov
