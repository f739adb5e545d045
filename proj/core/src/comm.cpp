#include "eov/comm.hpp"

#include <cmath>
#include <stdexcept>

namespace eov {

namespace {

void require_valid(const LinkParams& link) {
    if (!std::isfinite(link.overhead_s) || link.overhead_s < 0.0)
        throw std::invalid_argument("link overhead must be finite and >= 0");
    if (!std::isfinite(link.bandwidth_bps) || link.bandwidth_bps <= 0.0)
        throw std::invalid_argument("link bandwidth must be finite and > 0");
    if (link.fanout < 1)
        throw std::invalid_argument("link fanout must be >= 1");
}

void require_valid(const MessageLoad& load) {
    if (!std::isfinite(load.message_bits) || load.message_bits <= 0.0)
        throw std::invalid_argument("message size must be finite and > 0");
    if (!std::isfinite(load.rate) || load.rate < 0.0)
        throw std::invalid_argument("message rate must be finite and >= 0");
}

} // namespace

double link_latency(const LinkParams& link, const MessageLoad& load) {
    require_valid(link);
    require_valid(load);

    const double volume = link.per_message_term
                              ? link.fanout * load.message_bits
                              : link.fanout * load.message_bits * load.rate;
    return link.overhead_s + volume / link.bandwidth_bps;
}

double round_trip_latency(const LinkParams& link, const MessageLoad& load) {
    if (link.fanout > 1)
        throw FanoutNotSupported(
            "round_trip_latency is defined for point-to-point links");
    return 2.0 * link_latency(link, load);
}

} // namespace eov
