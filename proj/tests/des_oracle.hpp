#pragma once

// Brute-force single-station oracle used to validate the closed-form queue
// formulas. Deliberately independent of the event engine under test: waits
// come straight from the earliest-free-server recurrence over one stream of
// Poisson arrivals.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "eov/rng.hpp"

namespace oracle {

inline double mean_queue_wait(double arrival_rate, double service_rate,
                              int servers, bool deterministic_service,
                              std::uint64_t arrivals, std::uint64_t seed) {
    eov::RngStream arrival_stream(seed, "oracle.arrivals");
    eov::RngStream service_stream(seed, "oracle.services");

    std::priority_queue<double, std::vector<double>, std::greater<>> free_at;
    for (int i = 0; i < servers; ++i)
        free_at.push(0.0);

    const std::uint64_t skip = arrivals / 10;
    double now = 0.0;
    double wait_sum = 0.0;
    std::uint64_t counted = 0;
    for (std::uint64_t i = 0; i < arrivals; ++i) {
        now += arrival_stream.exponential(arrival_rate);
        const double free = free_at.top();
        free_at.pop();
        const double start = std::max(now, free);
        const double service = deterministic_service
                                   ? 1.0 / service_rate
                                   : service_stream.exponential(service_rate);
        free_at.push(start + service);
        if (i >= skip) {
            wait_sum += start - now;
            ++counted;
        }
    }
    return wait_sum / static_cast<double>(counted);
}

} // namespace oracle
