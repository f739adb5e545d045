#pragma once

#include "eov/errors.hpp"

namespace eov {

// One station's load: arrivals at `arrival_rate` shared by `servers`
// parallel servers, each serving at `service_rate`. Rates in tx/s.
struct QueueLoad {
    double arrival_rate = 0.0;
    double service_rate = 1.0;
    int servers = 1;

    bool operator==(const QueueLoad&) const = default;
};

// Coefficients of variation of inter-arrival and service times.
// (1, 0) reproduces an M/D/1 station, (1, 1) an M/M/1 station.
struct VariationPair {
    double cv_arrival = 1.0;
    double cv_service = 0.0;

    bool operator==(const VariationPair&) const = default;
};

// rho = arrival_rate / (servers * service_rate)
double utilization(const QueueLoad& load);

// Erlang-C delay probability for an M/M/c station with the given offered
// load a = lambda/mu. Computed through the Erlang-B recurrence, so it stays
// stable for large server counts.
double erlang_c_probability(int servers, double offered_load);

// Mean queue wait of an M/M/c station.
double erlang_c_wait(const QueueLoad& load);

// Correction pieces for the M/D/c approximation below.
double mdc_server_factor(int servers);        // f(c), f(1) == 0
double mdc_load_factor(double utilization);   // g(rho) = (1 - rho) / rho

// Mean queue wait of an M/D/c station, approximated as
// 0.5 * (1 + f(c) g(rho)) * E[Wq M/M/c]. Exact for c == 1.
double mdc_wait(const QueueLoad& load);

// Mean queue wait of a G/G/1 station (Kingman approximation):
// (rho / (1 - rho)) * ((cv_a^2 + cv_s^2) / 2) * (1 / mu).
double kingman_wait(const QueueLoad& load, const VariationPair& var);

} // namespace eov
