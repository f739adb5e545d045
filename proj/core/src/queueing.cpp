#include "eov/queueing.hpp"

#include <cmath>
#include <stdexcept>

namespace eov {

namespace {

void require_valid(const QueueLoad& load) {
    if (!std::isfinite(load.arrival_rate) || load.arrival_rate < 0.0)
        throw std::invalid_argument("arrival_rate must be finite and >= 0");
    if (!std::isfinite(load.service_rate) || load.service_rate <= 0.0)
        throw std::invalid_argument("service_rate must be finite and > 0");
    if (load.servers < 1)
        throw std::invalid_argument("servers must be >= 1");
}

void require_valid(const VariationPair& var) {
    if (!std::isfinite(var.cv_arrival) || var.cv_arrival < 0.0)
        throw std::invalid_argument("cv_arrival must be finite and >= 0");
    if (!std::isfinite(var.cv_service) || var.cv_service < 0.0)
        throw std::invalid_argument("cv_service must be finite and >= 0");
}

} // namespace

double utilization(const QueueLoad& load) {
    require_valid(load);
    return load.arrival_rate / (load.servers * load.service_rate);
}

double erlang_c_probability(int servers, double offered_load) {
    if (servers < 1)
        throw std::invalid_argument("servers must be >= 1");
    if (!std::isfinite(offered_load) || offered_load < 0.0)
        throw std::invalid_argument("offered_load must be finite and >= 0");

    // Erlang-B recurrence: B(0) = 1, B(j) = a B(j-1) / (j + a B(j-1)).
    double blocking = 1.0;
    for (int j = 1; j <= servers; ++j)
        blocking = offered_load * blocking / (j + offered_load * blocking);

    const double rho = offered_load / servers;
    return blocking / (1.0 - rho * (1.0 - blocking));
}

double erlang_c_wait(const QueueLoad& load) {
    const double rho = utilization(load);
    if (rho >= 1.0)
        throw UnstableQueue(rho);
    if (load.arrival_rate == 0.0)
        return 0.0;

    const double offered = load.arrival_rate / load.service_rate;
    const double delay_probability = erlang_c_probability(load.servers, offered);
    return delay_probability /
           (load.servers * load.service_rate - load.arrival_rate);
}

double mdc_server_factor(int servers) {
    if (servers < 1)
        throw std::invalid_argument("servers must be >= 1");
    return (servers - 1) * (std::sqrt(4.0 + 5.0 * servers) - 2.0) /
           (16.0 * servers);
}

double mdc_load_factor(double utilization) {
    if (!std::isfinite(utilization) || utilization < 0.0)
        throw std::invalid_argument("utilization must be finite and >= 0");
    if (utilization == 0.0)
        throw DegenerateLoad("load factor g(rho) is singular at rho = 0");
    return (1.0 - utilization) / utilization;
}

double mdc_wait(const QueueLoad& load) {
    const double rho = utilization(load);
    if (rho >= 1.0)
        throw UnstableQueue(rho);
    if (rho == 0.0)
        throw DegenerateLoad("mdc_wait is undefined at zero arrival rate; "
                             "the empty-system limit is 0");

    const double correction =
        mdc_server_factor(load.servers) * mdc_load_factor(rho);
    return 0.5 * (1.0 + correction) * erlang_c_wait(load);
}

double kingman_wait(const QueueLoad& load, const VariationPair& var) {
    if (load.servers != 1)
        throw std::invalid_argument("kingman_wait models a single server");
    require_valid(var);

    const double rho = utilization(load);
    if (rho >= 1.0)
        throw UnstableQueue(rho);

    const double variability =
        0.5 * (var.cv_arrival * var.cv_arrival + var.cv_service * var.cv_service);
    return rho / (1.0 - rho) * variability / load.service_rate;
}

} // namespace eov
