#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace eov {

// splitmix64; used to turn (master seed, stream name, index) into
// well-separated engine seeds so that adding one stream never perturbs
// the draws of any other.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master,
                                        std::string_view name,
                                        std::uint64_t index = 0) {
    std::uint64_t h = master;
    for (char c : name)
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return splitmix64(h ^ index);
}

// One independent random stream. Samples are produced from the raw 64-bit
// engine output, so replay is bit-identical across standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    RngStream(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
        : engine_(derive_stream_seed(master, name, index)) {}

    // uniform in [0, 1) with 53-bit resolution
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    // mean 1 exponential
    double exp_unit() { return -std::log1p(-uniform()); }

    double exponential(double rate) { return exp_unit() / rate; }

private:
    std::mt19937_64 engine_;
};

} // namespace eov
