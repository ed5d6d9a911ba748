#pragma once

#include <cstdint>
#include <random>

namespace kac {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One reproducible substream per (master seed, stream id). Replicas get
// stream ids equal to their replica index, so runs are identical no matter
// how replicas are scheduled across threads.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed, std::uint64_t stream_id = 0) {
        std::uint64_t s = master_seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x1f83d9abfb41bd6bULL);
        std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
        gen_.seed(seq);
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
    }

    // Exponential waiting time with the given rate.
    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(gen_);
    }

    double normal(double stddev) {
        return std::normal_distribution<double>(0.0, stddev)(gen_);
    }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace kac
