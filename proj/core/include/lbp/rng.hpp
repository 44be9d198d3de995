#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lbp {

// SplitMix64. Used to expand user seeds into generator state and to derive
// independent per-run seeds (the documented splitting rule: run i of a batch
// gets the (i+1)-th output of a SplitMix64 stream started at the base seed).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    uint64_t state_;
};

// Mixes extra words into a seed so that distinct purposes (sweep points,
// estimation batches, ...) get well-separated streams.
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0) {
    SplitMix64 sm(a);
    uint64_t h = sm.next() ^ b;
    SplitMix64 sm2(h);
    h = sm2.next() ^ c;
    SplitMix64 sm3(h);
    return sm3.next();
}

// xoshiro256++ (Blackman & Vigna). Fixed generator for every stochastic
// component; reproducibility is guaranteed within this implementation.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& s : state_) s = sm.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1); never returns 0 or 1, so
    // -log(u) is always finite and positive.
    double uniform_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    const std::array<uint64_t, 4>& state() const { return state_; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<uint64_t, 4> state_{};
};

}  // namespace lbp
