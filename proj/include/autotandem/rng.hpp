#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace autotandem {

/// Seedable, portable PRNG (xoshiro256++) with tagged stream derivation.
///
/// Experiments spawn many independent components (samplers, network
/// initializers, batch shuffles, PSO restarts). Each component receives its
/// own stream via derive(); a derived stream is a pure function of the parent
/// seed and the tag, never of how much the parent has been consumed, so
/// results are reproducible bit for bit regardless of call order or
/// threading.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        // splitmix64 expansion of the seed into the xoshiro state
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    /// Raw 64 random bits.
    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Independent child stream identified by (parent seed, tag).
    Rng derive(std::string_view tag) const {
        return Rng(mix(seed_, fnv1a(tag)));
    }

    Rng derive(std::uint64_t salt) const { return Rng(mix(seed_, salt)); }

    Rng derive(std::string_view tag, std::uint64_t salt) const {
        return Rng(mix(mix(seed_, fnv1a(tag)), salt));
    }

    /// Identity of this stream (its seed); distinct tags give distinct ids.
    std::uint64_t stream_id() const { return seed_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        std::uint64_t x = seed;
        std::uint64_t a = splitmix64(x);
        x = a ^ salt;
        return splitmix64(x);
    }

    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

}  // namespace autotandem
