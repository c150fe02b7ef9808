#pragma once

// Reproducible randomness: a SplitMix64 generator and labelled seed paths.
//
// Generator. State is a single 64-bit counter. Each draw adds the golden
// gamma 0x9E3779B97F4A7C15 to the state and returns mix64(state), where
//
//   mix64(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//             return z ^ (z >> 31)
//
// A uniform double in [0,1) is (draw >> 11) * 2^-53.
//
// Seed derivation. For a master seed M and labels (tag_1, index_1), ...,
// (tag_k, index_k):
//
//   h = mix64(M ^ 0x6A09E667F3BCC909)
//   for each label:  h = mix64(h + 0x9E3779B97F4A7C15 * (tag_code + 1))
//                    h = mix64(h ^ index)
//   derived seed = h
//
// with tag codes pointset=1, dim=2, log2n=3, trial=4, replicate=5, purpose=6.
// All arithmetic is modulo 2^64.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rqmc {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64. Satisfies std::uniform_random_bit_generator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += golden_gamma;
        return mix64(state_);
    }

    /// Uniform on [0,1) with 53 random bits.
    constexpr double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

enum class SeedTag : std::uint8_t {
    pointset = 1,
    dim = 2,
    log2n = 3,
    trial = 4,
    replicate = 5,
    purpose = 6,
};

/// Master seed plus an ordered list of (tag, index) labels.
struct SeedPath {
    std::uint64_t master_seed = 0;
    std::vector<std::pair<SeedTag, std::uint64_t>> labels;

    SeedPath() = default;
    SeedPath(std::uint64_t master, std::initializer_list<std::pair<SeedTag, std::uint64_t>> init)
        : master_seed(master), labels(init) {}

    /// Copy of this path with one more label appended.
    SeedPath with(SeedTag tag, std::uint64_t index) const {
        SeedPath out = *this;
        out.labels.emplace_back(tag, index);
        return out;
    }

    bool operator==(const SeedPath&) const = default;
};

inline std::uint64_t derive_seed(const SeedPath& path) {
    if (path.labels.empty()) {
        throw std::invalid_argument("derive_seed: seed path needs at least one label");
    }
    std::uint64_t h = mix64(path.master_seed ^ 0x6A09E667F3BCC909ULL);
    for (const auto& [tag, index] : path.labels) {
        h = mix64(h + SplitMix64::golden_gamma * (static_cast<std::uint64_t>(tag) + 1));
        h = mix64(h ^ index);
    }
    return h;
}

inline SplitMix64 make_rng(const SeedPath& path) { return SplitMix64(derive_seed(path)); }

}  // namespace rqmc
