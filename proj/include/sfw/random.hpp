#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sfw {

/// Purpose tags for independent random substreams.
///
/// Every consumer of randomness derives its own engine from the user seed and
/// one of these tags, so adding draws to one purpose never shifts another.
enum class Stream : std::uint64_t {
    Factors = 1,
    Coefficients = 2,
    Noise = 3,
    AlsInit = 4,
    PowerIteration = 5,
    Mask = 6,
    Testing = 7,
};

/// SplitMix64 finalizer, used to derive substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seedable, portable generator.
///
/// The engine is `std::mt19937_64`, whose output sequence is fixed by the
/// standard. Uniforms take the top 53 bits; normals use the Marsaglia polar
/// method on those uniforms. Neither relies on the unspecified
/// `std::*_distribution` algorithms, so streams agree across standard
/// libraries. The substream seed is
/// `splitmix64(splitmix64(seed) ^ splitmix64(stream_tag) ^ index)`, so a
/// purpose may further split itself by `index` (restart number, iteration).
class Rng {
public:
    Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(stream)) ^ index)) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    std::vector<double> normal_vector(std::size_t n) {
        std::vector<double> out(n);
        for (auto &x : out)
            x = normal();
        return out;
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace sfw
