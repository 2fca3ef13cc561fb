#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gram {

/// Seeded random source with self-contained distributions.
///
/// std::uniform_*_distribution output is implementation-defined, so the
/// draws here are written out explicitly; identical seeds give identical
/// streams on every platform, which the run manifests rely on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Uniform real in [0, 1).
    double uniform01();

    /// Uniform real in [lo, hi).
    double uniform_real(double lo, double hi);

    bool chance(double p) { return uniform01() < p; }

    /// Index drawn according to a weight vector (weights need not sum to 1).
    std::size_t weighted_index(const std::vector<double>& weights);

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(items.size()) - 1))];
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Derives an independent stream, e.g. one per evolution candidate.
    Rng fork(std::uint64_t salt);

private:
    std::mt19937_64 engine_;
};

}  // namespace gram
