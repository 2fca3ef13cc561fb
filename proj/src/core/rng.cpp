#include "gram/core/rng.h"

#include <stdexcept>

namespace gram {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform_int: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit span
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return lo + static_cast<std::int64_t>(v % span);
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::size_t Rng::weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w > 0 ? w : 0.0;
    if (total <= 0.0) throw std::invalid_argument("Rng::weighted_index: no positive weight");
    double x = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i] > 0 ? weights[i] : 0.0;
        if (x < w) return i;
        x -= w;
    }
    return weights.size() - 1;
}

Rng Rng::fork(std::uint64_t salt) {
    // splitmix-style scramble of (next draw, salt)
    std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
}

}  // namespace gram
