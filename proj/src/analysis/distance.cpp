#include "gram/analysis/distance.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gram/atonal/rewrite.h"
#include "gram/core/errors.h"
#include "gram/core/rng.h"
#include "gram/evolve/evolve.h"
#include "gram/interpret/interpret.h"
#include "gram/interpret/stabilize.h"

namespace gram::analysis {

int distance_binary(const FeatureVector& reference, const FeatureVector& current,
                    const FeatureVector& centroid) {
    int d = 0;
    for (std::size_t i = 0; i < FeatureVector::size(); ++i)
        if (std::abs(reference[i] - current[i]) > std::abs(centroid[i] - current[i])) ++d;
    return d;
}

int distance_rank(const FeatureVector& current, const FeatureVector& centroid,
                  const std::vector<FeatureVector>& population) {
    std::vector<FeatureVector> all = population;
    std::size_t self = all.size();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] == current) { self = i; break; }
    if (self == all.size()) all.push_back(current);

    int total = 0;
    for (std::size_t f = 0; f < FeatureVector::size(); ++f) {
        std::vector<std::size_t> order(all.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(centroid[f] - all[a][f]) < std::abs(centroid[f] - all[b][f]);
        });
        for (std::size_t rank = 0; rank < order.size(); ++rank)
            if (order[rank] == self) {
                total += static_cast<int>(rank) + 1;
                break;
            }
    }
    return total;
}

namespace {

Composition develop_atonal(const atonal::Genome& genome) {
    const auto seq = atonal::rewrite(genome);
    interpret::Options lenient{interpret::Mode::Lenient};
    auto result = interpret::interpret_atonal(seq, genome, {}, lenient);
    return interpret::stabilize(
        result.composition,
        {Rational(static_cast<std::int64_t>(genome.base_duration * 1000 + 0.5), 1000)});
}

double median_of(std::vector<int> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

MutationDistanceReport mutation_distance_report(const atonal::Genome& base,
                                                const std::vector<int>& mutation_counts,
                                                int samples_per_count, std::uint64_t seed) {
    const FeatureVector base_features = extract_features(develop_atonal(base));
    Rng rng(seed);
    evolve::MutationConfig config;

    struct Sample {
        int mutations;
        FeatureVector features;
    };
    std::vector<Sample> bundle;
    for (int m : mutation_counts) {
        for (int s = 0; s < samples_per_count; ++s) {
            atonal::Genome variant = base;
            for (int i = 0; i < m; ++i) variant = evolve::mutate_atonal(variant, rng, config);
            bundle.push_back({m, extract_features(develop_atonal(variant))});
        }
    }
    std::vector<FeatureVector> all{base_features};
    for (const auto& s : bundle) all.push_back(s.features);
    const FeatureVector center = centroid(all);

    MutationDistanceReport report;
    for (int m : mutation_counts) {
        MutationDistanceRow row;
        row.mutations = m;
        for (const auto& s : bundle)
            if (s.mutations == m)
                row.distances.push_back(distance_binary(base_features, s.features, center));
        row.median = median_of(row.distances);
        double sum = 0;
        row.min = row.distances.empty() ? 0 : row.distances.front();
        row.max = 0;
        for (int d : row.distances) {
            sum += d;
            row.min = std::min(row.min, d);
            row.max = std::max(row.max, d);
        }
        row.mean = row.distances.empty() ? 0.0 : sum / row.distances.size();
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string MutationDistanceReport::table_text() const {
    std::ostringstream out;
    out << "mutations\tsamples\tmedian\tmean\tmin\tmax\n";
    for (const auto& row : rows)
        out << row.mutations << '\t' << row.distances.size() << '\t' << row.median << '\t'
            << row.mean << '\t' << row.min << '\t' << row.max << '\n';
    return out.str();
}

std::string MutationDistanceReport::series_text() const {
    std::ostringstream out;
    for (const auto& row : rows)
        for (int d : row.distances) out << row.mutations << '\t' << d << '\n';
    return out.str();
}

}  // namespace gram::analysis
