#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gram/analysis/features.h"
#include "gram/atonal/genome.h"

namespace gram::analysis {

/// Feature-equalized distance: one unit per feature where the current
/// theme lies farther from the reference than from the centroid.
int distance_binary(const FeatureVector& reference, const FeatureVector& current,
                    const FeatureVector& centroid);

/// Rank-sum distance: per feature, the 1-based index of the current
/// theme's centroid-distance in the ascending list over the population
/// (the current theme joins the population if absent; ties keep the
/// population's order).
int distance_rank(const FeatureVector& current, const FeatureVector& centroid,
                  const std::vector<FeatureVector>& population);

struct MutationDistanceRow {
    int mutations = 0;
    double median = 0.0;
    double mean = 0.0;
    int min = 0;
    int max = 0;
    std::vector<int> distances;
};

struct MutationDistanceReport {
    std::vector<MutationDistanceRow> rows;

    std::string table_text() const;   // delimited table
    std::string series_text() const;  // plot-ready (mutations, distance) pairs
};

/// Develops mutated variants of a base genome and measures how the
/// binary distance to the base grows with the mutation count.
MutationDistanceReport mutation_distance_report(const atonal::Genome& base,
                                                const std::vector<int>& mutation_counts,
                                                int samples_per_count, std::uint64_t seed);

}  // namespace gram::analysis
