#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gram/atonal/genome.h"
#include "gram/core/composition.h"
#include "gram/core/rng.h"
#include "gram/fitness/fitness.h"
#include "gram/style/builder.h"
#include "gram/style/style.h"
#include "gram/tonal/genome.h"

namespace gram::evolve {

/// Relative weights of the five atonal mutation kinds: global parameter,
/// instrument, RHS symbol edit, rule removal, rule addition. The last two
/// are the most disruptive and default to low weight.
struct MutationConfig {
    std::vector<double> kind_weights = {0.3, 0.3, 0.3, 0.05, 0.05};
    int max_retries = 16;
};

atonal::Genome mutate_atonal(const atonal::Genome& genome, Rng& rng,
                             const MutationConfig& config = {});
atonal::Genome crossover_atonal(const atonal::Genome& a, const atonal::Genome& b, Rng& rng);

tonal::Genome mutate_tonal(const tonal::Genome& genome, Rng& rng,
                           const MutationConfig& config = {});
tonal::Genome crossover_tonal(const tonal::Genome& a, const tonal::Genome& b, Rng& rng);

/// Candidate source for the generation loop: a tonal style, or handmade
/// atonal parameters.
struct AtonalSource {
    atonal::Genome seed_genome;     // randomized variants seed the pool
    fitness::AtonalParams fitness;
    interpret::AtonalDefaults defaults;
};

struct PoolMember {
    tonal::Genome tonal;
    atonal::Genome atonal;
    bool is_tonal = true;
    std::uint64_t born_at = 0;  // evaluation index of creation
    int pass_count = 0;
};

struct GenePool {
    std::vector<PoolMember> members;
    std::size_t capacity = 64;

    void insert(PoolMember member);  // evicts oldest-lowest-pass-count first
};

struct AcceptedComposition {
    Composition composition;
    fitness::Report report;
    std::uint64_t evaluation_index = 0;
    std::string genome_text;
};

struct LoopOptions {
    std::uint64_t budget = 1000;     // max candidate evaluations
    std::size_t pool_capacity = 64;
    double crossover_probability = 0.25;
    std::size_t max_accepts = 0;     // 0 = unlimited
    int workers = 1;
};

struct LoopResult {
    std::vector<AcceptedComposition> accepted;
    std::uint64_t evaluations = 0;
    std::string manifest_json;
};

/// The generate–develop–filter cycle: seed the pool randomly, develop and
/// evaluate candidates; rejected genomes are replaced by fresh random
/// ones, accepted genomes return to the pool after mutation and possible
/// crossover until they re-pass the genome-level filters.
LoopResult run_generation_loop(const style::StyleSpec& style, std::uint64_t seed,
                               const LoopOptions& options = {});

LoopResult run_generation_loop_atonal(const AtonalSource& source, std::uint64_t seed,
                                      const LoopOptions& options = {});

/// Pure random-search baseline (fresh random genome every evaluation),
/// used by the convergence comparison.
LoopResult run_random_search(const style::StyleSpec& style, std::uint64_t seed,
                             const LoopOptions& options = {});

}  // namespace gram::evolve
