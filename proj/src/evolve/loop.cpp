#include <algorithm>
#include <thread>

#include "json.hpp"

#include "gram/atonal/rewrite.h"
#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/evolve/evolve.h"
#include "gram/interpret/clean.h"
#include "gram/interpret/interpret.h"
#include "gram/interpret/stabilize.h"
#include "gram/tonal/develop.h"

namespace gram::evolve {

void GenePool::insert(PoolMember member) {
    if (members.size() >= capacity) {
        auto victim = members.begin();
        for (auto it = members.begin(); it != members.end(); ++it)
            if (it->pass_count < victim->pass_count ||
                (it->pass_count == victim->pass_count && it->born_at < victim->born_at))
                victim = it;
        members.erase(victim);
    }
    members.push_back(std::move(member));
}

namespace {

struct CandidateOutcome {
    Composition composition;
    fitness::Report report;
    bool ok = false;
};

CandidateOutcome evaluate_tonal_candidate(const tonal::Genome& genome,
                                          const style::StyleSpec& style) {
    CandidateOutcome out;
    try {
        const auto seq = interpret::clean_string(tonal::develop(genome));
        interpret::Options lenient{interpret::Mode::Lenient};
        auto result = interpret::interpret_tonal(seq, genome, style.harmony_tables(), lenient);
        result.composition.beats_per_measure =
            style.rhythmic_modes.empty() ? 4 : style.rhythmic_modes.front().beats_per_measure;
        out.composition =
            interpret::stabilize(result.composition, {genome.globals.base_duration});
        out.report = fitness::evaluate(genome, out.composition, style);
        out.ok = true;
    } catch (const Error&) {
        out.ok = false;
    }
    return out;
}

bool genome_level_pass(const tonal::Genome& genome, const style::StyleSpec& style) {
    for (const auto& v : fitness::check_structure(genome, style))
        if (!v.pass) return false;
    return true;
}

std::string manifest_json(std::uint64_t seed, const LoopOptions& options,
                          const std::string& source_name, const std::string& source_hash,
                          const LoopResult& result) {
    nlohmann::ordered_json doc;
    doc["seed"] = seed;
    doc["budget"] = options.budget;
    doc["poolCapacity"] = options.pool_capacity;
    doc["crossoverProbability"] = options.crossover_probability;
    doc["source"] = source_name;
    doc["sourceHash"] = source_hash;
    doc["evaluations"] = result.evaluations;
    nlohmann::ordered_json accepts = nlohmann::ordered_json::array();
    for (const auto& a : result.accepted) {
        nlohmann::ordered_json entry;
        entry["evaluation"] = a.evaluation_index;
        entry["name"] = a.composition.meta.name;
        accepts.push_back(entry);
    }
    doc["accepted"] = accepts;
    return doc.dump(2) + "\n";
}

/// Accepted candidates re-enter the pool mutated (and possibly crossed)
/// until they pass the genome-level filters again; discarded ones are
/// replaced by fresh random genomes.
void process_tonal_outcome(std::uint64_t eval, CandidateOutcome&& outcome, GenePool& pool,
                           const style::StyleSpec& style, Rng& rng,
                           const MutationConfig& mutation_config, const LoopOptions& options,
                           LoopResult& result, bool& done) {
    PoolMember& member = pool.members[eval % pool.members.size()];
    ++result.evaluations;
    if (outcome.ok && outcome.report.accepted) {
        ++member.pass_count;
        AcceptedComposition accepted;
        accepted.composition = std::move(outcome.composition);
        accepted.composition.meta.name = "theme" + std::to_string(eval);
        accepted.composition.meta.style_name = style.name;
        accepted.report = std::move(outcome.report);
        accepted.evaluation_index = eval;
        accepted.genome_text = tonal::serialize_evg(member.tonal);
        result.accepted.push_back(std::move(accepted));
        tonal::Genome successor = member.tonal;
        for (int attempt = 0; attempt < 8; ++attempt) {
            tonal::Genome candidate = mutate_tonal(successor, rng, mutation_config);
            if (rng.chance(options.crossover_probability)) {
                const auto& partner = pool.members[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(pool.members.size()) - 1))];
                candidate = crossover_tonal(candidate, partner.tonal, rng);
            }
            if (genome_level_pass(candidate, style)) {
                successor = std::move(candidate);
                break;
            }
        }
        member.tonal = std::move(successor);
        member.born_at = eval + 1;
        if (options.max_accepts && result.accepted.size() >= options.max_accepts) done = true;
    } else {
        member.tonal = style::build_random_genome(style, rng.next_u64());
        member.born_at = eval + 1;
        member.pass_count = 0;
    }
}

}  // namespace

LoopResult run_generation_loop(const style::StyleSpec& style, std::uint64_t seed,
                               const LoopOptions& options) {
    style.validate();
    Rng rng(seed);
    GenePool pool;
    pool.capacity = options.pool_capacity;
    const std::size_t pool_size = std::min<std::size_t>(options.pool_capacity, 8);
    for (std::size_t i = 0; i < pool_size; ++i) {
        PoolMember member;
        member.tonal = style::build_random_genome(style, rng.next_u64());
        member.born_at = 0;
        pool.insert(std::move(member));
    }

    LoopResult result;
    MutationConfig mutation_config;
    const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
    bool done = false;
    std::uint64_t eval = 0;
    while (eval < options.budget && !done) {
        // Evaluate a batch of distinct pool slots in parallel; outcomes are
        // processed afterwards in slot order, so any worker count produces
        // the sequential walk's byte-identical result.
        const std::size_t batch = std::min<std::size_t>(
            {workers, pool.members.size(), static_cast<std::size_t>(options.budget - eval)});
        std::vector<CandidateOutcome> outcomes(batch);
        if (batch == 1) {
            outcomes[0] =
                evaluate_tonal_candidate(pool.members[eval % pool.members.size()].tonal, style);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(batch);
            for (std::size_t i = 0; i < batch; ++i)
                threads.emplace_back([&outcomes, &pool, &style, eval, i] {
                    outcomes[i] = evaluate_tonal_candidate(
                        pool.members[(eval + i) % pool.members.size()].tonal, style);
                });
            for (auto& t : threads) t.join();
        }
        for (std::size_t i = 0; i < batch && !done; ++i, ++eval)
            process_tonal_outcome(eval, std::move(outcomes[i]), pool, style, rng,
                                  mutation_config, options, result, done);
    }
    result.manifest_json =
        manifest_json(seed, options, style.name, style::style_hash(style), result);
    return result;
}

LoopResult run_random_search(const style::StyleSpec& style, std::uint64_t seed,
                             const LoopOptions& options) {
    style.validate();
    Rng rng(seed);
    LoopResult result;
    for (std::uint64_t eval = 0; eval < options.budget; ++eval) {
        const tonal::Genome genome = style::build_random_genome(style, rng.next_u64());
        auto outcome = evaluate_tonal_candidate(genome, style);
        ++result.evaluations;
        if (outcome.ok && outcome.report.accepted) {
            AcceptedComposition accepted;
            accepted.composition = std::move(outcome.composition);
            accepted.composition.meta.name = "theme" + std::to_string(eval);
            accepted.composition.meta.style_name = style.name;
            accepted.report = std::move(outcome.report);
            accepted.evaluation_index = eval;
            accepted.genome_text = tonal::serialize_evg(genome);
            result.accepted.push_back(std::move(accepted));
            if (options.max_accepts && result.accepted.size() >= options.max_accepts) break;
        }
    }
    result.manifest_json =
        manifest_json(seed, options, style.name + "/random-search", style::style_hash(style),
                      result);
    return result;
}

namespace {

atonal::Genome random_atonal_genome(const atonal::Genome& seed_genome, Rng& rng) {
    // Fresh random genome in the neighborhood the seed genome outlines:
    // same globals, random rule bodies over the safe alphabet.
    atonal::Genome out = seed_genome;
    MutationConfig config;
    const int edits = static_cast<int>(rng.uniform_int(2, 6));
    for (int i = 0; i < edits; ++i) out = mutate_atonal(out, rng, config);
    return out;
}

CandidateOutcome evaluate_atonal_candidate(const atonal::Genome& genome,
                                           const AtonalSource& source) {
    CandidateOutcome out;
    try {
        const auto seq = interpret::clean_string(atonal::rewrite(genome));
        interpret::Options lenient{interpret::Mode::Lenient};
        auto result = interpret::interpret_atonal(seq, genome, source.defaults, lenient);
        out.composition = interpret::stabilize(
            result.composition,
            {Rational(static_cast<std::int64_t>(genome.base_duration * 1000 + 0.5), 1000)});
        out.report = fitness::evaluate_atonal(genome, out.composition, source.fitness);
        out.ok = true;
    } catch (const Error&) {
        out.ok = false;
    }
    return out;
}

}  // namespace

LoopResult run_generation_loop_atonal(const AtonalSource& source, std::uint64_t seed,
                                      const LoopOptions& options) {
    Rng rng(seed);
    GenePool pool;
    pool.capacity = options.pool_capacity;
    const std::size_t pool_size = std::min<std::size_t>(options.pool_capacity, 8);
    for (std::size_t i = 0; i < pool_size; ++i) {
        PoolMember member;
        member.atonal = random_atonal_genome(source.seed_genome, rng);
        member.is_tonal = false;
        pool.insert(std::move(member));
    }
    LoopResult result;
    MutationConfig mutation_config;
    for (std::uint64_t eval = 0; eval < options.budget; ++eval) {
        const std::size_t slot = eval % pool.members.size();
        PoolMember& member = pool.members[slot];
        auto outcome = evaluate_atonal_candidate(member.atonal, source);
        ++result.evaluations;
        if (outcome.ok && outcome.report.accepted) {
            ++member.pass_count;
            AcceptedComposition accepted;
            accepted.composition = std::move(outcome.composition);
            accepted.composition.meta.name = "theme" + std::to_string(eval);
            accepted.report = std::move(outcome.report);
            accepted.evaluation_index = eval;
            accepted.genome_text = atonal::serialize_gen(member.atonal);
            result.accepted.push_back(std::move(accepted));
            atonal::Genome successor = mutate_atonal(member.atonal, rng, mutation_config);
            if (rng.chance(options.crossover_probability)) {
                const auto& partner = pool.members[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(pool.members.size()) - 1))];
                successor = crossover_atonal(successor, partner.atonal, rng);
            }
            member.atonal = std::move(successor);
            member.born_at = eval + 1;
            if (options.max_accepts && result.accepted.size() >= options.max_accepts) break;
        } else {
            member.atonal = random_atonal_genome(source.seed_genome, rng);
            member.born_at = eval + 1;
            member.pass_count = 0;
        }
    }
    result.manifest_json = manifest_json(seed, options, "atonal", "-", result);
    return result;
}

}  // namespace gram::evolve
