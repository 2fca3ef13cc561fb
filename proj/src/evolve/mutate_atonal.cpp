#include <algorithm>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/evolve/evolve.h"

namespace gram::evolve {

namespace {

using atonal::Genome;
using atonal::Rule;
using atonal::Symbol;
using atonal::SymbolString;

bool is_rest_rule(const Rule& rule) { return rule.instrument_id == kRestInstrument; }

/// Symbols safe to insert anywhere: they cannot unbalance a stack or
/// strand a property argument.
Symbol random_safe_symbol(Rng& rng, std::size_t rule_count) {
    switch (rng.uniform_int(0, 4)) {
        case 0: return Symbol::op(static_cast<int>(rng.uniform_int(1, 4)));  // pitch/duration
        case 1: return Symbol::op(static_cast<int>(rng.uniform_int(92, 99)));  // dynamics
        case 2: {
            static const int kArticulations[] = {9, 12, 15, 18, 21};
            return Symbol::op(kArticulations[rng.uniform_int(0, 4)]);
        }
        case 3: return Symbol::structural(static_cast<int>(
            rng.uniform_int(0, static_cast<std::int64_t>(rule_count) - 1)));
        default: return Symbol::op(static_cast<int>(rng.uniform_int(1, 2)));
    }
}

bool is_protected_symbol(const Symbol& s) {
    if (s.kind == Symbol::Kind::Argument) return true;
    if (s.kind != Symbol::Kind::Operator) return false;
    switch (s.value) {
        case atonal::kOpPushPitch:
        case atonal::kOpPopPitch:
        case atonal::kOpPushTime:
        case atonal::kOpPopTime:
        case atonal::kOpPushGlobal:
        case atonal::kOpPopGlobal:
            return true;
        default:
            return atonal::is_parametric_operator(s.value);
    }
}

std::vector<std::size_t> mutable_rules(const Genome& genome) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < genome.rules.size(); ++k)
        if (!is_rest_rule(genome.rules[k])) out.push_back(k);
    return out;
}

bool mutate_once(Genome& genome, Rng& rng, const MutationConfig& config) {
    const auto kind = rng.weighted_index(config.kind_weights);
    switch (kind) {
        case 0: {  // global parameter
            switch (rng.uniform_int(0, 2)) {
                case 0:
                    genome.initial_iteration =
                        std::clamp(genome.initial_iteration + rng.uniform_int(-1, 1), 1.0, 6.0);
                    break;
                case 1:
                    genome.base_duration =
                        std::clamp(genome.base_duration * (rng.chance(0.5) ? 2.0 : 0.5), 0.125, 8.0);
                    break;
                default:
                    genome.duration_step =
                        std::clamp(genome.duration_step * (rng.chance(0.5) ? 2.0 : 0.5), 0.125, 4.0);
                    break;
            }
            return true;
        }
        case 1: {  // instrument change
            const auto rules = mutable_rules(genome);
            if (rules.empty()) return false;
            Rule& rule = genome.rules[rng.pick(rules)];
            const auto& table = instrument_table();
            rule.instrument_id = static_cast<int>(
                rng.uniform_int(0, static_cast<std::int64_t>(table.size()) - 1));
            return true;
        }
        case 2: {  // RHS symbol add / remove / change
            const auto rules = mutable_rules(genome);
            if (rules.empty()) return false;
            Rule& rule = genome.rules[rng.pick(rules)];
            const int action = static_cast<int>(rng.uniform_int(0, 2));
            if (action == 0 || rule.rhs.empty()) {
                const auto at = static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(rule.rhs.size())));
                rule.rhs.insert(rule.rhs.begin() + static_cast<std::ptrdiff_t>(at),
                                random_safe_symbol(rng, genome.rules.size()));
                return true;
            }
            std::vector<std::size_t> editable;
            for (std::size_t i = 0; i < rule.rhs.size(); ++i)
                if (!is_protected_symbol(rule.rhs[i])) editable.push_back(i);
            if (editable.empty()) return false;
            const std::size_t at = rng.pick(editable);
            if (action == 1 && rule.rhs.size() > 1) {
                rule.rhs.erase(rule.rhs.begin() + static_cast<std::ptrdiff_t>(at));
            } else {
                rule.rhs[at] = random_safe_symbol(rng, genome.rules.size());
            }
            return true;
        }
        case 3: {  // rule removal
            if (genome.rules.size() <= 2) return false;
            std::vector<std::size_t> removable;
            for (std::size_t k = 1; k < genome.rules.size(); ++k)  // keep the axiom rule
                if (!is_rest_rule(genome.rules[k])) removable.push_back(k);
            if (removable.empty()) return false;
            const std::size_t removed = rng.pick(removable);
            genome.rules.erase(genome.rules.begin() + static_cast<std::ptrdiff_t>(removed));
            for (Rule& rule : genome.rules) {
                SymbolString rewritten;
                for (const Symbol& s : rule.rhs) {
                    if (s.kind == Symbol::Kind::Structural) {
                        if (static_cast<std::size_t>(s.value) == removed) continue;  // drop
                        if (static_cast<std::size_t>(s.value) > removed) {
                            rewritten.push_back(Symbol::structural(s.value - 1));
                            continue;
                        }
                    }
                    rewritten.push_back(s);
                }
                rule.rhs = std::move(rewritten);
            }
            return true;
        }
        default: {  // rule addition + insertion of its symbol
            if (genome.rules.size() >= 24) return false;
            Rule fresh;
            if (rng.chance(0.5) && !genome.rules.empty()) {
                fresh = genome.rules[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(genome.rules.size()) - 1))];
            } else {
                fresh.instrument_id = static_cast<int>(rng.uniform_int(
                    0, static_cast<std::int64_t>(instrument_table().size()) - 1));
                fresh.tessitura_lo = 36;
                fresh.tessitura_hi = 84;
                const int len = static_cast<int>(rng.uniform_int(1, 5));
                for (int i = 0; i < len; ++i)
                    fresh.rhs.push_back(random_safe_symbol(rng, genome.rules.size() + 1));
            }
            genome.rules.push_back(std::move(fresh));
            const int fresh_index = static_cast<int>(genome.rules.size()) - 1;
            const auto hosts = mutable_rules(genome);
            Rule& host = genome.rules[rng.pick(hosts)];
            const auto at = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(host.rhs.size())));
            host.rhs.insert(host.rhs.begin() + static_cast<std::ptrdiff_t>(at),
                            Symbol::structural(fresh_index));
            return true;
        }
    }
}

}  // namespace

atonal::Genome mutate_atonal(const atonal::Genome& genome, Rng& rng,
                             const MutationConfig& config) {
    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        Genome candidate = genome;
        if (!mutate_once(candidate, rng, config)) continue;
        try {
            candidate.validate();
            return candidate;
        } catch (const Error&) {
            // degenerate draw; re-roll
        }
    }
    return genome;
}

atonal::Genome crossover_atonal(const atonal::Genome& a, const atonal::Genome& b, Rng& rng) {
    // Globals field-by-field from either parent; rules from one donor with
    // RHS material spliceable from the other.
    const Genome& donor = rng.chance(0.5) ? a : b;
    const Genome& other = (&donor == &a) ? b : a;
    Genome child;
    child.initial_iteration = rng.chance(0.5) ? a.initial_iteration : b.initial_iteration;
    child.base_duration = rng.chance(0.5) ? a.base_duration : b.base_duration;
    child.duration_step = rng.chance(0.5) ? a.duration_step : b.duration_step;
    child.rules = donor.rules;

    for (std::size_t k = 0; k < child.rules.size(); ++k) {
        Rule& rule = child.rules[k];
        if (is_rest_rule(rule)) continue;
        if (rng.chance(0.5) && k < other.rules.size()) {
            rule.instrument_id = other.rules[k].instrument_id;
        }
        if (!rng.chance(0.35) || other.rules.empty()) continue;
        // Position-aligned one-segment splice: the segment [lo, hi) of the
        // donor's RHS is replaced by the other parent's same span. A
        // self-cross therefore reproduces the parent.
        const Rule& source = other.rules[std::min(k, other.rules.size() - 1)];
        if (source.rhs.empty() || rule.rhs.empty()) continue;
        const auto span = std::min(rule.rhs.size(), source.rhs.size());
        const auto lo = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(span) - 1));
        const auto hi = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(lo) + 1, static_cast<std::int64_t>(span)));
        SymbolString segment;
        for (std::size_t i = lo; i < hi; ++i) {
            const Symbol& s = source.rhs[i];
            if (s.kind == Symbol::Kind::Structural &&
                static_cast<std::size_t>(s.value) >= child.rules.size())
                continue;
            segment.push_back(s);
        }
        SymbolString spliced(rule.rhs.begin(), rule.rhs.begin() + static_cast<std::ptrdiff_t>(lo));
        spliced.insert(spliced.end(), segment.begin(), segment.end());
        spliced.insert(spliced.end(), rule.rhs.begin() + static_cast<std::ptrdiff_t>(hi),
                       rule.rhs.end());
        rule.rhs = std::move(spliced);
    }
    child.validate();
    return child;
}

}  // namespace gram::evolve
