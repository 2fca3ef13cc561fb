#include "gram/atonal/rewrite.h"

#include <set>

#include "gram/core/errors.h"

namespace gram::atonal {

DecayFunction linear_decay() {
    return [](double remaining, double weight) { return remaining - weight; };
}

namespace {

bool has_live_structural(const SymbolString& s, const std::vector<double>& remaining) {
    for (const Symbol& sym : s)
        if (sym.kind == Symbol::Kind::Structural &&
            remaining[static_cast<std::size_t>(sym.value)] > 0)
            return true;
    return false;
}

}  // namespace

RewriteTrace rewrite_trace(const Genome& genome, const RewriteOptions& options) {
    genome.validate();
    RewriteTrace trace;
    SymbolString current{Symbol::structural(0)};
    std::vector<double> remaining(genome.rules.size(), genome.initial_iteration);

    int iteration = 0;
    while (has_live_structural(current, remaining)) {
        if (options.stop_after && iteration >= *options.stop_after) break;
        if (iteration >= options.max_iterations)
            throw DevelopmentOverflow("development exceeded " +
                                      std::to_string(options.max_iterations) + " iterations");
        SymbolString next;
        next.reserve(current.size() * 2);
        std::set<std::size_t> fired;
        for (const Symbol& sym : current) {
            if (sym.kind == Symbol::Kind::Structural) {
                const auto k = static_cast<std::size_t>(sym.value);
                if (remaining[k] > 0) {
                    const SymbolString& rhs = genome.rules[k].rhs;
                    next.insert(next.end(), rhs.begin(), rhs.end());
                    fired.insert(k);
                    continue;
                }
            }
            next.push_back(sym);
        }
        bool progressed = next != current;
        for (std::size_t k : fired) {
            const double updated = options.decay(remaining[k], genome.rules[k].iterativity);
            if (updated < remaining[k]) progressed = true;
            remaining[k] = updated;
        }
        current = std::move(next);
        ++iteration;
        trace.strings.push_back(current);
        trace.remaining.push_back(remaining);
        // Stalled development (e.g. zero iterativity on identity rules)
        // can never finish; stop at the fixed point instead of the cap.
        if (!progressed) break;
    }
    trace.final_string = current;
    return trace;
}

SymbolString rewrite(const Genome& genome, const RewriteOptions& options) {
    return rewrite_trace(genome, options).final_string;
}

}  // namespace gram::atonal
