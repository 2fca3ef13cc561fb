#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gram/atonal/genome.h"

namespace gram::atonal {

/// Monotonically decreasing update of a rule's remaining iterativity.
/// Must satisfy decay(r, w) < r for w > 0.
using DecayFunction = std::function<double(double remaining, double weight)>;

/// The worked-example decay r - I.
DecayFunction linear_decay();

struct RewriteOptions {
    DecayFunction decay = linear_decay();
    int max_iterations = 64;             // guard; overrun raises DevelopmentOverflow
    std::optional<int> stop_after;       // develop only this many iterations
};

/// Snapshot of the development after each iteration.
struct RewriteTrace {
    std::vector<SymbolString> strings;          // strings[i] = after iteration i+1
    std::vector<std::vector<double>> remaining;  // r vector after iteration i+1
    SymbolString final_string;
};

/// Parallel rewriting: every structural symbol whose rule still has
/// r_i > 0 is replaced by its RHS each iteration; a rule's r_i decays only
/// in iterations where the rule fired. Stops when no live structural
/// symbol remains or when neither the string nor the r vector changes.
SymbolString rewrite(const Genome& genome, const RewriteOptions& options = {});

RewriteTrace rewrite_trace(const Genome& genome, const RewriteOptions& options = {});

}  // namespace gram::atonal
