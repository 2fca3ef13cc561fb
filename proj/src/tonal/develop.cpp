#include "gram/tonal/develop.h"

#include <map>

#include "gram/core/errors.h"

namespace gram::tonal {

namespace {

/// Expands one string by the rules of `level`; non-terminals of deeper
/// levels are untouched (they cannot occur under the strict hierarchy).
SymbolString expand_pass(const Genome& genome, const SymbolString& input, int level,
                         const DevelopOptions& options, std::vector<int>& instance_counters) {
    const auto& rules = genome.levels[static_cast<std::size_t>(level)];
    SymbolString out;
    out.reserve(input.size() * 2);

    // Pending modifiers that apply to the next non-terminal.
    const Symbol* pending_window = nullptr;
    const Symbol* pending_suppress = nullptr;

    for (std::size_t i = 0; i < input.size(); ++i) {
        const Symbol& s = input[i];
        if (s.kind == Symbol::Kind::Window) { pending_window = &input[i]; continue; }
        if (s.kind == Symbol::Kind::Suppress) { pending_suppress = &input[i]; continue; }
        if (s.kind != Symbol::Kind::NonTerminal || s.level != level) {
            // A modifier not followed by a non-terminal is dropped once
            // something else intervenes.
            if (pending_window) { out.push_back(*pending_window); pending_window = nullptr; }
            if (pending_suppress) { out.push_back(*pending_suppress); pending_suppress = nullptr; }
            out.push_back(s);
            continue;
        }
        const Rule& rule = rules[static_cast<std::size_t>(s.ref)];
        SymbolString body = rule.rhs;
        if (pending_window) {
            // 1-based inclusive span over the RHS symbol list.
            const int lo = pending_window->args[0];
            const int hi = pending_window->args[1];
            SymbolString clipped;
            for (int j = lo; j <= hi && j <= static_cast<int>(body.size()); ++j)
                if (j >= 1) clipped.push_back(body[static_cast<std::size_t>(j - 1)]);
            body = std::move(clipped);
            pending_window = nullptr;
        }
        if (options.annotate_units && level >= 1) {
            Symbol begin = Symbol::with_args(Symbol::Kind::UnitBegin,
                                             {level, s.ref, instance_counters[static_cast<std::size_t>(level)]});
            Symbol end = Symbol::with_args(Symbol::Kind::UnitEnd,
                                           {level, s.ref, instance_counters[static_cast<std::size_t>(level)]});
            ++instance_counters[static_cast<std::size_t>(level)];
            body.insert(body.begin(), begin);
            body.push_back(end);
        }
        if (pending_suppress) {
            body.insert(body.begin(),
                        Symbol::with_args(Symbol::Kind::SuppressBegin, pending_suppress->args));
            body.push_back(Symbol::with_args(Symbol::Kind::SuppressEnd, pending_suppress->args));
            pending_suppress = nullptr;
        }
        out.insert(out.end(), body.begin(), body.end());
    }
    if (pending_window) out.push_back(*pending_window);
    if (pending_suppress) out.push_back(*pending_suppress);
    return out;
}

}  // namespace

DevelopTrace develop_trace(const Genome& genome, const DevelopOptions& options) {
    genome.validate();
    DevelopTrace trace;
    SymbolString current{Symbol::nonterminal(0, 0, genome.levels[0][0].name)};
    std::vector<int> instance_counters(static_cast<std::size_t>(genome.level_count()), 0);
    for (int level = 0; level < genome.level_count(); ++level) {
        current = expand_pass(genome, current, level, options, instance_counters);
        trace.passes.push_back(current);
    }
    for (const Symbol& s : current)
        if (s.kind == Symbol::Kind::NonTerminal)
            throw HierarchyViolation("non-terminal survived all development passes");
    trace.final_string = current;
    return trace;
}

SymbolString develop(const Genome& genome, const DevelopOptions& options) {
    return develop_trace(genome, options).final_string;
}

}  // namespace gram::tonal
