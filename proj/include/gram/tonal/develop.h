#pragma once

#include <vector>

#include "gram/tonal/genome.h"

namespace gram::tonal {

struct DevelopOptions {
    bool annotate_units = true;  // wrap expansions in unit markers
};

struct DevelopTrace {
    std::vector<SymbolString> passes;  // passes[k] = string after pass k+1
    SymbolString final_string;
};

/// Applies one rewriting pass per rule level until only terminals remain;
/// the window (w) and suppressor (X) operators act here, on the rewrite of
/// the non-terminal that follows them.
SymbolString develop(const Genome& genome, const DevelopOptions& options = {});

DevelopTrace develop_trace(const Genome& genome, const DevelopOptions& options = {});

}  // namespace gram::tonal
