#pragma once

#include "gram/atonal/genome.h"
#include "gram/tonal/genome.h"

namespace gram::interpret {

/// Semantics-preserving cleanup: dominated runs of absolute dynamics keep
/// only the last operator, and adjacent inverse push/pop pairs with
/// nothing between them are dropped. Idempotent.
atonal::SymbolString clean_string(const atonal::SymbolString& seq);
tonal::SymbolString clean_string(const tonal::SymbolString& seq);

}  // namespace gram::interpret
