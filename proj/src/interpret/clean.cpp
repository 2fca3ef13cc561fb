#include "gram/interpret/clean.h"

namespace gram::interpret {

namespace {

template <typename Sym, typename IsAbsDyn, typename IsInversePair>
std::vector<Sym> clean_impl(std::vector<Sym> seq, IsAbsDyn is_abs_dyn, IsInversePair is_inverse) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Sym> out;
        out.reserve(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (is_abs_dyn(seq[i]) && i + 1 < seq.size() && is_abs_dyn(seq[i + 1])) {
                changed = true;  // dominated by the later dynamic
                continue;
            }
            if (!out.empty() && is_inverse(out.back(), seq[i])) {
                out.pop_back();
                changed = true;
                continue;
            }
            out.push_back(seq[i]);
        }
        seq = std::move(out);
    }
    return seq;
}

}  // namespace

atonal::SymbolString clean_string(const atonal::SymbolString& seq) {
    using S = atonal::Symbol;
    const auto is_abs_dyn = [](const S& s) {
        return s.kind == S::Kind::Operator && s.value >= 92 && s.value <= 99;
    };
    const auto is_inverse = [](const S& a, const S& b) {
        if (a.kind != S::Kind::Operator || b.kind != S::Kind::Operator) return false;
        return (a.value == atonal::kOpPushPitch && b.value == atonal::kOpPopPitch) ||
               (a.value == atonal::kOpPushTime && b.value == atonal::kOpPopTime) ||
               (a.value == atonal::kOpPushGlobal && b.value == atonal::kOpPopGlobal);
    };
    return clean_impl(seq, is_abs_dyn, is_inverse);
}

tonal::SymbolString clean_string(const tonal::SymbolString& seq) {
    using S = tonal::Symbol;
    const auto is_abs_dyn = [](const S& s) {
        return s.kind == S::Kind::Dynamic && s.args.size() == 2 && s.args[1] == 0;
    };
    const auto is_inverse = [](const S& a, const S& b) {
        return (a.kind == S::Kind::Push && b.kind == S::Kind::Pop) ||
               (a.kind == S::Kind::PushTime && b.kind == S::Kind::PopTime);
    };
    return clean_impl(seq, is_abs_dyn, is_inverse);
}

}  // namespace gram::interpret
