#include "gbg/rewrite.hpp"

#include <algorithm>

namespace gbg {

Word square_replacement(const EmbeddedGraph& g, const CubeCell& c1) {
    MorseClass mc = classify(g, c1);
    if (mc.tag != MorseTag::Redundant)
        throw InternalError("square_replacement needs a redundant 1-cell");
    Word bw = boundary_word(g, *mc.partner);
    // c1 is the bottom or the left side of its square (the iota-side faces).
    if (bw[3].cell == c1) {
        // left = bottom * right * top^-1 up to the flow
        return Word{{bw[0].cell, +1}, {bw[1].cell, +1}, {bw[2].cell, -1}};
    }
    if (bw[0].cell == c1) {
        // bottom = left * top * right^-1
        return Word{{bw[3].cell, +1}, {bw[2].cell, +1}, {bw[1].cell, -1}};
    }
    throw InternalError("redundant 1-cell is not a face of its square");
}

namespace {

// Applies the single applicable move to the letter at position i, if any.
// Returns the replacement subword (possibly empty), or nullopt if the letter
// is critical.
std::optional<Word> letter_move(const EmbeddedGraph& g, const Letter& l) {
    MorseClass mc = classify(g, l.cell);
    switch (mc.tag) {
        case MorseTag::Critical:
            return std::nullopt;
        case MorseTag::Collapsible:
            return Word{};
        case MorseTag::Redundant: {
            Word rep = square_replacement(g, l.cell);
            return l.sign > 0 ? rep : inverse_word(rep);
        }
    }
    return std::nullopt;
}

}  // namespace

namespace {

struct Step {
    Word word;
    const char* move;
    size_t position;
};

// One move at a single position: cancellation with the next letter wins,
// then deleting a collapsible letter, then the square move.
std::optional<Step> move_at(const EmbeddedGraph& g, const Word& w, size_t i) {
    if (i + 1 < w.size() && w[i].cell == w[i + 1].cell && w[i].sign == -w[i + 1].sign) {
        Word out(w.begin(), w.begin() + i);
        out.insert(out.end(), w.begin() + i + 2, w.end());
        return Step{std::move(out), "cancel", i};
    }
    auto rep = letter_move(g, w[i]);
    if (!rep) return std::nullopt;
    Word out(w.begin(), w.begin() + i);
    out.insert(out.end(), rep->begin(), rep->end());
    out.insert(out.end(), w.begin() + i + 1, w.end());
    return Step{std::move(out), rep->empty() ? "collapse" : "square", i};
}

std::optional<Step> reduce_step_ex(const EmbeddedGraph& g, const Word& w,
                                   Strategy strategy) {
    const size_t n = w.size();
    if (strategy == Strategy::Leftmost) {
        for (size_t i = 0; i < n; ++i)
            if (auto s = move_at(g, w, i)) return s;
    } else {
        for (size_t i = n; i >= 1; --i)
            if (auto s = move_at(g, w, i - 1)) return s;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Word> reduce_step(const EmbeddedGraph& g, const Word& w, Strategy strategy) {
    auto s = reduce_step_ex(g, w, strategy);
    if (!s) return std::nullopt;
    return std::move(s->word);
}

Word m_infinity_steps(const EmbeddedGraph& g, Word w, Strategy strategy,
                      const TraceFn& trace) {
    // The system terminates; this budget only trips on convention bugs.
    size_t budget = 64 * (w.size() + 8) * (g.ne() + 2) * (g.nv() + 2);
    size_t steps = 0;
    for (;;) {
        auto next = reduce_step_ex(g, w, strategy);
        if (!next) return w;
        w = std::move(next->word);
        if (trace) trace(TraceEntry{next->move, next->position, w});
        if (++steps > budget)
            throw InternalError("rewriting step budget exceeded: non-terminating moves");
    }
}

Shortcut redundant_shortcut(const EmbeddedGraph& g, const CubeCell& c1) {
    if (c1.dim() != 1) return Shortcut::NotApplicable;
    Atom edge_atom{};
    std::vector<int> verts;
    for (const Atom& a : c1.atoms) {
        if (a.is_edge()) edge_atom = a;
        else verts.push_back(a.vnum());
    }
    MorseClass mc = classify(g, c1);
    if (mc.tag != MorseTag::Redundant) return Shortcut::NotApplicable;
    int e = edge_atom.edge_index();
    int te = g.tau(e), ie = g.iota(e);

    // Whole normal form dies: a tree edge with no cell vertex strictly
    // between its endpoints.
    if (g.in_tree(e)) {
        bool clean = true;
        for (int v : verts)
            if (te < v && v < ie) clean = false;
        if (clean) return Shortcut::Trivial;
    }

    // Single sweep to the r-image: nothing relevant strictly between the
    // smallest unblocked vertex and its parent.
    int v1 = -1;
    for (int v : verts)
        if (!is_blocked(g, c1, v)) {
            v1 = v;
            break;
        }
    if (v1 == -1) return Shortcut::NotApplicable;
    int lo = g.parent_num(v1);
    auto inside = [&](int x) { return lo < x && x < v1; };
    bool clear = true;
    for (int v : verts)
        if (v != v1 && inside(v)) clear = false;
    if (inside(te) || inside(ie)) clear = false;
    return clear ? Shortcut::StepsToR : Shortcut::NotApplicable;
}

const Word& Rewriter::letter_normal_form(const CubeCell& c1) {
    auto it = memo_.find(c1);
    if (it != memo_.end()) return it->second;
    if (in_progress_.count(c1))
        throw InternalError("rewriting recursion revisited a 1-cell: matching is not acyclic");

    in_progress_.insert(c1);
    Word result;
    CubeCell cur = c1;
    // Chase single-sweep shortcuts iteratively to keep recursion shallow.
    for (;;) {
        MorseClass mc = classify(g_, cur);
        if (mc.tag == MorseTag::Critical) {
            result = Word{{cur, +1}};
            break;
        }
        if (mc.tag == MorseTag::Collapsible) {
            result = Word{};
            break;
        }
        auto it2 = memo_.find(cur);
        if (it2 != memo_.end()) {
            result = it2->second;
            break;
        }
        Shortcut sc = redundant_shortcut(g_, cur);
        if (sc == Shortcut::Trivial) {
            result = Word{};
            break;
        }
        if (sc == Shortcut::StepsToR) {
            cur = r_step(g_, cur);
            continue;
        }
        Word expansion = square_replacement(g_, cur);
        result.clear();
        for (const Letter& l : expansion) {
            const Word& nf = letter_normal_form(l.cell);
            Word piece = l.sign > 0 ? nf : inverse_word(nf);
            result = concat_reduced(result, piece);
        }
        break;
    }
    in_progress_.erase(c1);
    auto [pos, ok] = memo_.emplace(c1, std::move(result));
    (void)ok;
    return pos->second;
}

Word Rewriter::m_infinity(const Word& w) {
    Word out;
    for (const Letter& l : w) {
        const Word& nf = letter_normal_form(l.cell);
        Word piece = l.sign > 0 ? nf : inverse_word(nf);
        out = concat_reduced(out, piece);
    }
    return out;
}

Word Rewriter::m_infinity(const CubeCell& c1) { return letter_normal_form(c1); }

}  // namespace gbg
