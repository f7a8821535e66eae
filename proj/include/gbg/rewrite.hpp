#pragma once

// Word rewriting over oriented 1-cells: free cancellation, deletion of
// collapsible letters, and the square move that pushes a redundant 1-cell
// across its partner 2-cell.  The system is convergent; the memoized engine
// computes the shared normal form letter by letter.

#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "gbg/cells.hpp"

namespace gbg {

enum class Strategy { Leftmost, Rightmost };

struct TraceEntry {
    const char* move;  // "cancel", "collapse", "square"
    size_t position;
    Word word;  // the word after the move
};
using TraceFn = std::function<void(const TraceEntry&)>;

// One move at the outermost applicable position; nullopt when reduced.
std::optional<Word> reduce_step(const EmbeddedGraph& g, const Word& w,
                                Strategy strategy = Strategy::Leftmost);

// Iterated reduce_step with a step budget proportional to the input size;
// exceeding it signals a convention bug.
Word m_infinity_steps(const EmbeddedGraph& g, Word w,
                      Strategy strategy = Strategy::Leftmost,
                      const TraceFn& trace = nullptr);

// For a redundant 1-cell, the square move rewrites the cell as the other
// three sides of its partner square, read so that the cell appears first
// and positively.
Word square_replacement(const EmbeddedGraph& g, const CubeCell& c1);

enum class Shortcut { NotApplicable, StepsToR, Trivial };

// Fast paths for redundant 1-cells: either the whole normal form is empty,
// or the cell rewrites to its r-image in one sweep.
Shortcut redundant_shortcut(const EmbeddedGraph& g, const CubeCell& c1);

// Memoized normal forms.  Not thread-safe; use one instance per thread.
class Rewriter {
public:
    explicit Rewriter(const EmbeddedGraph& g) : g_(g) {}

    const EmbeddedGraph& graph() const { return g_; }
    const Word& letter_normal_form(const CubeCell& c1);
    Word m_infinity(const Word& w);
    Word m_infinity(const CubeCell& c1);  // single positive letter

private:
    const EmbeddedGraph& g_;
    std::unordered_map<CubeCell, Word, CellHash> memo_;
    std::unordered_set<CubeCell, CellHash> in_progress_;
};

}  // namespace gbg
