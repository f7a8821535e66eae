#pragma once

// Relative flows and their costs, closed-form cost evaluation, relator
// assembly from critical squares, whole presentations, Tietze
// simplification and abelianization.

#include <array>
#include <optional>

#include "gbg/abelian.hpp"
#include "gbg/rewrite.hpp"

namespace gbg {

// n-1 vertices drained toward the basepoint while one endpoint of a fixed
// non-order-respecting edge is held in place (the edge itself blocks).
struct CostQuery {
    std::vector<int> vertices;  // traversal numbers, n-1 of them
    int edge = -1;
    bool at_iota = true;

    int held(const EmbeddedGraph& g) const {
        return at_iota ? g.iota(edge) : g.tau(edge);
    }
};

Word relative_flow(const EmbeddedGraph& g, const CostQuery& q);
Word cost(Rewriter& rw, const CostQuery& q);

// Closed-form cost for a corner of a critical square; nullopt when no case
// applies (the caller falls back to the rewriting route).
std::optional<Word> cost_closed_form(const EmbeddedGraph& g, const CostQuery& q,
                                     const CubeCell& context);

// One face of a critical square rewrites as cost_start * stable * cost_end^-1.
struct Arm {
    Word cost_start;
    CubeCell stable;
    Word cost_end;
};

struct Relator {
    CubeCell square;
    Word word;                // the rewritten boundary, freely reduced
    std::array<Arm, 4> arms;  // bottom, right, top, left
};

// Rewrites the boundary of a critical square and checks it against the
// four-arm assembly (and is expected to be cross-checked against the
// octagon for two strands by the caller).
Relator relator_for(Rewriter& rw, const CubeCell& square, bool use_closed_forms = true);

// Two-strand relator for a pair of disjoint deleted edges, assembled purely
// from closed forms: four edge faces and four single-generator corners.
Word octagon_relator(const EmbeddedGraph& g, int e1, int e2);

// ---------------------------------------------------------------------------
// presentations

using GWord = std::vector<std::pair<int, int>>;  // (generator index, sign)

GWord cyclic_reduce(GWord w);
GWord canonical_cyclic(GWord w);  // least rotation among the word and its inverse
bool commutator_form_check(const GWord& relator);

struct Presentation {
    struct Gen {
        CubeCell cell;
        std::string name;
    };
    std::string graph_name;
    int strands = 0;
    std::vector<Gen> gens;
    std::vector<GWord> rels;  // canonical cyclic form
};

struct PresentOptions {
    bool use_closed_forms = true;
    int jobs = 1;
    size_t budget = 0;
    bool check_octagon = true;  // cross-check two-strand relators
};

Presentation presentation(const EmbeddedGraph& g, int n, const PresentOptions& opts = {});

// Conservative generator elimination: a relator in which some generator
// occurs exactly once defines it; smallest generator name goes first.
Presentation tietze_simplify(const Presentation& p);

Abelian abelianization(const Presentation& p);

std::string gword_to_string(const Presentation& p, const GWord& w);

}  // namespace gbg
