#pragma once

// Cells of the discretized configuration space: n-element sets of vertices
// and closed edges with pairwise disjoint closures, their Morse
// classification, and canonical vector-notation names for the stable ones.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbg/graph.hpp"

namespace gbg {

// A vertex (by traversal number) or a closed edge (by edge index, keyed by
// its iota number).  Within a cell all keys are distinct.
struct Atom {
    int64_t code = 0;  // (key << 32) | (edge index + 1); key = 2*num or 2*iota+1

    static Atom vertex(int vnum) { return Atom{int64_t(2 * vnum) << 32}; }
    static Atom edge(const EmbeddedGraph& g, int e) {
        return Atom{((int64_t(2 * g.iota(e) + 1)) << 32) | uint32_t(e + 1)};
    }
    bool is_edge() const { return (code >> 32) & 1; }
    int key() const { return static_cast<int>(code >> 32); }
    int vnum() const { return key() >> 1; }  // for edges: the iota number
    int edge_index() const { return static_cast<int>(code & 0xffffffff) - 1; }

    auto operator<=>(const Atom&) const = default;
};

struct CubeCell {
    std::vector<Atom> atoms;  // sorted by code

    CubeCell() = default;
    explicit CubeCell(std::vector<Atom> a);

    int size() const { return static_cast<int>(atoms.size()); }
    int dim() const;
    bool contains(Atom a) const;
    CubeCell replaced(Atom from, Atom to) const;  // re-sorts

    auto operator<=>(const CubeCell&) const = default;
};

struct CellHash {
    size_t operator()(const CubeCell& c) const {
        uint64_t h = 1469598103934665603ull;
        for (const Atom& a : c.atoms) {
            h ^= static_cast<uint64_t>(a.code);
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

std::string cell_to_string(const EmbeddedGraph& g, const CubeCell& c);

// Convenience constructors used all over the tests.
CubeCell make_cell(const EmbeddedGraph& g, const std::vector<int>& vertex_nums,
                   const std::vector<std::pair<int, int>>& edges_by_endpoints = {});
int edge_between(const EmbeddedGraph& g, int vnum1, int vnum2);  // -1 if absent

bool is_valid_cell(const EmbeddedGraph& g, const CubeCell& c);

// Blocked/order-respecting status inside a fixed cell.
bool is_blocked(const EmbeddedGraph& g, const CubeCell& c, int vnum);
bool is_order_respecting(const EmbeddedGraph& g, const CubeCell& c, Atom edge_atom);

enum class MorseTag { Redundant, Collapsible, Critical };

struct MorseClass {
    MorseTag tag;
    std::optional<CubeCell> partner;  // W(c) if redundant, W^{-1}(c) if collapsible
};

MorseClass classify(const EmbeddedGraph& g, const CubeCell& c);

// All cells with n strands of a given dimension, sorted.  A budget of 0
// means unlimited; exceeding it raises BudgetError.
std::vector<CubeCell> enumerate_cells(const EmbeddedGraph& g, int n, int dim,
                                      size_t budget = 0);
std::vector<CubeCell> critical_cells(const EmbeddedGraph& g, int n, int dim,
                                     size_t budget = 0);

// The unique fully-blocked configuration of n strands.
CubeCell base_zero_cell(const EmbeddedGraph& g, int n);

// Moves the smallest unblocked vertex one tree step toward the basepoint.
CubeCell r_step(const EmbeddedGraph& g, const CubeCell& c);
CubeCell r_infinity(const EmbeddedGraph& g, const CubeCell& c);

// ---------------------------------------------------------------------------
// words of oriented 1-cells

struct Letter {
    CubeCell cell;  // dimension 1
    int sign = 1;   // +1: traversal from the iota-endpoint to the tau-endpoint

    bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

Word inverse_word(const Word& w);
Word free_reduce(const Word& w);
Word concat_reduced(const Word& a, const Word& b);
std::string word_to_string(const EmbeddedGraph& g, const Word& w);

// The start and end 0-cells of an oriented 1-cell letter.
CubeCell letter_start(const EmbeddedGraph& g, const Letter& l);
CubeCell letter_end(const EmbeddedGraph& g, const Letter& l);
bool is_edge_path(const EmbeddedGraph& g, const Word& w);  // consecutive endpoints match

// The 4-letter boundary word bottom, right, top^-1, left^-1 of a square,
// where the edges e1 < e2 are ordered by iota number and bottom keeps e1
// with e2 collapsed to its iota endpoint.  A closed edge path.
Word boundary_word(const EmbeddedGraph& g, const CubeCell& c2);

// ---------------------------------------------------------------------------
// vector notation

struct VectorTerm {
    int vertex;               // essential vertex X
    int dir;                  // direction i >= 1 of the edge at X
    std::vector<int> counts;  // entry j-1 = strands in direction j
    auto operator<=>(const VectorTerm&) const = default;
};

struct VectorNotation {
    std::vector<VectorTerm> terms;  // sorted by vertex
    std::vector<int> del_edges;     // deleted-edge indices, sorted by (iota, index)
    int base_count = 0;             // strands stacked at the basepoint

    auto operator<=>(const VectorNotation&) const = default;
};

struct NotationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical name of a fully-blocked cell; throws NotationError when the cell
// has no such name (display machinery only, never load-bearing).
VectorNotation vector_notation(const EmbeddedGraph& g, const CubeCell& c);
CubeCell realize_notation(const EmbeddedGraph& g, const VectorNotation& vn);
std::string notation_to_string(const EmbeddedGraph& g, const VectorNotation& vn);
VectorNotation parse_notation(const EmbeddedGraph& g, const std::string& text);

// Vector-notation name when expressible, otherwise the raw atom set.
std::string generator_name(const EmbeddedGraph& g, const CubeCell& c);

// Letter label (A, B, ..., Z, AA, ...) of an essential vertex, by order of
// traversal number, and its inverse.
std::string essential_letter(const EmbeddedGraph& g, int vnum);
int essential_vertex_of_letter(const EmbeddedGraph& g, const std::string& letter);

}  // namespace gbg
