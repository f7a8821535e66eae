#pragma once

// Embedded graphs with a rotation system, maximal-tree selection and the
// vertex order / direction / meet calculus used by the configuration-space
// machinery.  A graph is immutable once finalized (basepoint + tree chosen);
// subdivide_for and choose_tree return fresh copies.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gbg {

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error("parse error (line " + std::to_string(line_no) + "): " + msg),
          line(line_no) {}
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signals a convention bug (a provably-impossible state), never bad input.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

class EmbeddedGraph {
public:
    struct VertexRec {
        std::string name;
        std::vector<int> rot;  // incident edge indices, clockwise cyclic order
    };
    struct EdgeRec {
        std::string name;
        int u = -1, v = -1;   // internal vertex indices
        bool deleted = false; // true iff not in the chosen tree
        bool declared_deleted = false;
    };

    std::string name = "graph";

    // -- construction ------------------------------------------------------
    int add_vertex(std::string vname);
    int add_edge(std::string ename, int u, int v);
    void set_rotation(int v, std::vector<int> edge_ids);
    void declare_basepoint(int v);
    void declare_deleted(int e);

    int find_vertex(std::string_view vname) const;  // -1 if absent
    int find_edge(std::string_view ename) const;

    // -- raw queries (valid before finalize) -------------------------------
    int raw_vertex_count() const { return static_cast<int>(verts_.size()); }
    int raw_edge_count() const { return static_cast<int>(edges_.size()); }
    const VertexRec& vertex_rec(int v) const { return verts_[v]; }
    const EdgeRec& edge_rec(int e) const { return edges_[e]; }
    int degree(int v) const { return static_cast<int>(verts_[v].rot.size()); }
    bool is_connected() const;
    bool is_simple() const;  // no self-loops, no multi-edges
    bool declared_tree_present() const;
    std::optional<int> declared_basepoint() const { return base_decl_; }

    // Attempts to finalize from declarations; no-op if impossible.
    void maybe_finalize();
    // Finalizes with an explicit basepoint and tree mask (size = #edges).
    void finalize(int basepoint, const std::vector<char>& tree_mask);
    bool finalized() const { return final_; }
    void clear_declarations();  // drop declared tree/basepoint (tree override)

    // -- numbered API (requires finalized()) --------------------------------
    // Vertices are addressed by their traversal number 0..V-1; 0 is the
    // basepoint.  Edges keep their internal index.
    int nv() const { return raw_vertex_count(); }
    int ne() const { return raw_edge_count(); }
    int num_of(int vertex_index) const { return num_[vertex_index]; }
    int vertex_of(int vnum) const { return order_[vnum]; }
    const std::string& vertex_name(int vnum) const { return verts_[order_[vnum]].name; }
    const std::string& edge_name(int e) const { return edges_[e].name; }

    bool in_tree(int e) const { return !edges_[e].deleted; }
    bool is_deleted(int e) const { return edges_[e].deleted; }
    int iota(int e) const { return iota_[e]; }  // larger-numbered endpoint
    int tau(int e) const { return tau_[e]; }    // smaller-numbered endpoint

    int parent_num(int vnum) const { return parent_[vnum]; }       // -1 for the root
    int parent_edge(int vnum) const { return parent_edge_[vnum]; } // -1 for the root
    int depth_num(int vnum) const { return depth_[vnum]; }
    int subtree_size(int vnum) const { return sub_size_[vnum]; }
    bool in_subtree(int anc, int vnum) const {
        return vnum >= anc && vnum < anc + sub_size_[anc];
    }

    // e(v): the unique tree edge with iota = v.  Errors on the basepoint.
    int edge_e(int vnum) const;

    int tree_degree(int vnum) const;
    int gamma_degree(int vnum) const { return degree(order_[vnum]); }

    // Tree edges leaving vnum away from the root, in direction order
    // (direction k corresponds to child_edges(v)[k-1]; at the root, [k]).
    const std::vector<int>& child_edges(int vnum) const { return children_[vnum]; }
    int dir_edge(int vnum, int dir) const;   // tree edge in the given direction
    int dir_child(int vnum, int dir) const;  // its far endpoint (the child)
    int direction(int v1, int v2) const;     // d(v1, v2)
    int dir_of_tree_edge_at(int vnum, int e) const;  // direction of e from vnum

    int meet(int v1, int v2) const;                 // greatest common ancestor
    std::vector<int> geodesic_edges(int v, int w) const;  // tree path, edge indices
    int tree_distance(int v, int w) const;

    int deleted_edge_count() const;
    std::vector<int> deleted_edges() const;

    // Assumption flag: every leaf of T has degree <= 2 in the graph.
    bool assumption_holds() const { return assumption_; }
    // Stronger flag gating closed-form cost paths: additionally, every
    // deleted-edge endpoint is a leaf of T and (basepoint aside) has
    // graph degree exactly 2.
    bool leaf_deleted_edges() const { return leaf_deleted_; }

    bool sufficiently_subdivided(int n) const;

private:
    std::vector<VertexRec> verts_;
    std::vector<EdgeRec> edges_;
    std::optional<int> base_decl_;

    bool final_ = false;
    std::vector<int> num_, order_;
    std::vector<int> parent_, parent_edge_, depth_, sub_size_;
    std::vector<std::vector<int>> children_;
    std::vector<int> iota_, tau_;
    bool assumption_ = false;
    bool leaf_deleted_ = false;

    void compute_numbering();
    void require_final() const {
        if (!final_) throw InternalError("graph is not finalized");
    }
    friend EmbeddedGraph subdivide_for(const EmbeddedGraph&, int);
    friend EmbeddedGraph choose_tree(const EmbeddedGraph&);
    friend class GraphSurgeon;
};

// Parses the line-oriented graph format.  Honors declared rotation system,
// basepoint and tree; finalizes the graph when the declarations suffice.
EmbeddedGraph load_graph(std::string_view text);
EmbeddedGraph load_graph_file(const std::string& path);

// Returns a homeomorphic graph that is sufficiently subdivided for n strands:
// simple, every path between vertices of degree != 2 has >= n-1 edges, every
// cycle has >= n+1 edges, and at least n vertices.
EmbeddedGraph subdivide_for(const EmbeddedGraph& g, int n);

// Picks a basepoint and a maximal tree satisfying the degree assumption,
// keeping any declared choice.  When a single vertex meets every simple
// cycle, all deleted edges are routed through it (two-strand groups are then
// visibly free).  May subdivide deleted edges; the result is finalized.
EmbeddedGraph choose_tree(const EmbeddedGraph& g);

}  // namespace gbg
