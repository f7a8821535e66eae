#include "gbg/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gbg {

// ---------------------------------------------------------------------------
// construction

int EmbeddedGraph::add_vertex(std::string vname) {
    verts_.push_back(VertexRec{std::move(vname), {}});
    return static_cast<int>(verts_.size()) - 1;
}

int EmbeddedGraph::add_edge(std::string ename, int u, int v) {
    int e = static_cast<int>(edges_.size());
    edges_.push_back(EdgeRec{std::move(ename), u, v, false, false});
    verts_[u].rot.push_back(e);
    if (v != u) verts_[v].rot.push_back(e);
    return e;
}

void EmbeddedGraph::set_rotation(int v, std::vector<int> edge_ids) {
    std::vector<int> sorted_old = verts_[v].rot;
    std::vector<int> sorted_new = edge_ids;
    std::sort(sorted_old.begin(), sorted_old.end());
    std::sort(sorted_new.begin(), sorted_new.end());
    if (sorted_old != sorted_new)
        throw GraphError("rotation of vertex '" + verts_[v].name +
                         "' is not a permutation of its incident edges");
    verts_[v].rot = std::move(edge_ids);
}

void EmbeddedGraph::declare_basepoint(int v) {
    if (base_decl_ && *base_decl_ != v) throw GraphError("two basepoints declared");
    base_decl_ = v;
}

void EmbeddedGraph::declare_deleted(int e) {
    edges_[e].deleted = true;
    edges_[e].declared_deleted = true;
}

int EmbeddedGraph::find_vertex(std::string_view vname) const {
    for (int i = 0; i < raw_vertex_count(); ++i)
        if (verts_[i].name == vname) return i;
    return -1;
}

int EmbeddedGraph::find_edge(std::string_view ename) const {
    for (int i = 0; i < raw_edge_count(); ++i)
        if (edges_[i].name == ename) return i;
    return -1;
}

// ---------------------------------------------------------------------------
// raw queries

bool EmbeddedGraph::is_connected() const {
    if (verts_.empty()) return false;
    std::vector<char> seen(verts_.size(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int e : verts_[v].rot) {
            int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                queue.push_back(w);
            }
        }
    }
    return count == raw_vertex_count();
}

bool EmbeddedGraph::is_simple() const {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
        if (e.u == e.v) return false;
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert({key.first, key.second}).second) return false;
    }
    return true;
}

bool EmbeddedGraph::declared_tree_present() const {
    for (const auto& e : edges_)
        if (e.declared_deleted) return true;
    return false;
}

int EmbeddedGraph::deleted_edge_count() const {
    int k = 0;
    for (const auto& e : edges_) k += e.deleted ? 1 : 0;
    return k;
}

std::vector<int> EmbeddedGraph::deleted_edges() const {
    std::vector<int> out;
    for (int e = 0; e < raw_edge_count(); ++e)
        if (edges_[e].deleted) out.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// finalize + numbering

void EmbeddedGraph::clear_declarations() {
    base_decl_.reset();
    for (auto& e : edges_) {
        e.deleted = false;
        e.declared_deleted = false;
    }
    final_ = false;
}

void EmbeddedGraph::maybe_finalize() {
    if (final_) return;
    if (!base_decl_ || !declared_tree_present() || !is_simple()) return;
    int tree_edges = 0;
    for (const auto& e : edges_) tree_edges += e.declared_deleted ? 0 : 1;
    if (tree_edges != raw_vertex_count() - 1) return;
    std::vector<char> mask(edges_.size(), 1);
    for (int e = 0; e < raw_edge_count(); ++e) mask[e] = edges_[e].declared_deleted ? 0 : 1;
    finalize(*base_decl_, mask);
}

void EmbeddedGraph::finalize(int basepoint, const std::vector<char>& tree_mask) {
    if (!is_simple()) throw GraphError("graph must be simple before a tree is fixed");
    if (!is_connected()) throw GraphError("graph is disconnected");
    int tree_edges = 0;
    for (int e = 0; e < raw_edge_count(); ++e) {
        edges_[e].deleted = !tree_mask[e];
        tree_edges += tree_mask[e] ? 1 : 0;
    }
    if (tree_edges != raw_vertex_count() - 1)
        throw GraphError("marked tree does not have |V|-1 edges");
    int base_tree_deg = 0;
    for (int e : verts_[basepoint].rot)
        if (tree_mask[e]) ++base_tree_deg;
    if (base_tree_deg != 1 && raw_vertex_count() > 1)
        throw GraphError("basepoint '" + verts_[basepoint].name +
                         "' does not have degree 1 in the tree");
    base_decl_ = basepoint;
    final_ = true;
    compute_numbering();
}

void EmbeddedGraph::compute_numbering() {
    const int V = raw_vertex_count();
    std::vector<int> num_by_index(V, -1);
    order_.clear();
    order_.reserve(V);

    // Depth-first walk of the tree.  From a vertex entered via edge p, the
    // children are taken in rotation order starting immediately after p.
    struct Frame {
        int vertex;
        int parent_edge;  // -1 at the root
        size_t next = 0;
    };
    int root = *base_decl_;
    auto assign = [&](int v) {
        num_by_index[v] = static_cast<int>(order_.size());
        order_.push_back(v);
    };
    assign(root);
    std::vector<Frame> stack{{root, -1, 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        const auto& rot = verts_[f.vertex].rot;
        size_t start = 0;
        if (f.parent_edge >= 0) {
            for (size_t i = 0; i < rot.size(); ++i)
                if (rot[i] == f.parent_edge) start = i + 1;
        }
        bool descended = false;
        while (f.next < rot.size()) {
            size_t slot = (start + f.next) % rot.size();
            ++f.next;
            int e = rot[slot];
            if (e == f.parent_edge || edges_[e].deleted) continue;
            int w = edges_[e].u == f.vertex ? edges_[e].v : edges_[e].u;
            if (num_by_index[w] != -1) throw GraphError("marked tree contains a cycle");
            assign(w);
            stack.back().next = f.next;
            stack.push_back({w, e, 0});
            descended = true;
            break;
        }
        if (!descended) stack.pop_back();
    }
    if (static_cast<int>(order_.size()) != V)
        throw GraphError("marked tree does not span the graph");

    num_ = num_by_index;
    parent_.assign(V, -1);
    parent_edge_.assign(V, -1);
    depth_.assign(V, 0);
    children_.assign(V, {});

    for (int n = 1; n < V; ++n) {
        int v = order_[n];
        for (int e : verts_[v].rot) {
            if (edges_[e].deleted) continue;
            int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
            if (num_by_index[w] < n) {  // the unique tree neighbor numbered earlier
                parent_edge_[n] = e;
                parent_[n] = num_by_index[w];
                break;
            }
        }
        if (parent_edge_[n] == -1) throw InternalError("tree vertex without parent");
        depth_[n] = depth_[parent_[n]] + 1;
    }
    for (int n = 0; n < V; ++n) {
        int v = order_[n];
        const auto& rot = verts_[v].rot;
        if (rot.empty()) continue;
        size_t start = 0;
        if (n != 0) {
            for (size_t i = 0; i < rot.size(); ++i)
                if (rot[i] == parent_edge_[n]) start = i + 1;
        }
        for (size_t k = 0; k < rot.size(); ++k) {
            int e = rot[(start + k) % rot.size()];
            if (n != 0 && e == parent_edge_[n]) continue;
            if (edges_[e].deleted) continue;
            int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
            if (num_by_index[w] > n && parent_[num_by_index[w]] == n)
                children_[n].push_back(e);
        }
    }

    sub_size_.assign(V, 1);
    for (int n = V - 1; n >= 1; --n) sub_size_[parent_[n]] += sub_size_[n];

    iota_.assign(edges_.size(), -1);
    tau_.assign(edges_.size(), -1);
    for (int e = 0; e < raw_edge_count(); ++e) {
        int a = num_by_index[edges_[e].u], b = num_by_index[edges_[e].v];
        iota_[e] = std::max(a, b);
        tau_[e] = std::min(a, b);
    }

    assumption_ = true;
    for (int n = 0; n < V; ++n)
        if (tree_degree(n) == 1 && gamma_degree(n) > 2) assumption_ = false;
    leaf_deleted_ = assumption_;
    for (int e = 0; e < raw_edge_count(); ++e) {
        if (!edges_[e].deleted) continue;
        for (int end : {iota_[e], tau_[e]}) {
            if (tree_degree(end) != 1) leaf_deleted_ = false;
            else if (end != 0 && gamma_degree(end) != 2) leaf_deleted_ = false;
        }
    }
}

// ---------------------------------------------------------------------------
// numbered API

int EmbeddedGraph::edge_e(int vnum) const {
    require_final();
    if (vnum == 0) throw GraphError("the basepoint has no outgoing tree edge");
    return parent_edge_[vnum];
}

int EmbeddedGraph::tree_degree(int vnum) const {
    require_final();
    return static_cast<int>(children_[vnum].size()) + (vnum == 0 ? 0 : 1);
}

int EmbeddedGraph::dir_edge(int vnum, int dir) const {
    require_final();
    if (vnum == 0) {
        if (dir != 0 || children_[0].empty())
            throw GraphError("no such direction at the basepoint");
        return children_[0][0];
    }
    if (dir == 0) return parent_edge_[vnum];
    if (dir < 1 || dir > static_cast<int>(children_[vnum].size()))
        throw GraphError("no such direction");
    return children_[vnum][dir - 1];
}

int EmbeddedGraph::dir_child(int vnum, int dir) const {
    int e = dir_edge(vnum, dir);
    return iota_[e] == vnum ? tau_[e] : iota_[e];
}

int EmbeddedGraph::dir_of_tree_edge_at(int vnum, int e) const {
    require_final();
    if (vnum != 0 && e == parent_edge_[vnum]) return 0;
    const auto& ch = children_[vnum];
    for (size_t i = 0; i < ch.size(); ++i)
        if (ch[i] == e) return static_cast<int>(i) + (vnum == 0 ? 0 : 1);
    throw GraphError("edge is not a tree edge at this vertex");
}

int EmbeddedGraph::direction(int v1, int v2) const {
    require_final();
    if (v1 == v2) return 0;
    if (!in_subtree(v1, v2)) return 0;
    const auto& ch = children_[v1];
    for (size_t i = 0; i < ch.size(); ++i) {
        int d = static_cast<int>(i) + (v1 == 0 ? 0 : 1);
        if (in_subtree(dir_child(v1, d), v2)) return d;
    }
    throw InternalError("descendant not found in any child subtree");
}

int EmbeddedGraph::meet(int v1, int v2) const {
    require_final();
    int a = v1, b = v2;
    while (a != b) {  // parents always carry smaller numbers
        if (a > b) a = parent_[a];
        else b = parent_[b];
    }
    return a;
}

std::vector<int> EmbeddedGraph::geodesic_edges(int v, int w) const {
    require_final();
    int m = meet(v, w);
    std::vector<int> down, up;
    for (int x = v; x != m; x = parent_[x]) down.push_back(parent_edge_[x]);
    for (int x = w; x != m; x = parent_[x]) up.push_back(parent_edge_[x]);
    std::reverse(up.begin(), up.end());
    down.insert(down.end(), up.begin(), up.end());
    return down;
}

int EmbeddedGraph::tree_distance(int v, int w) const {
    require_final();
    int m = meet(v, w);
    return depth_[v] + depth_[w] - 2 * depth_[m];
}

// ---------------------------------------------------------------------------
// parsing

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

EmbeddedGraph load_graph(std::string_view text) {
    EmbeddedGraph g;
    std::map<std::string, int, std::less<>> vmap, emap;
    std::map<int, std::pair<std::vector<std::string>, int>> pending_rot;

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_graph = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "graph") {
            if (toks.size() != 2) throw ParseError("expected: graph <name>", line_no);
            if (saw_graph) throw ParseError("duplicate graph line", line_no);
            g.name = toks[1];
            saw_graph = true;
        } else if (kw == "vertex") {
            if (toks.size() < 2 || toks.size() > 3)
                throw ParseError("expected: vertex <id> [basepoint]", line_no);
            if (vmap.count(toks[1]))
                throw ParseError("duplicate vertex '" + toks[1] + "'", line_no);
            int v = g.add_vertex(toks[1]);
            vmap[toks[1]] = v;
            if (toks.size() == 3) {
                if (toks[2] != "basepoint")
                    throw ParseError("unknown vertex flag '" + toks[2] + "'", line_no);
                if (g.declared_basepoint())
                    throw ParseError("second basepoint '" + toks[1] + "'", line_no);
                g.declare_basepoint(v);
            }
        } else if (kw == "edge") {
            if (toks.size() < 4 || toks.size() > 5)
                throw ParseError("expected: edge <id> <u> <v> [deleted]", line_no);
            if (emap.count(toks[1]))
                throw ParseError("duplicate edge '" + toks[1] + "'", line_no);
            for (int k : {2, 3})
                if (!vmap.count(toks[k]))
                    throw ParseError("edge '" + toks[1] + "' references undeclared vertex '" +
                                         toks[k] + "'",
                                     line_no);
            int e = g.add_edge(toks[1], vmap[toks[2]], vmap[toks[3]]);
            emap[toks[1]] = e;
            if (toks.size() == 5) {
                if (toks[4] != "deleted")
                    throw ParseError("unknown edge flag '" + toks[4] + "'", line_no);
                g.declare_deleted(e);
            }
        } else if (kw == "rot") {
            if (toks.size() < 2) throw ParseError("expected: rot <vertex>: <edges>", line_no);
            std::string vtok = toks[1];
            size_t eat = 2;
            if (!vtok.empty() && vtok.back() == ':') vtok.pop_back();
            else if (toks.size() >= 3 && toks[2] == ":") eat = 3;
            else throw ParseError("expected ':' after vertex in rot line", line_no);
            auto it = vmap.find(vtok);
            if (it == vmap.end())
                throw ParseError("rot references undeclared vertex '" + vtok + "'", line_no);
            pending_rot[it->second] = {std::vector<std::string>(toks.begin() + eat, toks.end()),
                                       line_no};
        } else {
            throw ParseError("unknown directive '" + kw + "'", line_no);
        }
    }
    if (g.raw_vertex_count() == 0) throw ParseError("graph has no vertices", line_no);

    for (auto& [v, entry] : pending_rot) {
        std::vector<int> ids;
        for (const auto& en : entry.first) {
            auto it = emap.find(en);
            if (it == emap.end())
                throw ParseError("rotation of '" + g.vertex_rec(v).name +
                                     "' references unknown edge '" + en + "'",
                                 entry.second);
            ids.push_back(it->second);
        }
        g.set_rotation(v, std::move(ids));
    }

    if (!g.is_connected()) throw GraphError("graph '" + g.name + "' is disconnected");
    if (g.declared_tree_present()) {
        int tree_edges = 0;
        for (int e = 0; e < g.raw_edge_count(); ++e)
            if (!g.edge_rec(e).declared_deleted) ++tree_edges;
        if (tree_edges != g.raw_vertex_count() - 1)
            throw GraphError("declared tree of '" + g.name + "' does not have |V|-1 edges");
    }
    g.maybe_finalize();
    return g;
}

EmbeddedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_graph(buf.str());
}

// ---------------------------------------------------------------------------
// edge surgery

// Splits edges while keeping rotations and flags coherent.  A finalized
// input is re-finalized on take() with the same basepoint and the mutated
// tree mask.
class GraphSurgeon {
public:
    explicit GraphSurgeon(EmbeddedGraph g) : g_(std::move(g)), was_final_(g_.final_) {
        g_.final_ = false;
    }

    EmbeddedGraph take() {
        if (was_final_) {
            std::vector<char> mask(g_.edges_.size(), 1);
            for (size_t e = 0; e < g_.edges_.size(); ++e) mask[e] = g_.edges_[e].deleted ? 0 : 1;
            g_.finalize(*g_.base_decl_, mask);
        }
        return std::move(g_);
    }
    EmbeddedGraph& graph() { return g_; }

    // Splits edge e = [u, v] into [u, x] (keeps index e) and [x, v] (new
    // index).  If e was deleted, the half named by deleted_half_v keeps the
    // deleted flag (1 = the v-side half).  Returns x.
    int split_edge(int e, int deleted_half_v = 1) {
        auto& edges = g_.edges_;
        auto& verts = g_.verts_;
        int u = edges[e].u, v = edges[e].v;
        std::string base = edges[e].name;
        int x = g_.add_vertex(base + "." + std::to_string(++split_counter_[base]));
        verts[x].rot.clear();

        int e2 = static_cast<int>(edges.size());
        edges.push_back(EmbeddedGraph::EdgeRec{base + "b", x, v, false, false});
        edges[e].name = base + "a";
        edges[e].v = x;
        bool was_deleted = edges[e].deleted;
        bool was_decl = edges[e].declared_deleted;
        edges[e].deleted = edges[e2].deleted = false;
        edges[e].declared_deleted = edges[e2].declared_deleted = false;
        if (was_deleted) {
            int half = deleted_half_v ? e2 : e;
            edges[half].deleted = true;
            edges[half].declared_deleted = was_decl;
        }

        if (u == v) {  // self-loop: u keeps both halves, adjacent in rotation
            auto& rot = verts[u].rot;
            auto it = std::find(rot.begin(), rot.end(), e);
            rot.insert(it + 1, e2);
        } else {
            for (auto& slot : verts[v].rot)
                if (slot == e) slot = e2;
        }
        verts[x].rot = {e, e2};
        return x;
    }

private:
    EmbeddedGraph g_;
    bool was_final_;
    std::map<std::string, int> split_counter_;
};

// ---------------------------------------------------------------------------
// subdivision

namespace {

struct CycleInfo {
    int length = -1;
    int edge = -1;  // smallest edge index through which a shortest cycle runs
};

CycleInfo shortest_cycle(const EmbeddedGraph& g) {
    CycleInfo best;
    const int V = g.raw_vertex_count();
    for (int e = 0; e < g.raw_edge_count(); ++e) {
        const auto& er = g.edge_rec(e);
        if (er.u == er.v) {
            if (best.length == -1 || 1 < best.length) best = {1, e};
            continue;
        }
        std::vector<int> dist(V, -1);
        std::deque<int> q{er.u};
        dist[er.u] = 0;
        while (!q.empty()) {
            int a = q.front();
            q.pop_front();
            for (int f : g.vertex_rec(a).rot) {
                if (f == e) continue;
                const auto& fr = g.edge_rec(f);
                int b = fr.u == a ? fr.v : fr.u;
                if (b != a && dist[b] == -1) {
                    dist[b] = dist[a] + 1;
                    q.push_back(b);
                }
            }
        }
        if (dist[er.v] != -1) {
            int len = dist[er.v] + 1;
            if (best.length == -1 || len < best.length) best = {len, e};
        }
    }
    return best;
}

std::vector<int> essential_vertices(const EmbeddedGraph& g) {
    std::vector<int> out;
    for (int v = 0; v < g.raw_vertex_count(); ++v)
        if (g.degree(v) != 2) out.push_back(v);
    return out;
}

std::vector<int> raw_distances(const EmbeddedGraph& g, int src) {
    std::vector<int> dist(g.raw_vertex_count(), -1);
    std::deque<int> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (int f : g.vertex_rec(a).rot) {
            const auto& fr = g.edge_rec(f);
            int b = fr.u == a ? fr.v : fr.u;
            if (b != a && dist[b] == -1) {
                dist[b] = dist[a] + 1;
                q.push_back(b);
            }
        }
    }
    return dist;
}

int first_edge_of_shortest_path(const EmbeddedGraph& g, int src, int dst) {
    auto from_dst = raw_distances(g, dst);
    int best_edge = -1;
    for (int f : g.vertex_rec(src).rot) {
        const auto& fr = g.edge_rec(f);
        int b = fr.u == src ? fr.v : fr.u;
        if (b == src) continue;
        if (from_dst[b] == from_dst[src] - 1 && (best_edge == -1 || f < best_edge))
            best_edge = f;
    }
    if (best_edge == -1) throw InternalError("no shortest-path edge found");
    return best_edge;
}

bool is_bridge(const EmbeddedGraph& g, int e) {
    const auto& er = g.edge_rec(e);
    if (er.u == er.v) return false;
    std::vector<int> dist(g.raw_vertex_count(), -1);
    std::deque<int> q{er.u};
    dist[er.u] = 0;
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (int f : g.vertex_rec(a).rot) {
            if (f == e) continue;
            const auto& fr = g.edge_rec(f);
            int b = fr.u == a ? fr.v : fr.u;
            if (b != a && dist[b] == -1) {
                dist[b] = dist[a] + 1;
                q.push_back(b);
            }
        }
    }
    return dist[er.v] == -1;
}

// forest test on g minus one vertex
bool acyclic_without(const EmbeddedGraph& g, int v) {
    const int V = g.raw_vertex_count();
    std::vector<int> comp(V, -1);
    int ncomp = 0, nverts = 0, nedges = 0;
    for (int st = 0; st < V; ++st) {
        if (st == v || comp[st] != -1) continue;
        ++ncomp;
        std::deque<int> q{st};
        comp[st] = ncomp;
        while (!q.empty()) {
            int a = q.front();
            q.pop_front();
            ++nverts;
            for (int f : g.vertex_rec(a).rot) {
                const auto& fr = g.edge_rec(f);
                int b = fr.u == a ? fr.v : fr.u;
                if (b == v || b == a) continue;
                if (comp[b] == -1) {
                    comp[b] = ncomp;
                    q.push_back(b);
                }
            }
        }
    }
    for (int f = 0; f < g.raw_edge_count(); ++f) {
        const auto& fr = g.edge_rec(f);
        if (fr.u == v || fr.v == v) continue;
        if (fr.u == fr.v) return false;  // self-loop elsewhere
        ++nedges;
    }
    return nedges == nverts - ncomp;
}

}  // namespace

bool EmbeddedGraph::sufficiently_subdivided(int n) const {
    if (!is_simple()) return false;
    if (raw_vertex_count() < n) return false;
    auto cyc = shortest_cycle(*this);
    if (cyc.length != -1 && cyc.length < n + 1) return false;
    auto ess = essential_vertices(*this);
    for (size_t i = 0; i < ess.size(); ++i) {
        auto dist = raw_distances(*this, ess[i]);
        for (size_t j = i + 1; j < ess.size(); ++j)
            if (dist[ess[j]] != -1 && dist[ess[j]] < n - 1) return false;
    }
    return true;
}

EmbeddedGraph subdivide_for(const EmbeddedGraph& g, int n) {
    if (n < 1) throw GraphError("strand count must be at least 1");
    if (!g.is_connected()) throw GraphError("graph is disconnected");
    GraphSurgeon s(g);
    auto& h = s.graph();

    // Simplicity: a self-loop becomes a multi-edge, a multi-edge a path.
    for (bool again = true; again;) {
        again = false;
        for (int e = 0; e < h.raw_edge_count() && !again; ++e) {
            const auto& er = h.edge_rec(e);
            if (er.u == er.v) {
                s.split_edge(e);
                again = true;
                break;
            }
            for (int f = 0; f < e && !again; ++f) {
                const auto& fr = h.edge_rec(f);
                if (std::minmax(er.u, er.v) == std::minmax(fr.u, fr.v)) {
                    s.split_edge(e);
                    again = true;
                }
            }
        }
    }

    // Every cycle needs at least n+1 edges.
    for (;;) {
        auto cyc = shortest_cycle(h);
        if (cyc.length == -1 || cyc.length >= n + 1) break;
        s.split_edge(cyc.edge);
    }

    // Vertices of degree != 2 need pairwise distance >= n-1.
    for (;;) {
        auto ess = essential_vertices(h);
        int bu = -1, bv = -1;
        for (size_t i = 0; i < ess.size() && bu == -1; ++i) {
            auto dist = raw_distances(h, ess[i]);
            for (size_t j = i + 1; j < ess.size(); ++j) {
                if (dist[ess[j]] != -1 && dist[ess[j]] < n - 1) {
                    bu = ess[i];
                    bv = ess[j];
                    break;
                }
            }
        }
        if (bu == -1) break;
        s.split_edge(first_edge_of_shortest_path(h, bu, bv));
    }

    while (h.raw_vertex_count() < n) s.split_edge(0);

    return s.take();
}

// ---------------------------------------------------------------------------
// tree selection

EmbeddedGraph choose_tree(const EmbeddedGraph& g) {
    if (g.finalized()) return g;
    if (!g.is_connected()) throw GraphError("graph is disconnected");
    if (!g.is_simple())
        throw GraphError("choose_tree requires a simple graph; subdivide first");

    GraphSurgeon s(g);
    auto& h = s.graph();

    auto find_hub = [&]() -> int {
        if (shortest_cycle(h).length == -1) return -1;
        for (int v = 0; v < h.raw_vertex_count(); ++v)
            if (acyclic_without(h, v)) return v;
        return -1;
    };
    int hub = find_hub();
    const bool tree_declared = g.declared_tree_present();

    // Basepoint: declared, else first degree-1 vertex, else a fresh
    // subdivision point on a deleted or cycle edge (next to the hub when
    // one exists, so the hub construction can delete the new edge).
    int base = -1;
    if (g.declared_basepoint()) {
        base = *g.declared_basepoint();
    } else {
        for (int v = 0; v < h.raw_vertex_count() && base == -1; ++v)
            if (h.degree(v) == 1) base = v;
        if (base == -1) {
            int pick = -1;
            if (tree_declared) {
                for (int e = 0; e < h.raw_edge_count() && pick == -1; ++e)
                    if (h.edge_rec(e).declared_deleted) pick = e;
            } else {
                for (int e = 0; e < h.raw_edge_count() && pick == -1; ++e) {
                    if (is_bridge(h, e)) continue;
                    if (hub == -1 || h.edge_rec(e).u == hub || h.edge_rec(e).v == hub)
                        pick = e;
                }
                for (int e = 0; e < h.raw_edge_count() && pick == -1; ++e)
                    if (!is_bridge(h, e)) pick = e;
            }
            if (pick == -1) throw InternalError("no leaf and no cycle edge");
            base = s.split_edge(pick);
            hub = find_hub();
        }
    }

    // Declared tree: honored verbatim.
    if (tree_declared) {
        std::vector<char> mask(h.raw_edge_count(), 1);
        for (int e = 0; e < h.raw_edge_count(); ++e)
            mask[e] = h.edge_rec(e).declared_deleted ? 0 : 1;
        EmbeddedGraph out = s.take();
        out.finalize(base, mask);
        return out;
    }

    // Hub route: every deleted edge touches the hub, so no two deleted
    // edges are disjoint and the two-strand group is free.  Each deleted
    // edge is split once so that its far endpoint is a fresh leaf.
    if (hub != -1) {
        GraphSurgeon ts(h);
        auto& t = ts.graph();
        const int V = t.raw_vertex_count();
        std::vector<int> comp(V, -1);
        int ncomp = 0;
        for (int st = 0; st < V; ++st) {
            if (st == hub || comp[st] != -1) continue;
            ++ncomp;
            std::deque<int> q{st};
            comp[st] = ncomp;
            while (!q.empty()) {
                int a = q.front();
                q.pop_front();
                for (int f : t.vertex_rec(a).rot) {
                    const auto& fr = t.edge_rec(f);
                    int b = fr.u == a ? fr.v : fr.u;
                    if (b == hub || comp[b] != -1) continue;
                    comp[b] = ncomp;
                    q.push_back(b);
                }
            }
        }
        std::vector<int> kept(ncomp + 1, -1);
        std::vector<int> extra;
        for (int f : t.vertex_rec(hub).rot) {
            const auto& fr = t.edge_rec(f);
            int b = fr.u == hub ? fr.v : fr.u;
            bool base_conflict = (b == base && t.degree(base) >= 2);
            if (kept[comp[b]] == -1 && !base_conflict) kept[comp[b]] = f;
            else extra.push_back(f);
        }
        bool feasible = true;
        for (int c = 1; c <= ncomp; ++c)
            if (kept[c] == -1) feasible = false;
        if (feasible) {
            std::set<int> deleted_halves;
            std::sort(extra.begin(), extra.end());
            for (int f : extra) {
                const auto& fr = t.edge_rec(f);
                int b = fr.u == hub ? fr.v : fr.u;
                if (t.degree(b) == 2) {  // far endpoint is already a leaf-to-be
                    deleted_halves.insert(f);
                    continue;
                }
                bool hub_is_u = fr.u == hub;
                ts.split_edge(f, hub_is_u ? 0 : 1);
                deleted_halves.insert(hub_is_u ? f : t.raw_edge_count() - 1);
            }
            std::vector<char> mask(t.raw_edge_count(), 1);
            for (int f : deleted_halves) mask[f] = 0;
            try {
                EmbeddedGraph out = ts.take();
                out.finalize(base, mask);
                if (out.assumption_holds()) return out;
            } catch (const GraphError&) {
                // fall through to the generic route
            }
        }
    }

    // Generic route: depth-first tree from the basepoint in rotation order,
    // keeping the root a leaf, then leaf surgery on deleted edges.
    const int V = h.raw_vertex_count();
    std::vector<char> mask(h.raw_edge_count(), 0);
    std::vector<char> seen(V, 0);
    struct Frame {
        int v;
        int pe;
        size_t next = 0;
    };
    std::vector<Frame> stack{{base, -1, 0}};
    seen[base] = 1;
    bool root_done = false;
    while (!stack.empty()) {
        Frame f = stack.back();
        const auto& rot = h.vertex_rec(f.v).rot;
        size_t start = 0;
        if (f.pe >= 0)
            for (size_t i = 0; i < rot.size(); ++i)
                if (rot[i] == f.pe) start = i + 1;
        bool descended = false;
        while (f.next < rot.size()) {
            size_t slot = (start + f.next) % rot.size();
            ++f.next;
            int e = rot[slot];
            if (e == f.pe) continue;
            if (f.v == base && root_done) continue;
            const auto& er = h.edge_rec(e);
            int w = er.u == f.v ? er.v : er.u;
            if (seen[w]) continue;
            seen[w] = 1;
            mask[e] = 1;
            if (f.v == base) root_done = true;
            stack.back().next = f.next;
            stack.push_back({w, e, 0});
            descended = true;
            break;
        }
        if (!descended) stack.pop_back();
    }
    for (int v = 0; v < V; ++v)
        if (!seen[v])
            throw GraphError("basepoint '" + h.vertex_rec(base).name +
                             "' cannot root a spanning tree in which it is a leaf");

    auto tree_deg = [&](int v) {
        int td = 0;
        for (int e2 : h.vertex_rec(v).rot) td += mask[e2] ? 1 : 0;
        return td;
    };
    auto endpoint_good = [&](int v) {
        if (tree_deg(v) != 1) return false;
        return v == base || h.degree(v) == 2;
    };
    std::deque<int> work;
    for (int e = 0; e < h.raw_edge_count(); ++e)
        if (!mask[e]) work.push_back(e);
    while (!work.empty()) {
        int e = work.front();
        work.pop_front();
        const auto& er = h.edge_rec(e);
        int bad_side = !endpoint_good(er.u) ? 0 : (!endpoint_good(er.v) ? 1 : -1);
        if (bad_side == -1) continue;
        s.split_edge(e, bad_side == 0 ? 1 : 0);
        mask.resize(h.raw_edge_count(), 0);
        int half_near = bad_side == 0 ? e : h.raw_edge_count() - 1;
        int half_far = bad_side == 0 ? h.raw_edge_count() - 1 : e;
        mask[half_near] = 1;  // the bad endpoint joins the tree
        mask[half_far] = 0;   // the new leaf keeps the deleted edge
        work.push_back(half_far);
    }

    EmbeddedGraph out = s.take();
    out.finalize(base, mask);
    return out;
}

}  // namespace gbg
