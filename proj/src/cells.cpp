#include "gbg/cells.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gbg {

CubeCell::CubeCell(std::vector<Atom> a) : atoms(std::move(a)) {
    std::sort(atoms.begin(), atoms.end());
}

int CubeCell::dim() const {
    int d = 0;
    for (const Atom& a : atoms) d += a.is_edge() ? 1 : 0;
    return d;
}

bool CubeCell::contains(Atom a) const {
    return std::binary_search(atoms.begin(), atoms.end(), a);
}

CubeCell CubeCell::replaced(Atom from, Atom to) const {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) out.push_back(a == from ? to : a);
    return CubeCell(std::move(out));
}

std::string cell_to_string(const EmbeddedGraph& g, const CubeCell& c) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const Atom& a : c.atoms) {
        if (!first) out << ",";
        first = false;
        if (a.is_edge()) {
            int e = a.edge_index();
            out << "[" << g.tau(e) << "," << g.iota(e) << "]";
        } else {
            out << a.vnum();
        }
    }
    out << "}";
    return out.str();
}

int edge_between(const EmbeddedGraph& g, int vnum1, int vnum2) {
    for (int e = 0; e < g.ne(); ++e)
        if ((g.iota(e) == vnum1 && g.tau(e) == vnum2) ||
            (g.iota(e) == vnum2 && g.tau(e) == vnum1))
            return e;
    return -1;
}

CubeCell make_cell(const EmbeddedGraph& g, const std::vector<int>& vertex_nums,
                   const std::vector<std::pair<int, int>>& edges_by_endpoints) {
    std::vector<Atom> atoms;
    for (int v : vertex_nums) atoms.push_back(Atom::vertex(v));
    for (auto [a, b] : edges_by_endpoints) {
        int e = edge_between(g, a, b);
        if (e == -1)
            throw GraphError("no edge between " + std::to_string(a) + " and " +
                             std::to_string(b));
        atoms.push_back(Atom::edge(g, e));
    }
    return CubeCell(std::move(atoms));
}

bool is_valid_cell(const EmbeddedGraph& g, const CubeCell& c) {
    std::vector<int> covered;
    for (const Atom& a : c.atoms) {
        if (a.is_edge()) {
            int e = a.edge_index();
            covered.push_back(g.iota(e));
            covered.push_back(g.tau(e));
        } else {
            covered.push_back(a.vnum());
        }
    }
    std::sort(covered.begin(), covered.end());
    return std::adjacent_find(covered.begin(), covered.end()) == covered.end();
}

bool is_blocked(const EmbeddedGraph& g, const CubeCell& c, int vnum) {
    if (vnum == 0) return true;
    int p = g.parent_num(vnum);
    for (const Atom& a : c.atoms) {
        if (a.is_edge()) {
            int e = a.edge_index();
            if (g.iota(e) == p || g.tau(e) == p) return true;
        } else if (a.vnum() == p) {
            return true;
        }
    }
    return false;
}

bool is_order_respecting(const EmbeddedGraph& g, const CubeCell& c, Atom edge_atom) {
    int e = edge_atom.edge_index();
    if (g.is_deleted(e)) return false;
    int t = g.tau(e), i = g.iota(e);
    for (const Atom& a : c.atoms) {
        if (a.is_edge()) continue;
        int v = a.vnum();
        if (t < v && v < i && g.parent_num(v) == t) return false;
    }
    return true;
}

MorseClass classify(const EmbeddedGraph& g, const CubeCell& c) {
    // Atoms are already in number order; the first unblocked vertex or
    // order-respecting edge decides.
    for (const Atom& a : c.atoms) {
        if (a.is_edge()) {
            if (is_order_respecting(g, c, a)) {
                Atom v = Atom::vertex(g.iota(a.edge_index()));
                return {MorseTag::Collapsible, c.replaced(a, v)};
            }
        } else {
            if (!is_blocked(g, c, a.vnum())) {
                Atom e = Atom::edge(g, g.edge_e(a.vnum()));
                return {MorseTag::Redundant, c.replaced(a, e)};
            }
        }
    }
    return {MorseTag::Critical, std::nullopt};
}

std::vector<CubeCell> enumerate_cells(const EmbeddedGraph& g, int n, int dim,
                                      size_t budget) {
    if (n < 1) throw GraphError("strand count must be at least 1");
    if (n > g.nv())
        throw GraphError("no cells: " + std::to_string(n) + " strands on " +
                         std::to_string(g.nv()) + " vertices");
    std::vector<CubeCell> out;
    if (dim < 0 || dim > n) return out;

    std::vector<Atom> universe;
    for (int v = 0; v < g.nv(); ++v) universe.push_back(Atom::vertex(v));
    for (int e = 0; e < g.ne(); ++e) universe.push_back(Atom::edge(g, e));
    std::sort(universe.begin(), universe.end());
    const int U = static_cast<int>(universe.size());

    std::vector<char> used(g.nv(), 0);
    std::vector<Atom> cur;
    cur.reserve(n);

    // Backtracking in atom order with closure-disjointness pruning.
    auto rec = [&](auto&& self, int next, int edges_left) -> void {
        int vertices_left = n - static_cast<int>(cur.size()) - edges_left;
        if (edges_left == 0 && vertices_left == 0) {
            out.emplace_back(cur);
            if (budget && out.size() > budget)
                throw BudgetError("cell budget exceeded while enumerating dimension " +
                                  std::to_string(dim));
            return;
        }
        if (U - next < edges_left + vertices_left) return;
        for (int k = next; k < U; ++k) {
            const Atom& a = universe[k];
            if (a.is_edge()) {
                if (edges_left == 0) continue;
                int e = a.edge_index();
                if (used[g.iota(e)] || used[g.tau(e)]) continue;
                used[g.iota(e)] = used[g.tau(e)] = 1;
                cur.push_back(a);
                self(self, k + 1, edges_left - 1);
                cur.pop_back();
                used[g.iota(e)] = used[g.tau(e)] = 0;
            } else {
                if (vertices_left == 0) continue;
                if (used[a.vnum()]) continue;
                used[a.vnum()] = 1;
                cur.push_back(a);
                self(self, k + 1, edges_left);
                cur.pop_back();
                used[a.vnum()] = 0;
            }
        }
    };
    rec(rec, 0, dim);
    return out;
}

std::vector<CubeCell> critical_cells(const EmbeddedGraph& g, int n, int dim,
                                     size_t budget) {
    std::vector<CubeCell> out;
    for (const CubeCell& c : enumerate_cells(g, n, dim, budget))
        if (classify(g, c).tag == MorseTag::Critical) out.push_back(c);
    return out;
}

CubeCell base_zero_cell(const EmbeddedGraph& g, int n) {
    std::vector<Atom> atoms;
    for (int v = 0; v < n; ++v) atoms.push_back(Atom::vertex(v));
    return CubeCell(std::move(atoms));
}

CubeCell r_step(const EmbeddedGraph& g, const CubeCell& c) {
    for (const Atom& a : c.atoms) {
        if (a.is_edge()) continue;
        if (!is_blocked(g, c, a.vnum()))
            return c.replaced(a, Atom::vertex(g.parent_num(a.vnum())));
    }
    return c;
}

CubeCell r_infinity(const EmbeddedGraph& g, const CubeCell& c) {
    CubeCell cur = c;
    for (;;) {
        CubeCell next = r_step(g, cur);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

// ---------------------------------------------------------------------------
// words

Word inverse_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back(Letter{it->cell, -it->sign});
    return out;
}

Word free_reduce(const Word& w) {
    Word out;
    for (const Letter& l : w) {
        if (!out.empty() && out.back().cell == l.cell && out.back().sign == -l.sign)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Word concat_reduced(const Word& a, const Word& b) {
    Word out = a;
    for (const Letter& l : b) {
        if (!out.empty() && out.back().cell == l.cell && out.back().sign == -l.sign)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::string word_to_string(const EmbeddedGraph& g, const Word& w) {
    if (w.empty()) return "1";
    std::ostringstream out;
    bool first = true;
    for (const Letter& l : w) {
        if (!first) out << " ";
        first = false;
        out << cell_to_string(g, l.cell);
        if (l.sign < 0) out << "^-1";
    }
    return out.str();
}

namespace {
Atom the_edge_atom(const CubeCell& c) {
    for (const Atom& a : c.atoms)
        if (a.is_edge()) return a;
    throw InternalError("expected a 1-cell");
}
}  // namespace

CubeCell letter_start(const EmbeddedGraph& g, const Letter& l) {
    Atom e = the_edge_atom(l.cell);
    int v = l.sign > 0 ? g.iota(e.edge_index()) : g.tau(e.edge_index());
    return l.cell.replaced(e, Atom::vertex(v));
}

CubeCell letter_end(const EmbeddedGraph& g, const Letter& l) {
    Atom e = the_edge_atom(l.cell);
    int v = l.sign > 0 ? g.tau(e.edge_index()) : g.iota(e.edge_index());
    return l.cell.replaced(e, Atom::vertex(v));
}

bool is_edge_path(const EmbeddedGraph& g, const Word& w) {
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (letter_end(g, w[i]) != letter_start(g, w[i + 1])) return false;
    return true;
}

Word boundary_word(const EmbeddedGraph& g, const CubeCell& c2) {
    if (c2.dim() != 2) throw InternalError("boundary_word needs a square");
    Atom e1{}, e2{};
    bool got1 = false;
    for (const Atom& a : c2.atoms) {
        if (!a.is_edge()) continue;
        if (!got1) {
            e1 = a;
            got1 = true;
        } else {
            e2 = a;
        }
    }
    auto vert = [&](int vnum) { return Atom::vertex(vnum); };
    CubeCell bottom = c2.replaced(e2, vert(g.iota(e2.edge_index())));
    CubeCell right = c2.replaced(e1, vert(g.tau(e1.edge_index())));
    CubeCell top = c2.replaced(e2, vert(g.tau(e2.edge_index())));
    CubeCell left = c2.replaced(e1, vert(g.iota(e1.edge_index())));
    return Word{{bottom, +1}, {right, +1}, {top, -1}, {left, -1}};
}

// ---------------------------------------------------------------------------
// vector notation

std::string essential_letter(const EmbeddedGraph& g, int vnum) {
    int index = -1, seen = 0;
    for (int v = 0; v < g.nv(); ++v) {
        if (g.tree_degree(v) < 3) continue;
        if (v == vnum) index = seen;
        ++seen;
    }
    if (index < 0) throw NotationError("vertex " + std::to_string(vnum) + " is not essential");
    std::string out;
    for (int k = index;;) {
        out.insert(out.begin(), static_cast<char>('A' + k % 26));
        k = k / 26 - 1;
        if (k < 0) break;
    }
    return out;
}

int essential_vertex_of_letter(const EmbeddedGraph& g, const std::string& letter) {
    int index = 0;
    for (char ch : letter) {
        if (ch < 'A' || ch > 'Z') throw NotationError("bad essential-vertex letter");
        index = index * 26 + (ch - 'A') + 1;
    }
    --index;
    int seen = 0;
    for (int v = 0; v < g.nv(); ++v) {
        if (g.tree_degree(v) < 3) continue;
        if (seen == index) return v;
        ++seen;
    }
    throw NotationError("no essential vertex named " + letter);
}

CubeCell realize_notation(const EmbeddedGraph& g, const VectorNotation& vn) {
    std::vector<Atom> atoms;
    std::vector<char> edge_covered(g.nv(), 0);
    auto add_edge_atom = [&](int e) {
        atoms.push_back(Atom::edge(g, e));
        edge_covered[g.iota(e)] = edge_covered[g.tau(e)] = 1;
    };
    for (int e : vn.del_edges) {
        if (!g.is_deleted(e)) throw NotationError("edge term must be a deleted edge");
        add_edge_atom(e);
    }
    for (const VectorTerm& t : vn.terms) {
        int degs = g.tree_degree(t.vertex);
        if (degs < 3) throw NotationError("term vertex is not essential");
        if (static_cast<int>(t.counts.size()) != degs - 1)
            throw NotationError("term vector has the wrong arity");
        if (t.dir < 1 || t.dir > degs - 1 || t.counts[t.dir - 1] < 1)
            throw NotationError("term edge direction is empty");
        int e = g.dir_edge(t.vertex, t.dir);
        add_edge_atom(e);
        int top = g.iota(e);
        for (int k = 1; k < t.counts[t.dir - 1]; ++k) {
            int v = top + k;
            if (v >= g.nv() || !g.in_subtree(top, v))
                throw NotationError("stack does not fit above the edge");
            atoms.push_back(Atom::vertex(v));
        }
        for (int j = 1; j <= degs - 1; ++j) {
            if (j == t.dir) continue;
            int k = t.counts[j - 1];
            if (k == 0) continue;
            int c0 = g.dir_child(t.vertex, j);
            for (int s = 0; s < k; ++s) {
                int v = c0 + s;
                if (v >= g.nv() || !g.in_subtree(c0, v))
                    throw NotationError("cluster does not fit in its direction");
                atoms.push_back(Atom::vertex(v));
            }
        }
    }
    int placed = 0;
    for (int v = 0; v < g.nv() && placed < vn.base_count; ++v) {
        if (edge_covered[v]) continue;
        atoms.push_back(Atom::vertex(v));
        ++placed;
    }
    if (placed < vn.base_count) throw NotationError("basepoint cluster does not fit");
    CubeCell c(std::move(atoms));
    if (!is_valid_cell(g, c)) throw NotationError("terms overlap");
    return c;
}

VectorNotation vector_notation(const EmbeddedGraph& g, const CubeCell& c) {
    VectorNotation vn;
    std::vector<int> loose;
    for (const Atom& a : c.atoms)
        if (!a.is_edge()) loose.push_back(a.vnum());
    auto take = [&](int v) {
        auto it = std::find(loose.begin(), loose.end(), v);
        if (it == loose.end()) return false;
        loose.erase(it);
        return true;
    };

    for (const Atom& a : c.atoms) {
        if (!a.is_edge()) continue;
        int e = a.edge_index();
        if (g.is_deleted(e)) {
            vn.del_edges.push_back(e);
            continue;
        }
        int X = g.tau(e);
        if (g.tree_degree(X) < 3)
            throw NotationError("tree edge not rooted at an essential vertex");
        int i = g.dir_of_tree_edge_at(X, e);
        if (i < 1) throw NotationError("edge points at the root");
        VectorTerm t{X, i, std::vector<int>(g.tree_degree(X) - 1, 0)};
        t.counts[i - 1] = 1;
        for (int v = g.iota(e) + 1; v < g.nv() && g.in_subtree(g.iota(e), v); ++v) {
            if (!take(v)) break;
            ++t.counts[i - 1];
        }
        for (int j = 1; j <= g.tree_degree(X) - 1; ++j) {
            if (j == i) continue;
            int c0 = g.dir_child(X, j);
            for (int v = c0; v < g.nv() && g.in_subtree(c0, v); ++v) {
                if (!take(v)) break;
                ++t.counts[j - 1];
            }
        }
        vn.terms.push_back(std::move(t));
    }
    std::sort(vn.terms.begin(), vn.terms.end());
    std::sort(vn.del_edges.begin(), vn.del_edges.end(), [&](int a, int b) {
        return std::pair(g.iota(a), a) < std::pair(g.iota(b), b);
    });
    vn.base_count = static_cast<int>(loose.size());

    if (realize_notation(g, vn) != c)
        throw NotationError("cell " + cell_to_string(g, c) + " has no vector-notation name");
    return vn;
}

std::string notation_to_string(const EmbeddedGraph& g, const VectorNotation& vn) {
    std::ostringstream out;
    bool first = true;
    auto sep = [&] {
        if (!first) out << "+";
        first = false;
    };
    for (const VectorTerm& t : vn.terms) {
        sep();
        out << essential_letter(g, t.vertex) << t.dir << "[";
        for (size_t j = 0; j < t.counts.size(); ++j) {
            if (j) out << ",";
            out << t.counts[j];
        }
        out << "]";
    }
    for (int e : vn.del_edges) {
        sep();
        out << g.edge_name(e);
    }
    if (vn.base_count > 0) {
        sep();
        out << vn.base_count << "*";
    }
    if (first) out << "0*";
    return out.str();
}

namespace {
std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}
}  // namespace

VectorNotation parse_notation(const EmbeddedGraph& g, const std::string& text) {
    VectorNotation vn;
    std::string rest = text;
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= rest.size()) {
        size_t plus = rest.find('+', pos);
        if (plus == std::string::npos) {
            parts.push_back(strip(rest.substr(pos)));
            break;
        }
        parts.push_back(strip(rest.substr(pos, plus - pos)));
        pos = plus + 1;
    }
    for (const std::string& part : parts) {
        if (part.empty()) throw NotationError("empty term in '" + text + "'");
        if (part.back() == '*') {
            vn.base_count = std::stoi(part.substr(0, part.size() - 1));
            continue;
        }
        size_t letters = 0;
        while (letters < part.size() && std::isupper(static_cast<unsigned char>(part[letters])))
            ++letters;
        size_t bracket = part.find('[');
        if (letters > 0 && bracket != std::string::npos && part.back() == ']') {
            VectorTerm t;
            t.vertex = essential_vertex_of_letter(g, part.substr(0, letters));
            t.dir = std::stoi(part.substr(letters, bracket - letters));
            std::string body = part.substr(bracket + 1, part.size() - bracket - 2);
            std::istringstream in(body);
            std::string tok;
            while (std::getline(in, tok, ',')) t.counts.push_back(std::stoi(strip(tok)));
            vn.terms.push_back(std::move(t));
            continue;
        }
        int e = g.find_edge(part);
        if (e == -1) throw NotationError("unknown edge '" + part + "'");
        vn.del_edges.push_back(e);
    }
    std::sort(vn.terms.begin(), vn.terms.end());
    std::sort(vn.del_edges.begin(), vn.del_edges.end(), [&](int a, int b) {
        return std::pair(g.iota(a), a) < std::pair(g.iota(b), b);
    });
    return vn;
}

std::string generator_name(const EmbeddedGraph& g, const CubeCell& c) {
    try {
        return notation_to_string(g, vector_notation(g, c));
    } catch (const NotationError&) {
        return cell_to_string(g, c);
    }
}

}  // namespace gbg
