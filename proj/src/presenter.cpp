#include "gbg/presenter.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <unordered_map>

namespace gbg {

namespace {

struct SquareParts {
    Atom e1{}, e2{};         // edge atoms in iota order
    std::vector<int> verts;  // vertex numbers
};

SquareParts split_square(const CubeCell& square) {
    SquareParts p;
    bool got1 = false;
    for (const Atom& a : square.atoms) {
        if (a.is_edge()) {
            if (!got1) {
                p.e1 = a;
                got1 = true;
            } else {
                p.e2 = a;
            }
        } else {
            p.verts.push_back(a.vnum());
        }
    }
    return p;
}

}  // namespace

Word relative_flow(const EmbeddedGraph& g, const CostQuery& q) {
    std::vector<Atom> cfg_atoms;
    for (int v : q.vertices) cfg_atoms.push_back(Atom::vertex(v));
    cfg_atoms.push_back(Atom::edge(g, q.edge));
    CubeCell cfg(cfg_atoms);
    if (!is_valid_cell(g, cfg)) throw GraphError("cost query atoms overlap");
    if (is_order_respecting(g, cfg, Atom::edge(g, q.edge)))
        throw GraphError("cost query edge must be non-order-respecting");

    int held = q.held(g);
    std::vector<int> verts = q.vertices;
    std::sort(verts.begin(), verts.end());
    Word path;
    for (;;) {
        std::vector<Atom> atoms;
        for (int v : verts) atoms.push_back(Atom::vertex(v));
        atoms.push_back(Atom::edge(g, q.edge));
        CubeCell blocked_cfg(atoms);
        int mover = -1;
        for (int v : verts)
            if (!is_blocked(g, blocked_cfg, v)) {
                mover = v;
                break;
            }
        if (mover == -1) break;
        std::vector<Atom> step;
        for (int v : verts)
            if (v != mover) step.push_back(Atom::vertex(v));
        step.push_back(Atom::edge(g, g.edge_e(mover)));
        step.push_back(Atom::vertex(held));
        path.push_back(Letter{CubeCell(std::move(step)), +1});
        *std::find(verts.begin(), verts.end(), mover) = g.parent_num(mover);
        std::sort(verts.begin(), verts.end());
    }
    return path;
}

Word cost(Rewriter& rw, const CostQuery& q) {
    return rw.m_infinity(relative_flow(rw.graph(), q));
}

// ---------------------------------------------------------------------------
// closed forms

namespace {

using Vec = std::vector<int>;  // entry j-1 = strands in direction j

int vec_total(const Vec& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

int first_nonzero_dir(const Vec& v) {
    for (size_t j = 0; j < v.size(); ++j)
        if (v[j] > 0) return static_cast<int>(j) + 1;
    return -1;
}

// Iterated decrement of the first non-zero entry.
std::optional<Vec> vec_minus(Vec v, int times) {
    for (int t = 0; t < times; ++t) {
        int d = first_nonzero_dir(v);
        if (d == -1) return std::nullopt;
        --v[d - 1];
    }
    return v;
}

enum class LetterFate { Keep, Drop, Fail };

// Realizes an X_d[counts] letter with the basepoint filler and keeps it only
// when it is critical (collapsible letters are dropped from costs).
LetterFate append_letter(const EmbeddedGraph& g, int n, int X, int d, Vec counts,
                         Word& out) {
    if (d < 1 || d > static_cast<int>(counts.size()) || counts[d - 1] < 1)
        return LetterFate::Fail;
    VectorNotation vn;
    vn.terms.push_back(VectorTerm{X, d, std::move(counts)});
    vn.base_count = n - vec_total(vn.terms[0].counts);
    if (vn.base_count < 0) return LetterFate::Fail;
    CubeCell cell;
    try {
        cell = realize_notation(g, vn);
    } catch (const NotationError&) {
        return LetterFate::Fail;
    }
    switch (classify(g, cell).tag) {
        case MorseTag::Critical:
            out.push_back(Letter{cell, +1});
            return LetterFate::Keep;
        case MorseTag::Collapsible:
            return LetterFate::Drop;
        case MorseTag::Redundant:
            return LetterFate::Fail;
    }
    return LetterFate::Fail;
}

// Product over the draining cluster: the remaining vector plus a fixed pile.
std::optional<Word> cluster_product(const EmbeddedGraph& g, int n, int X, const Vec& start,
                                    int count, int pile_dir, int pile_size) {
    Word out;
    if (pile_dir < 1 && count > 0) return std::nullopt;
    for (int l = 0; l < count; ++l) {
        auto vec = vec_minus(start, l);
        if (!vec) return std::nullopt;
        int d = first_nonzero_dir(*vec);
        if (d == -1) return std::nullopt;
        Vec counts = *vec;
        counts[pile_dir - 1] += pile_size;
        if (append_letter(g, n, X, d, std::move(counts), out) == LetterFate::Fail)
            return std::nullopt;
    }
    return out;
}

// Product over a cluster that drains across a lower branch vertex C.
std::optional<Word> branch_product(const EmbeddedGraph& g, int n, int C, int dCA,
                                   int dCB, int cluster_size, int pile_size) {
    Word out;
    if (dCA < 1 || dCB < 1) return std::nullopt;
    for (int l = 0; l < cluster_size; ++l) {
        Vec counts(g.tree_degree(C) - 1, 0);
        counts[dCA - 1] = cluster_size - l;
        counts[dCB - 1] += pile_size;
        if (append_letter(g, n, C, dCA, std::move(counts), out) == LetterFate::Fail)
            return std::nullopt;
    }
    return out;
}

}  // namespace

std::optional<Word> cost_closed_form(const EmbeddedGraph& g, const CostQuery& q,
                                     const CubeCell& context) {
    if (context.dim() != 2) return std::nullopt;
    SquareParts p = split_square(context);
    const int n = static_cast<int>(q.vertices.size()) + 1;

    // The query edge is one side of the square; the moving corner vertex is
    // an endpoint of the other side.
    Atom e2a{}, e1a{};
    if (p.e1.edge_index() == q.edge) {
        e2a = p.e1;
        e1a = p.e2;
    } else if (p.e2.edge_index() == q.edge) {
        e2a = p.e2;
        e1a = p.e1;
    } else {
        return std::nullopt;
    }
    const int e1 = e1a.edge_index(), e2 = e2a.edge_index();
    int alpha = -1;
    {
        std::vector<int> qv = q.vertices;
        std::sort(qv.begin(), qv.end());
        for (int cand : {g.iota(e1), g.tau(e1)}) {
            std::vector<int> want = p.verts;
            want.push_back(cand);
            std::sort(want.begin(), want.end());
            if (want == qv) {
                alpha = cand;
                break;
            }
        }
        if (alpha == -1) return std::nullopt;
    }
    const int beta = q.held(g);
    const bool del1 = g.is_deleted(e1), del2 = g.is_deleted(e2);

    if (del1 && del2) {
        // Vertices sit at the basepoint; only the corner vertex moves.
        for (size_t i = 0; i < p.verts.size(); ++i)
            if (p.verts[i] != static_cast<int>(i)) return std::nullopt;
        if (alpha < beta || beta == 0) return Word{};
        int C = g.meet(alpha, beta);
        if (C == alpha || C == beta) return std::nullopt;
        int i = g.direction(C, beta), j = g.direction(C, alpha);
        if (i < 1 || j < 1) return std::nullopt;
        Word out;
        Vec counts(g.tree_degree(C) - 1, 0);
        counts[i - 1] += 1;
        counts[j - 1] += 1;
        if (append_letter(g, n, C, j, std::move(counts), out) == LetterFate::Fail)
            return std::nullopt;
        return out;
    }

    VectorNotation vn;
    try {
        vn = vector_notation(g, context);
    } catch (const NotationError&) {
        return std::nullopt;
    }
    auto term_of = [&](int e) -> const VectorTerm* {
        for (const VectorTerm& t : vn.terms)
            if (g.dir_edge(t.vertex, t.dir) == e) return &t;
        return nullptr;
    };

    if (!del1 && !del2) {
        const VectorTerm* ta = term_of(e1);
        const VectorTerm* tb = term_of(e2);
        if (!ta || !tb) return std::nullopt;
        int A = ta->vertex, B = tb->vertex;
        int asz = vec_total(ta->counts), bsz = vec_total(tb->counts);
        int m = g.meet(A, B);
        if (m == A) {
            int dAB = g.direction(A, B);
            if (alpha == g.iota(e1))
                return cluster_product(g, n, A, ta->counts, asz, dAB, bsz);
            auto start = ta->counts;
            if (start[ta->dir - 1] < 1) return std::nullopt;
            --start[ta->dir - 1];
            return cluster_product(g, n, A, start, asz - 1, dAB, bsz);
        }
        if (m == B) return Word{};
        if (A > B) return branch_product(g, n, m, g.direction(m, A), g.direction(m, B),
                                         asz, bsz);
        return Word{};
    }

    if (del1 && !del2) {
        const VectorTerm* tb = term_of(e2);
        if (!tb) return std::nullopt;
        int B = tb->vertex;
        int bsz = vec_total(tb->counts);
        int m = g.meet(alpha, B);
        if (m == B || alpha < B) return Word{};
        if (m == alpha) return std::nullopt;
        int dCa = g.direction(m, alpha), dCB = g.direction(m, B);
        if (dCa < 1 || dCB < 1) return std::nullopt;
        Word out;
        Vec counts(g.tree_degree(m) - 1, 0);
        counts[dCB - 1] += bsz;
        counts[dCa - 1] += 1;
        if (append_letter(g, n, m, dCa, std::move(counts), out) == LetterFate::Fail)
            return std::nullopt;
        return out;
    }

    // e1 in the tree, e2 deleted
    {
        const VectorTerm* ta = term_of(e1);
        if (!ta) return std::nullopt;
        int A = ta->vertex;
        int asz = vec_total(ta->counts);
        int m = g.meet(A, beta);
        if (m == A) {
            int dAb = g.direction(A, beta);
            if (dAb < 1) return std::nullopt;
            if (alpha == g.iota(e1))
                return cluster_product(g, n, A, ta->counts, asz, dAb, 1);
            auto start = ta->counts;
            if (start[ta->dir - 1] < 1) return std::nullopt;
            --start[ta->dir - 1];
            return cluster_product(g, n, A, start, asz - 1, dAb, 1);
        }
        if (A < beta) return Word{};
        if (m == beta) return std::nullopt;  // degenerate pile direction
        return branch_product(g, n, m, g.direction(m, A), g.direction(m, beta), asz, 1);
    }
}

// ---------------------------------------------------------------------------
// relators

namespace {

Word arm_word(const Arm& a) {
    Word w = a.cost_start;
    w = concat_reduced(w, Word{{a.stable, +1}});
    w = concat_reduced(w, inverse_word(a.cost_end));
    return w;
}

}  // namespace

Relator relator_for(Rewriter& rw, const CubeCell& square, bool use_closed_forms) {
    const EmbeddedGraph& g = rw.graph();
    if (classify(g, square).tag != MorseTag::Critical)
        throw GraphError("relator_for needs a critical 2-cell");

    Relator rel;
    rel.square = square;
    rel.word = rw.m_infinity(boundary_word(g, square));

    SquareParts p = split_square(square);
    const bool closed = use_closed_forms && g.leaf_deleted_edges();

    auto compute_cost = [&](const CostQuery& q) -> Word {
        if (closed)
            if (auto w = cost_closed_form(g, q, square)) return *w;
        return cost(rw, q);
    };
    auto face_arm = [&](Atom keep, Atom drop, bool drop_at_iota) -> Arm {
        int endv = drop_at_iota ? g.iota(drop.edge_index()) : g.tau(drop.edge_index());
        CubeCell face = square.replaced(drop, Atom::vertex(endv));
        std::vector<int> verts = p.verts;
        verts.push_back(endv);
        CostQuery qs{verts, keep.edge_index(), true};
        CostQuery qe{verts, keep.edge_index(), false};
        return Arm{compute_cost(qs), r_infinity(g, face), compute_cost(qe)};
    };

    rel.arms[0] = face_arm(p.e1, p.e2, true);   // bottom
    rel.arms[1] = face_arm(p.e2, p.e1, false);  // right
    rel.arms[2] = face_arm(p.e1, p.e2, false);  // top
    rel.arms[3] = face_arm(p.e2, p.e1, true);   // left

    Word assembled = arm_word(rel.arms[0]);
    assembled = concat_reduced(assembled, arm_word(rel.arms[1]));
    assembled = concat_reduced(assembled, inverse_word(arm_word(rel.arms[2])));
    assembled = concat_reduced(assembled, inverse_word(arm_word(rel.arms[3])));
    if (assembled != rel.word)
        throw InternalError("arm assembly disagrees with the rewritten relator for " +
                            cell_to_string(g, square));
    return rel;
}

Word octagon_relator(const EmbeddedGraph& g, int e1, int e2) {
    if (!g.is_deleted(e1) || !g.is_deleted(e2))
        throw GraphError("octagon needs two deleted edges");
    if (g.iota(e1) > g.iota(e2)) std::swap(e1, e2);
    CubeCell square = CubeCell({Atom::edge(g, e1), Atom::edge(g, e2)});
    if (!is_valid_cell(g, square) || classify(g, square).tag != MorseTag::Critical)
        throw GraphError("octagon needs a critical pair of deleted edges");

    auto eface = [&](int e) {
        VectorNotation vn;
        vn.del_edges.push_back(e);
        vn.base_count = 1;
        return realize_notation(g, vn);
    };
    auto corner = [&](int mover, int held) -> Word {
        if (mover < held || held == 0) return Word{};
        int A = g.meet(mover, held);
        int i = g.direction(A, mover), j = g.direction(A, held);
        if (i < 1 || j < 1)
            throw InternalError("octagon corner with a degenerate direction");
        VectorNotation vn;
        Vec counts(g.tree_degree(A) - 1, 0);
        counts[i - 1] += 1;
        counts[j - 1] += 1;
        vn.terms.push_back(VectorTerm{A, i, counts});
        vn.base_count = 0;
        CubeCell cell = realize_notation(g, vn);
        if (classify(g, cell).tag != MorseTag::Critical)
            throw InternalError("octagon corner label is not critical");
        return Word{{cell, +1}};
    };

    int i1 = g.iota(e1), t1 = g.tau(e1), i2 = g.iota(e2), t2 = g.tau(e2);
    CubeCell f1 = eface(e1), f2 = eface(e2);
    auto arm = [&](const Word& cs, const CubeCell& f, const Word& ce) {
        Word w = cs;
        w = concat_reduced(w, Word{{f, +1}});
        w = concat_reduced(w, inverse_word(ce));
        return w;
    };
    Word bottom = arm(corner(i2, i1), f1, corner(i2, t1));
    Word right = arm(corner(t1, i2), f2, corner(t1, t2));
    Word top = arm(corner(t2, i1), f1, corner(t2, t1));
    Word left = arm(corner(i1, i2), f2, corner(i1, t2));

    Word out = bottom;
    out = concat_reduced(out, right);
    out = concat_reduced(out, inverse_word(top));
    out = concat_reduced(out, inverse_word(left));
    return out;
}

// ---------------------------------------------------------------------------
// canonical cyclic words

GWord cyclic_reduce(GWord w) {
    // free reduction first
    GWord r;
    for (auto& l : w) {
        if (!r.empty() && r.back().first == l.first && r.back().second == -l.second)
            r.pop_back();
        else
            r.push_back(l);
    }
    while (r.size() >= 2 && r.front().first == r.back().first &&
           r.front().second == -r.back().second) {
        r.erase(r.begin());
        r.pop_back();
    }
    return r;
}

namespace {
GWord invert_gword(const GWord& w) {
    GWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->first, -it->second});
    return out;
}
bool gword_less(const GWord& a, const GWord& b) {
    auto key = [](const std::pair<int, int>& l) {
        return std::pair<int, int>(l.first, l.second < 0);
    };
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](auto& x, auto& y) { return key(x) < key(y); });
}
}  // namespace

GWord canonical_cyclic(GWord w) {
    w = cyclic_reduce(std::move(w));
    if (w.empty()) return w;
    GWord best = w;
    for (const GWord& base : {w, invert_gword(w)}) {
        GWord rot = base;
        for (size_t k = 0; k < base.size(); ++k) {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            if (gword_less(rot, best)) best = rot;
        }
    }
    return best;
}

bool commutator_form_check(const GWord& relator) {
    GWord w = cyclic_reduce(relator);
    const size_t L = w.size();
    if (L == 0) return true;
    if (L % 2 != 0 || L < 4) return false;
    auto try_rotations = [&](GWord base) {
        for (size_t k = 0; k < L; ++k) {
            for (size_t a = 1; a + 1 < L; ++a) {
                if (L < 2 * a + 2) break;
                size_t b = L / 2 - a;
                if (b < 1) continue;
                GWord x(base.begin(), base.begin() + a);
                GWord y(base.begin() + a, base.begin() + a + b);
                GWord xi = invert_gword(x), yi = invert_gword(y);
                bool ok = std::equal(xi.begin(), xi.end(), base.begin() + a + b) &&
                          std::equal(yi.begin(), yi.end(), base.begin() + a + b + a);
                if (ok) return true;
            }
            std::rotate(base.begin(), base.begin() + 1, base.end());
        }
        return false;
    };
    return try_rotations(w) || try_rotations(invert_gword(w));
}

// ---------------------------------------------------------------------------
// presentations

Presentation presentation(const EmbeddedGraph& g, int n, const PresentOptions& opts) {
    if (!g.finalized()) throw GraphError("presentation needs a finalized graph");
    if (n < 1) throw GraphError("strand count must be at least 1");
    if (n > g.nv()) throw GraphError("more strands than vertices");

    CubeCell base = base_zero_cell(g, n);
    for (const CubeCell& c0 : enumerate_cells(g, n, 0, opts.budget))
        if (r_infinity(g, c0) != base)
            throw GraphError("discretized configuration space is disconnected");

    Presentation p;
    p.graph_name = g.name;
    p.strands = n;
    std::unordered_map<CubeCell, int, CellHash> gen_index;
    for (const CubeCell& c : critical_cells(g, n, 1, opts.budget)) {
        gen_index.emplace(c, static_cast<int>(p.gens.size()));
        p.gens.push_back(Presentation::Gen{c, generator_name(g, c)});
    }

    std::vector<CubeCell> squares = critical_cells(g, n, 2, opts.budget);
    std::vector<GWord> rels(squares.size());
    const bool octagon_applies = opts.check_octagon && n == 2 && opts.use_closed_forms &&
                                 g.leaf_deleted_edges();

    auto to_gword = [&](const Word& w) {
        GWord out;
        for (const Letter& l : w) {
            auto it = gen_index.find(l.cell);
            if (it == gen_index.end())
                throw InternalError("relator letter is not a critical 1-cell: " +
                                    cell_to_string(g, l.cell));
            out.push_back({it->second, l.sign});
        }
        return out;
    };

    auto run_chunk = [&](size_t begin, size_t end) {
        Rewriter rw(g);
        for (size_t i = begin; i < end; ++i) {
            Relator rel = relator_for(rw, squares[i], opts.use_closed_forms);
            if (octagon_applies) {
                SquareParts sp = split_square(squares[i]);
                Word oct = octagon_relator(g, sp.e1.edge_index(), sp.e2.edge_index());
                if (canonical_cyclic(to_gword(oct)) != canonical_cyclic(to_gword(rel.word)))
                    throw InternalError("octagon relator disagrees for " +
                                        cell_to_string(g, squares[i]));
            }
            rels[i] = canonical_cyclic(to_gword(rel.word));
        }
    };

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || squares.size() < 2) {
        run_chunk(0, squares.size());
    } else {
        size_t nsq = squares.size();
        size_t nthreads = std::min<size_t>(jobs, nsq);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(nthreads);
        for (size_t t = 0; t < nthreads; ++t) {
            size_t lo = nsq * t / nthreads, hi = nsq * (t + 1) / nthreads;
            pool.emplace_back([&, lo, hi, t] {
                try {
                    run_chunk(lo, hi);
                } catch (...) {
                    errs[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    p.rels = std::move(rels);
    return p;
}

// ---------------------------------------------------------------------------
// Tietze simplification

Presentation tietze_simplify(const Presentation& p) {
    std::vector<GWord> rels;
    for (const GWord& r : p.rels) {
        GWord c = cyclic_reduce(r);
        if (!c.empty()) rels.push_back(c);
    }
    std::vector<char> alive(p.gens.size(), 1);

    const size_t max_passes = p.gens.size() + 1;
    for (size_t pass = 0; pass < max_passes; ++pass) {
        int best_gen = -1;
        size_t best_rel = 0;
        for (size_t ri = 0; ri < rels.size(); ++ri) {
            std::map<int, int> occur;
            for (auto& l : rels[ri]) occur[l.first] += 1;
            for (auto& [gen, cnt] : occur) {
                if (cnt != 1) continue;
                if (best_gen == -1 || p.gens[gen].name < p.gens[best_gen].name) {
                    best_gen = gen;
                    best_rel = ri;
                }
            }
        }
        if (best_gen == -1) break;

        GWord r = rels[best_rel];
        size_t at = 0;
        while (r[at].first != best_gen) ++at;
        std::rotate(r.begin(), r.begin() + at, r.end());
        int sign = r[0].second;
        GWord w(r.begin() + 1, r.end());
        // g^sign * w = 1, so g = (w^-1)^sign
        GWord sub = sign > 0 ? invert_gword(w) : w;

        std::vector<GWord> next;
        for (size_t ri = 0; ri < rels.size(); ++ri) {
            if (ri == best_rel) continue;
            GWord out;
            for (auto& l : rels[ri]) {
                if (l.first != best_gen) {
                    out.push_back(l);
                    continue;
                }
                const GWord& piece = l.second > 0 ? sub : invert_gword(sub);
                out.insert(out.end(), piece.begin(), piece.end());
            }
            out = cyclic_reduce(out);
            if (!out.empty()) next.push_back(std::move(out));
        }
        rels = std::move(next);
        alive[best_gen] = 0;
    }

    Presentation out;
    out.graph_name = p.graph_name;
    out.strands = p.strands;
    std::vector<int> remap(p.gens.size(), -1);
    for (size_t i = 0; i < p.gens.size(); ++i) {
        if (!alive[i]) continue;
        remap[i] = static_cast<int>(out.gens.size());
        out.gens.push_back(p.gens[i]);
    }
    for (GWord& r : rels) {
        for (auto& l : r) {
            if (remap[l.first] < 0)
                throw InternalError("eliminated generator survived in a relator");
            l.first = remap[l.first];
        }
        out.rels.push_back(canonical_cyclic(r));
    }
    std::sort(out.rels.begin(), out.rels.end(),
              [](const GWord& a, const GWord& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return gword_less(a, b);
              });
    return out;
}

// ---------------------------------------------------------------------------
// abelianization (small dense Smith form)

namespace {

std::vector<mpz_class> dense_invariant_factors(std::vector<std::vector<mpz_class>> m) {
    std::vector<mpz_class> factors;
    if (m.empty() || m[0].empty()) return factors;
    const size_t R = m.size(), C = m[0].size();
    size_t t = 0;
    while (t < R && t < C) {
        // smallest nonzero entry into the pivot slot
        size_t pi = t, pj = t;
        bool found = false;
        mpz_class best_abs;
        for (size_t i = t; i < R; ++i)
            for (size_t j = t; j < C; ++j) {
                if (m[i][j] == 0) continue;
                mpz_class cand = abs(m[i][j]);
                if (!found || cand < best_abs) {
                    pi = i;
                    pj = j;
                    best_abs = cand;
                    found = true;
                }
            }
        if (!found) break;
        std::swap(m[t], m[pi]);
        for (size_t i = 0; i < R; ++i) std::swap(m[i][t], m[i][pj]);

        for (bool stable = false; !stable;) {
            stable = true;
            for (size_t i = t + 1; i < R; ++i) {
                if (m[i][t] == 0) continue;
                mpz_class q = m[i][t] / m[t][t];
                if (q != 0)
                    for (size_t j = t; j < C; ++j) m[i][j] -= q * m[t][j];
                if (m[i][t] != 0) {
                    std::swap(m[t], m[i]);
                    stable = false;
                }
            }
            for (size_t j = t + 1; j < C; ++j) {
                if (m[t][j] == 0) continue;
                mpz_class q = m[t][j] / m[t][t];
                if (q != 0)
                    for (size_t i = t; i < R; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) {
                    for (size_t i = 0; i < R; ++i) std::swap(m[i][t], m[i][j]);
                    stable = false;
                }
            }
            if (stable) {
                // divisibility: pivot must divide the rest of the block
                for (size_t i = t + 1; i < R && stable; ++i)
                    for (size_t j = t + 1; j < C && stable; ++j)
                        if (m[i][j] % m[t][t] != 0) {
                            for (size_t jj = t; jj < C; ++jj) m[t][jj] += m[i][jj];
                            stable = false;
                        }
            }
        }
        factors.push_back(abs(m[t][t]));
        ++t;
    }
    return factors;
}

}  // namespace

Abelian abelianization(const Presentation& p) {
    std::vector<std::vector<mpz_class>> m;
    for (const GWord& r : p.rels) {
        std::vector<mpz_class> row(p.gens.size(), 0);
        for (auto& l : r) row[l.first] += l.second;
        m.push_back(std::move(row));
    }
    Abelian out;
    std::vector<mpz_class> factors = m.empty() ? std::vector<mpz_class>{}
                                               : dense_invariant_factors(std::move(m));
    long long rank = 0;
    for (const mpz_class& f : factors) {
        if (f == 0) continue;
        ++rank;
        if (f > 1) out.torsion.push_back(f);
    }
    out.free_rank = static_cast<long long>(p.gens.size()) - rank;
    return out;
}

std::string abelian_to_string(const Abelian& a) {
    std::string s = "Z^" + std::to_string(a.free_rank);
    for (const mpz_class& t : a.torsion) s += " + Z/" + t.get_str();
    return s;
}

std::string gword_to_string(const Presentation& p, const GWord& w) {
    if (w.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += " ";
        out += p.gens[w[i].first].name;
        if (w[i].second < 0) out += "^-1";
    }
    return out;
}

}  // namespace gbg
