#include "gbg/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

namespace gbg {

namespace {

std::unordered_map<CubeCell, int, CellHash> index_cells(const std::vector<CubeCell>& cells) {
    std::unordered_map<CubeCell, int, CellHash> idx;
    idx.reserve(cells.size() * 2);
    for (size_t i = 0; i < cells.size(); ++i) idx.emplace(cells[i], static_cast<int>(i));
    return idx;
}

}  // namespace

ChainBoundary chain_boundary(const EmbeddedGraph& g, int n, size_t budget) {
    ChainBoundary cb;
    std::vector<CubeCell> c0 = enumerate_cells(g, n, 0, budget);
    std::vector<CubeCell> c1 = enumerate_cells(g, n, 1, budget);
    cb.cells2 = enumerate_cells(g, n, 2, budget);
    cb.n0 = static_cast<long long>(c0.size());
    cb.n1 = static_cast<long long>(c1.size());
    cb.n2 = static_cast<long long>(cb.cells2.size());

    auto idx0 = index_cells(c0);
    auto idx1 = index_cells(c1);

    cb.d1.resize(c1.size());
    for (size_t i = 0; i < c1.size(); ++i) {
        Letter l{c1[i], +1};
        cb.d1[i] = {{idx0.at(letter_end(g, l)), +1}, {idx0.at(letter_start(g, l)), -1}};
    }
    cb.d2.resize(cb.cells2.size());
    for (size_t i = 0; i < cb.cells2.size(); ++i) {
        for (const Letter& l : boundary_word(g, cb.cells2[i]))
            cb.d2[i].push_back({idx1.at(l.cell), l.sign});
        std::sort(cb.d2[i].begin(), cb.d2[i].end());
    }

    // components of the 1-skeleton by union-find
    std::vector<int> parent(c0.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < c1.size(); ++i) {
        int a = find(cb.d1[i][0].first), b = find(cb.d1[i][1].first);
        if (a != b) parent[a] = b;
    }
    long long comps = 0;
    for (size_t i = 0; i < c0.size(); ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i)) ++comps;
    cb.components = comps;
    return cb;
}

bool boundary_check(const EmbeddedGraph& g, const ChainBoundary& cb, std::string* culprit) {
    for (size_t i = 0; i < cb.d2.size(); ++i) {
        std::map<int, long long> acc;
        for (auto [col, coef] : cb.d2[i])
            for (auto [v, s] : cb.d1[col]) acc[v] += static_cast<long long>(coef) * s;
        for (auto& [v, total] : acc)
            if (total != 0) {
                if (culprit) *culprit = cell_to_string(g, cb.cells2[i]);
                return false;
            }
    }
    return true;
}

bool boundary_check(const EmbeddedGraph& g, int n, size_t budget, std::string* culprit) {
    return boundary_check(g, chain_boundary(g, n, budget), culprit);
}

// ---------------------------------------------------------------------------
// sparse Smith form over the integers

namespace {

// Row-major sparse matrix of exact integers with column occupancy lists.
// Unit pivots are eliminated first (no coefficient growth); whatever
// remains goes through a dense exact reduction.
class SparseSmith {
public:
    SparseSmith(const std::vector<std::vector<std::pair<int, int>>>& rows, int ncols)
        : ncols_(ncols) {
        rows_.reserve(rows.size());
        for (const auto& r : rows) {
            Row row;
            for (auto [c, v] : r)
                if (v != 0) row[c] = v;
            rows_.push_back(std::move(row));
        }
        cols_.assign(ncols_, {});
        for (size_t i = 0; i < rows_.size(); ++i)
            for (auto& [c, v] : rows_[i]) cols_[c].insert(static_cast<int>(i));
    }

    std::vector<mpz_class> invariant_factors() {
        size_t unit_pivots = 0;
        for (;;) {
            auto pick = pick_unit_pivot();
            if (!pick) break;
            eliminate(pick->first, pick->second);
            ++unit_pivots;
        }
        // Residual block: usually empty.
        std::vector<std::vector<mpz_class>> dense;
        std::vector<int> live_cols;
        {
            std::vector<char> col_used(ncols_, 0);
            for (auto& row : rows_)
                for (auto& [c, v] : row)
                    if (v != 0) col_used[c] = 1;
            for (int c = 0; c < ncols_; ++c)
                if (col_used[c]) live_cols.push_back(c);
            std::vector<int> col_pos(ncols_, -1);
            for (size_t k = 0; k < live_cols.size(); ++k) col_pos[live_cols[k]] = (int)k;
            for (auto& row : rows_) {
                if (row.empty()) continue;
                std::vector<mpz_class> r(live_cols.size(), 0);
                bool nonzero = false;
                for (auto& [c, v] : row)
                    if (v != 0) {
                        r[col_pos[c]] = v;
                        nonzero = true;
                    }
                if (nonzero) dense.push_back(std::move(r));
            }
        }
        std::vector<mpz_class> rest = dense_factors(std::move(dense));
        std::vector<mpz_class> out(unit_pivots, 1);
        for (auto& f : rest)
            if (f != 0) out.push_back(f);
        return out;
    }

private:
    using Row = std::map<int, mpz_class>;

    std::optional<std::pair<int, int>> pick_unit_pivot() {
        // Markowitz-style: smallest (row fill - 1) * (col fill - 1) among +-1 entries.
        long long best_score = -1;
        int bi = -1, bj = -1;
        for (size_t i = 0; i < rows_.size(); ++i) {
            for (auto& [c, v] : rows_[i]) {
                if (v != 1 && v != -1) continue;
                long long score = (static_cast<long long>(rows_[i].size()) - 1) *
                                  (static_cast<long long>(cols_[c].size()) - 1);
                if (best_score == -1 || score < best_score) {
                    best_score = score;
                    bi = static_cast<int>(i);
                    bj = c;
                    if (best_score == 0) return std::make_pair(bi, bj);
                }
            }
        }
        if (bi == -1) return std::nullopt;
        return std::make_pair(bi, bj);
    }

    void eliminate(int pi, int pj) {
        mpz_class pivot = rows_[pi][pj];
        std::vector<int> users(cols_[pj].begin(), cols_[pj].end());
        for (int i : users) {
            if (i == pi) continue;
            auto it = rows_[i].find(pj);
            if (it == rows_[i].end()) continue;
            mpz_class factor = it->second / pivot;  // pivot is a unit
            for (auto& [c, v] : rows_[pi]) {
                auto jt = rows_[i].find(c);
                if (jt == rows_[i].end()) {
                    mpz_class nv = -factor * v;
                    if (nv != 0) {
                        rows_[i][c] = nv;
                        cols_[c].insert(i);
                    }
                } else {
                    jt->second -= factor * v;
                    if (jt->second == 0) {
                        rows_[i].erase(jt);
                        cols_[c].erase(i);
                    }
                }
            }
        }
        for (auto& [c, v] : rows_[pi]) cols_[c].erase(pi);
        rows_[pi].clear();
        cols_[pj].clear();
    }

    static std::vector<mpz_class> dense_factors(std::vector<std::vector<mpz_class>> m) {
        std::vector<mpz_class> factors;
        if (m.empty() || m[0].empty()) return factors;
        const size_t R = m.size(), C = m[0].size();
        size_t t = 0;
        while (t < R && t < C) {
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

    int ncols_;
    std::vector<Row> rows_;
    std::vector<std::set<int>> cols_;
};

}  // namespace

Abelian h1(const EmbeddedGraph& g, int n, size_t budget) {
    ChainBoundary cb = chain_boundary(g, n, budget);
    std::string culprit;
    if (!boundary_check(g, cb, &culprit))
        throw InternalError("boundary of boundary is nonzero at " + culprit);

    SparseSmith smith(cb.d2, static_cast<int>(cb.n1));
    std::vector<mpz_class> factors = smith.invariant_factors();

    long long rank_d2 = 0;
    Abelian out;
    for (const mpz_class& f : factors) {
        if (f == 0) continue;
        ++rank_d2;
        if (f > 1) out.torsion.push_back(f);
    }
    // rank of the 0-boundary map of a graph-like 1-skeleton
    long long rank_d1 = cb.n0 - cb.components;
    out.free_rank = (cb.n1 - rank_d1) - rank_d2;
    return out;
}

}  // namespace gbg
