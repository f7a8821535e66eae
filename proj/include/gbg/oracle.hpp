#pragma once

// Independent first homology of the discretized configuration space from
// raw boundary matrices, bypassing the Morse machinery entirely.  Exact
// integer arithmetic throughout.

#include <string>

#include "gbg/abelian.hpp"
#include "gbg/cells.hpp"

namespace gbg {

struct ChainBoundary {
    long long n0 = 0, n1 = 0, n2 = 0;
    // rows of d2 over 1-cell indices and of d1 over 0-cell indices
    std::vector<std::vector<std::pair<int, int>>> d2;  // (column, coefficient)
    std::vector<std::vector<std::pair<int, int>>> d1;
    std::vector<CubeCell> cells2;  // kept for reporting
    long long components = 0;      // of the 1-skeleton
};

ChainBoundary chain_boundary(const EmbeddedGraph& g, int n, size_t budget = 0);

// d1 * d2 == 0; on failure *culprit names the offending 2-cell.
bool boundary_check(const EmbeddedGraph& g, const ChainBoundary& cb,
                    std::string* culprit = nullptr);
bool boundary_check(const EmbeddedGraph& g, int n, size_t budget = 0,
                    std::string* culprit = nullptr);

Abelian h1(const EmbeddedGraph& g, int n, size_t budget = 0);

}  // namespace gbg
