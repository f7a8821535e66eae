#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace gbg {

// Invariant factors of a finitely generated abelian group.
struct Abelian {
    long long free_rank = 0;
    std::vector<mpz_class> torsion;  // nontrivial invariant factors, divisibility order

    bool operator==(const Abelian&) const = default;
};

std::string abelian_to_string(const Abelian& a);

}  // namespace gbg
