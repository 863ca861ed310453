#pragma once

// Small exact integer lattice routines used by the structure reports:
// Hermite form of a full-rank row lattice and Smith invariant factors.
// Inputs stay tiny (entries bounded by the coefficient modulus), so
// plain int64 arithmetic is adequate.

#include <cstdint>
#include <vector>

#include "coh2/linalg.hpp"

namespace coh2 {

using IntMat = std::vector<std::vector<i64>>;

// Row-style Hermite normal form of the lattice spanned by the input rows.
// Returns a basis with positive pivots, echelon shape.
IntMat hnf_rows(IntMat rows);

// Nonzero invariant factors d1 | d2 | ... of the integer matrix.
std::vector<i64> smith_invariants(IntMat m);

// Invariant factors (> 1) of span(sup) / span(sub), both taken inside
// (Z/n)^dim with n = modrix modulus; sub must be contained in sup.
std::vector<u64> quotient_invariant_factors(const ZnMatrix& sub, const ZnMatrix& sup);

}  // namespace coh2
