#include "coh2/smith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace coh2 {

namespace {

void row_axpy(std::vector<i64>& w, const std::vector<i64>& r, i64 c) {
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += c * r[i];
}

}  // namespace

IntMat hnf_rows(IntMat rows) {
  if (rows.empty()) return rows;
  std::size_t cols = rows[0].size();
  std::size_t top = 0;
  for (std::size_t j = 0; j < cols && top < rows.size(); ++j) {
    // Clear column j below `top` by gcd pivoting.
    while (true) {
      std::size_t piv = top;
      i64 best = 0;
      for (std::size_t i = top; i < rows.size(); ++i) {
        i64 v = std::abs(rows[i][j]);
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          piv = i;
        }
      }
      if (best == 0) break;
      std::swap(rows[top], rows[piv]);
      if (rows[top][j] < 0)
        for (auto& v : rows[top]) v = -v;
      bool clean = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        i64 q = rows[i][j] / rows[top][j];
        if (q) row_axpy(rows[i], rows[top], -q);
        if (rows[i][j] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[top][j] != 0) {
      // Reduce entries above the pivot into [0, pivot).
      for (std::size_t i = 0; i < top; ++i) {
        i64 q = rows[i][j] / rows[top][j];
        if (rows[i][j] % rows[top][j] < 0) --q;
        if (q) row_axpy(rows[i], rows[top], -q);
      }
      ++top;
    }
  }
  rows.resize(top);
  return rows;
}

std::vector<i64> smith_invariants(IntMat m) {
  std::size_t r = m.size();
  if (r == 0) return {};
  std::size_t c = m[0].size();
  std::size_t k = 0;
  std::vector<i64> diag;
  while (k < r && k < c) {
    // Find a nonzero entry in the lower-right block.
    std::size_t pi = k, pj = k;
    i64 best = 0;
    for (std::size_t i = k; i < r; ++i)
      for (std::size_t j = k; j < c; ++j) {
        i64 v = std::abs(m[i][j]);
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    std::swap(m[k], m[pi]);
    for (std::size_t i = 0; i < r; ++i) std::swap(m[i][k], m[i][pj]);
    if (m[k][k] < 0)
      for (std::size_t j = k; j < c; ++j) m[k][j] = -m[k][j];
    bool again = false;
    for (std::size_t i = k + 1; i < r; ++i) {
      i64 q = m[i][k] / m[k][k];
      if (q) row_axpy(m[i], m[k], -q);
      if (m[i][k] != 0) again = true;
    }
    for (std::size_t j = k + 1; j < c; ++j) {
      i64 q = m[k][j] / m[k][k];
      if (q)
        for (std::size_t i = 0; i < r; ++i) m[i][j] -= q * m[i][k];
      if (m[k][j] != 0) again = true;
    }
    if (again) continue;
    // Divisibility fix: fold any bad entry into row k and repeat.
    bool bad = false;
    for (std::size_t i = k + 1; i < r && !bad; ++i)
      for (std::size_t j = k + 1; j < c && !bad; ++j)
        if (m[i][j] % m[k][k] != 0) {
          row_axpy(m[k], m[i], 1);
          bad = true;
        }
    if (bad) continue;
    diag.push_back(m[k][k]);
    ++k;
  }
  return diag;
}

std::vector<u64> quotient_invariant_factors(const ZnMatrix& sub, const ZnMatrix& sup) {
  if (sub.modulus() != sup.modulus() || sub.cols() != sup.cols())
    throw std::invalid_argument("quotient_invariant_factors: shape or modulus mismatch");
  const u32 n = sup.modulus();
  const std::size_t dim = sup.cols();

  auto lattice_rows = [&](const ZnMatrix& m) {
    IntMat rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::vector<i64> row(dim);
      for (std::size_t j = 0; j < dim; ++j) row[j] = m(i, j);
      rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<i64> row(dim, 0);
      row[i] = n;
      rows.push_back(std::move(row));
    }
    return rows;
  };

  IntMat basis = hnf_rows(lattice_rows(sup));
  if (basis.size() != dim) throw std::logic_error("quotient_invariant_factors: degenerate lattice");
  // Pivot column of each basis row (echelon shape).
  std::vector<std::size_t> pivot(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t j = 0;
    while (j < dim && basis[i][j] == 0) ++j;
    pivot[i] = j;
  }

  // Coordinates of the subgroup generators in the basis.
  IntMat sub_rows = lattice_rows(sub);
  IntMat coords;
  for (auto& g : sub_rows) {
    std::vector<i64> c(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      i64 v = g[pivot[i]];
      if (v % basis[i][pivot[i]] != 0)
        throw std::logic_error("quotient_invariant_factors: sub not contained in sup");
      i64 q = v / basis[i][pivot[i]];
      c[i] = q;
      if (q) row_axpy(g, basis[i], -q);
    }
    if (!std::all_of(g.begin(), g.end(), [](i64 v) { return v == 0; }))
      throw std::logic_error("quotient_invariant_factors: sub not contained in sup");
    coords.push_back(std::move(c));
  }

  std::vector<i64> inv = smith_invariants(std::move(coords));
  if (inv.size() != dim) throw std::logic_error("quotient_invariant_factors: quotient not finite");
  std::vector<u64> out;
  for (i64 d : inv)
    if (d > 1) out.push_back(static_cast<u64>(d));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coh2
