#pragma once

// Exact linear algebra over Z/nZ (n not necessarily prime).
//
// Convention used throughout the library: row vectors, maps act on the
// right.  solve_row(m, rhs) solves x*m = rhs where x has m.rows() entries
// and rhs has m.cols() entries; kernel_basis(m) returns rows x with
// x*m = 0.  Canonical spans are represented by the Howell normal form,
// the unique row-echelon form over Z/nZ whose row set determines the row
// span and supports greedy membership reduction.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coh2 {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// ---- scalar arithmetic mod n ----

inline u32 mod_reduce(i64 x, u32 n) {
  i64 r = x % static_cast<i64>(n);
  if (r < 0) r += n;
  return static_cast<u32>(r);
}
inline u32 mod_add(u32 a, u32 b, u32 n) {
  u64 s = static_cast<u64>(a) + b;
  return static_cast<u32>(s >= n ? s - n : s);
}
inline u32 mod_sub(u32 a, u32 b, u32 n) { return a >= b ? a - b : static_cast<u32>(a + n - b); }
inline u32 mod_mul(u32 a, u32 b, u32 n) { return static_cast<u32>((static_cast<u64>(a) * b) % n); }

// gcd(a,b) together with x,y such that a*x + b*y = gcd.
i64 xgcd(i64 a, i64 b, i64& x, i64& y);

std::optional<u32> mod_inverse(u32 a, u32 n);

// A unit u mod n with u*a = gcd(a,n) (mod n).  Requires a in (0,n).
u32 unit_for(u32 a, u32 n);

// ---- dense matrices over Z/nZ ----

class ZnMatrix {
 public:
  ZnMatrix() = default;
  ZnMatrix(u32 modulus, std::size_t rows, std::size_t cols);
  static ZnMatrix identity(u32 modulus, std::size_t dim);
  static ZnMatrix from_rows(u32 modulus, const std::vector<std::vector<i64>>& rows);

  u32 modulus() const { return modulus_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  u32 operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, i64 v) { data_[i * cols_ + j] = mod_reduce(v, modulus_); }
  std::span<const u32> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<u32> row_mut(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  ZnMatrix operator*(const ZnMatrix& rhs) const;
  ZnMatrix operator+(const ZnMatrix& rhs) const;
  ZnMatrix operator-(const ZnMatrix& rhs) const;
  ZnMatrix scaled(i64 c) const;
  ZnMatrix pow(u64 e) const;
  ZnMatrix transpose() const;
  bool operator==(const ZnMatrix& rhs) const = default;
  bool is_zero() const;

  // Entrywise copy into Z/mZ (entries reduced mod m).
  ZnMatrix with_modulus(u32 m) const;

  std::optional<ZnMatrix> inverse() const;

  std::string to_string() const;

 private:
  u32 modulus_ = 1;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<u32> data_;
};

// v * m  (v has m.rows() entries, result has m.cols()).
std::vector<u32> row_times_matrix(std::span<const u32> v, const ZnMatrix& m);

// ---- incremental row spans over Z/nZ ----

// Incrementally maintained Howell-form basis of a row span.  Membership
// queries are exact for any modulus; insertion reports whether the span
// grew.  With record_exprs, every basis row remembers its expression in
// terms of the inserted vectors, so express() can produce solution
// vectors for x * M = v.
//
// Representation: residues are stored one per byte when n <= 255 (with a
// word-packed inner loop for n <= 11, which covers the prime moduli on
// the critical path), and as 32-bit words otherwise.
class SpanTracker {
 public:
  SpanTracker(u32 modulus, std::size_t ambient_dim, bool record_exprs = false);
  SpanTracker(const SpanTracker&);
  SpanTracker(SpanTracker&&) noexcept;
  SpanTracker& operator=(SpanTracker&&) noexcept;
  ~SpanTracker();

  // Returns true iff the span grew.
  bool insert(std::span<const u32> v);
  bool contains(std::span<const u32> v) const;
  // Coefficients c (one per inserted vector) with sum c_i * inserted_i = v.
  std::optional<std::vector<u32>> express(std::span<const u32> v) const;

  std::size_t rank() const;
  std::size_t ambient_dim() const;
  u32 modulus() const;
  std::size_t inserted_count() const;
  // Number of vectors in the span; saturates at UINT64_MAX.
  u64 span_size() const;
  // Canonical Howell-form basis (pivots divide n, entries above each pivot
  // reduced below it).
  ZnMatrix canonical_basis() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---- derived operations ----

ZnMatrix howell_form(const ZnMatrix& m);

// Some x with x*m = rhs, or nullopt if none exists.
std::optional<std::vector<u32>> solve_row(const ZnMatrix& m, std::span<const u32> rhs);

// Rows generating {x : x*m = 0}.
ZnMatrix kernel_basis(const ZnMatrix& m);

}  // namespace coh2
