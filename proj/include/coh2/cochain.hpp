#pragma once

// Inhomogeneous bar-resolution cochains in degrees 0..3.  A degree-q
// cochain stores one module element per q-tuple of group elements, flat,
// tuple index in base |G| (first tuple entry most significant).

#include <memory>
#include <optional>
#include <vector>

#include "coh2/group.hpp"
#include "coh2/hmodule.hpp"
#include "coh2/linalg.hpp"

namespace coh2 {

struct Cochain {
  int degree = 0;
  GroupPtr group;
  ModulePtr module;
  std::vector<u32> coeffs;  // |G|^degree * rank entries mod module->modulus()

  static Cochain zero(int degree, GroupPtr g, ModulePtr m);

  std::size_t tuple_count() const;
  std::size_t tuple_index(std::span<const int> tuple) const;
  std::span<const u32> at(std::span<const int> tuple) const;
  std::span<u32> at_mut(std::span<const int> tuple);
  std::span<const u32> at2(int g, int h) const;  // degree 2 accessor

  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain scaled(i64 c) const;
  bool operator==(const Cochain& o) const;
  bool is_zero() const;
  // c(1,...) = c(...,1) = 0 in every slot with an identity entry.
  bool is_normalized() const;
};

// Standard inhomogeneous differential; degree 3 input is rejected (no C^4
// is materialized).
Cochain differential(const Cochain& c);

// Pointwise d(c) == 0 test; never materializes the degree q+1 cochain.
bool is_cocycle(const Cochain& c);

// Cached degree-1 differential data for one (group, module) pair: the
// C^1 -> C^2 matrix, a recording solver for coboundary preimages, and the
// coboundary span.
class CohomologyContext {
 public:
  CohomologyContext(GroupPtr g, ModulePtr m);

  const GroupPtr& group() const { return group_; }
  const ModulePtr& module() const { return module_; }
  std::size_t c1_dim() const { return c1_dim_; }
  std::size_t c2_dim() const { return solver_.ambient_dim(); }
  // The dense C^1 -> C^2 matrix; kept only for small instances.
  const ZnMatrix& d1() const;

  bool is_coboundary(const Cochain& c) const;
  // x with differential(x) == c, when c is a coboundary (c must be a
  // cocycle); verified by re-differentiation.
  std::optional<Cochain> coboundary_preimage(const Cochain& c) const;

  // Seeds a fresh tracker with the coboundary rows.
  SpanTracker coboundary_tracker() const;

  // Invariant factors of H^2 = Z^2/B^2 (empty list for trivial H^2);
  // guarded by a dimension cap because it materializes the C^2 -> C^3
  // matrix and runs integer Smith reduction.
  std::vector<u64> h2_invariant_factors(std::size_t max_dim = 512) const;

 private:
  GroupPtr group_;
  ModulePtr module_;
  ZnMatrix d1_;         // empty above the dense-size limit
  SpanTracker solver_;  // recording, seeded with d1 rows
  std::size_t c1_dim_ = 0;
};

// d2 as a matrix (C^2 -> C^3); used by structure reports and tests.
ZnMatrix d2_matrix(const GroupPtr& g, const ModulePtr& m);

}  // namespace coh2
