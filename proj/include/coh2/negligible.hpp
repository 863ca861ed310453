#pragma once

// The subgroup of H^2(H,A) generated by corestrictions of cup products
// a cup d(chi) over subgroups H' (equivalently over centralizers of
// module elements), tracked as a row span containing the coboundary
// space.  Membership against this span decides negligibility over fields
// with a primitive root of unity of order e(A)e(H).

#include <memory>
#include <string>
#include <vector>

#include "coh2/cochain.hpp"
#include "coh2/coh_maps.hpp"
#include "coh2/group.hpp"
#include "coh2/hmodule.hpp"

namespace coh2 {

enum class Strategy { AllSubgroups, Centralizers };

struct Caps {
  std::size_t max_group_order = 20000;
  std::size_t max_subgroup_enum_order = 256;
  u64 max_module_size = 20000;
  std::size_t max_ambient_dim = 8192;
  std::size_t max_h2_dim = 512;
};

struct NegligibleGenerator {
  std::vector<int> subgroup_members;  // parent indices of H' (or the centralizer)
  std::vector<u32> invariant;         // a in A^{H'}
  Character character;                // chi over H'
  bool grew = false;
  Cochain cocycle;  // cor of a cup d(chi), kept only when the span grew
};

struct NegligibleBasis {
  GroupPtr group;
  ModulePtr module;
  Strategy strategy = Strategy::AllSubgroups;
  std::shared_ptr<CohomologyContext> ctx;
  SpanTracker tracker;  // coboundaries + generator cocycles
  std::vector<NegligibleGenerator> generators;
  std::size_t b2_rank = 0;
  std::size_t attempted = 0;

  std::size_t span_dim_over_b2() const { return tracker.rank() - b2_rank; }
  std::string roots_of_unity_label() const;
};

NegligibleBasis build_negligible_basis(GroupPtr h, ModulePtr a, Strategy strategy,
                                       const Caps& caps = {},
                                       std::shared_ptr<CohomologyContext> ctx = nullptr);

// Membership of the class of c in the tracked span (c must be a cocycle
// over the basis's pair).
bool is_negligible(const NegligibleBasis& basis, const Cochain& c);

// Exact span equality by mutual membership of the two canonical bases.
bool spans_equal(const NegligibleBasis& a, const NegligibleBasis& b);

// Restriction of the tracked span to a subgroup N followed by projection
// to the part fixed by the group generated by normalizing elements
// (averaging; requires the order of that group to be invertible mod the
// module exponent).  Reports whether the fixed part consists of
// coboundaries.
struct InvariantQuotientReport {
  bool trivial = false;
  std::size_t generators_checked = 0;
  std::vector<std::size_t> failing;  // indices of generators whose average survives
  u64 t_order = 0;
};

InvariantQuotientReport restricted_invariant_quotient(const NegligibleBasis& basis,
                                                      const Subgroup& n,
                                                      const std::vector<Label>& t_elems);

}  // namespace coh2
