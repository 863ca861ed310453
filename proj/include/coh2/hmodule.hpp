#pragma once

// Finite modules (Z/nZ)^k with a group action by invertible matrices.
// Module elements are row vectors; the action of g sends a to a*action(g),
// so action(g*h) = action(h)*action(g) in matrix order.

#include <memory>
#include <string>
#include <vector>

#include "coh2/group.hpp"
#include "coh2/linalg.hpp"

namespace coh2 {

class HModule;
using ModulePtr = std::shared_ptr<const HModule>;

class HModule {
 public:
  static ModulePtr trivial(GroupPtr g, u32 modulus, std::size_t rank);
  // Actions for g->generator_indices(), extended to the whole group;
  // the homomorphism law is verified on all pairs.
  static ModulePtr from_generator_actions(GroupPtr g, u32 modulus,
                                          const std::vector<ZnMatrix>& gen_actions);
  // gl_n(F_p) with the conjugation action of a matrix group (n x n labels
  // mod p); basis labelled by the matrix units E_ij.
  static ModulePtr gl_conjugation(GroupPtr g, int n, u32 p);
  // Upper-triangular subalgebra b_n with the conjugation action of a group
  // of upper-triangular matrices.
  static ModulePtr bn_conjugation(GroupPtr g, int n, u32 p);
  // The same coefficients viewed over a subgroup's materialized group.
  static ModulePtr restricted(const ModulePtr& parent, const Subgroup& s);
  // Transport along a homomorphism: A becomes a source-module via f.
  static ModulePtr pulled_back(const ModulePtr& m, const GroupHom& f);

  const GroupPtr& group() const { return group_; }
  u32 modulus() const { return modulus_; }
  std::size_t rank() const { return rank_; }
  const ZnMatrix& action(int g) const { return action_[g]; }
  std::vector<u32> act(int g, std::span<const u32> a) const;

  const std::vector<std::string>& basis_labels() const { return basis_labels_; }
  u32 exponent() const { return rank_ == 0 ? 1 : modulus_; }
  u64 element_count() const;  // modulus^rank, saturating

  // Enumeration of all module elements in lexicographic order.
  std::vector<u32> element_at(u64 idx) const;
  u64 index_of(std::span<const u32> a) const;

  HModule(GroupPtr g, u32 modulus, std::size_t rank, std::vector<ZnMatrix> actions,
          std::vector<std::string> labels);

 private:
  GroupPtr group_;
  u32 modulus_;
  std::size_t rank_;
  std::vector<ZnMatrix> action_;
  std::vector<std::string> basis_labels_;
};

// Basis of A^H = {a : a*action(h) = a for all h in H} (H a subgroup of the
// module's group).
ZnMatrix invariants(const HModule& m, const Subgroup& h);

// Sum of t*a over a left transversal of hp in h; a must be hp-invariant.
std::vector<u32> norm_map(const HModule& m, const Subgroup& h, const Subgroup& hp,
                          std::span<const u32> a);

// {h : h*a = a} as a subgroup of the module's group.
Subgroup stabilizer(const HModule& m, std::span<const u32> a);

// A homomorphism of abelian groups src -> dst commuting with the actions
// (both modules over the same group).  phi(x) = x * mat, with mixed moduli
// allowed when src_modulus * row = 0 in dst.
struct ModuleHom {
  ModulePtr src, dst;
  ZnMatrix mat;  // src.rank x dst.rank over dst.modulus

  static ModuleHom validated(ModulePtr src, ModulePtr dst, ZnMatrix mat);
  static ModuleHom identity(ModulePtr m);
  static ModuleHom zero(ModulePtr src, ModulePtr dst);
  std::vector<u32> apply(std::span<const u32> a) const;
};

// Matrix of X -> t X t^-1 on gl_n (or b_n) coordinates, for a matrix t
// normalizing the situation; used for conjugation actions by elements
// outside the group itself.
ZnMatrix conjugation_on_module(const HModule& m, const ZnMatrix& t);

}  // namespace coh2
