#pragma once

// Extension classes from concrete groups: factor sets of abelian-kernel
// extensions, the GL_n(Z/p^2) -> GL_n(F_p) family with kernel M -> I+pM,
// lifting decisions, and the order-p lifting criterion
//   ((I+pa) s~)^p = s~^p + p N_sigma(a),
// which is exact mod p^2 for any sigma with sigma^p = I mod p.

#include <optional>
#include <string>
#include <vector>

#include "coh2/cochain.hpp"
#include "coh2/coh_maps.hpp"
#include "coh2/group.hpp"
#include "coh2/hmodule.hpp"

namespace coh2 {

struct ExtensionSpec {
  GroupPtr quotient;   // H
  ModulePtr kernel;    // A as H-module
  Cochain factor_set;  // normalized 2-cocycle over (H, A)
  std::vector<ZnMatrix> matrix_section;  // per H element, over p^2 (matrix family)
  std::vector<int> table_section;        // per H element, index in big_group
  GroupPtr big_group;
  std::string provenance;
};

// Factor set of 0 -> A -> G -> H -> 1 given the projection and the images
// of the module basis inside G.  The section picks the smallest preimage
// index (the identity for 1), so the factor set is normalized.
ExtensionSpec factor_set_from_groups(GroupPtr big, const GroupHom& pi,
                                     const std::vector<int>& kernel_basis_images, ModulePtr a);

// 0 -> gl_n(F_p) -> GL_n(Z/p^2) -> GL_n(F_p) -> 1 restricted to a matrix
// subgroup H, with the entrywise-lift section; the preimage group is never
// enumerated.
ExtensionSpec glnp2_factor_set(int n, u32 p, GroupPtr h, bool verify_cocycle = true);

// Same with kernel b_n (upper-triangular coordinates) for upper-triangular H.
ExtensionSpec bnp2_factor_set(int n, u32 p, GroupPtr h, bool verify_cocycle = true);

// 0 -> Z/n -> Z/mn -> Z/m -> 0.
ExtensionSpec cyclic_kummer_extension(int m, int n);

struct LiftResult {
  bool lifts = false;
  // y with d(-y) = pulled-back factor set; the lift is gamma -> (y(gamma), rho(gamma)).
  std::optional<Cochain> witness;
  // Explicit matrices over p^2 for matrix-section extensions, verified
  // multiplicative.
  std::optional<std::vector<ZnMatrix>> matrix_lift;
};

// rho lifts through ext iff the pulled-back factor set is a coboundary.
LiftResult lift_decision(const GroupHom& rho, const ExtensionSpec& ext);

// Generator-assignment search oracle (small cases).
bool exhaustive_lift_exists(const GroupHom& rho, const ExtensionSpec& ext, u64 cap = 100000);

// N_sigma(M) = sum of sigma^i M sigma^-i, i = 0..ord-1 (default ord = p).
ZnMatrix conj_norm(const ZnMatrix& sigma, const ZnMatrix& m, std::optional<u32> ord = {});

enum class LiftSearchMode { Linear, Exhaustive };

// A matrix over Z/p^2 congruent to sigma mod p with tau^p = I, or nullopt.
// sigma must satisfy sigma^p = I.
std::optional<ZnMatrix> order_p_lift_search(const ZnMatrix& sigma,
                                            LiftSearchMode mode = LiftSearchMode::Linear,
                                            u64 cap = 2000000);

// The linear system of the two-generator lifting obstruction at p:
// N_{s12}(a) = -E12, N_{s13}(b) = -E13, (s13-1)a = (s12-1)b over F_p,
// in the 2n^2 = 18 unknowns (a, b).
struct TwoGeneratorLiftReport {
  bool consistent = false;
  std::optional<std::pair<ZnMatrix, ZnMatrix>> solution;  // (a, b)
  struct Certificate {
    // coefficients z over the equations with C z = 0 and rhs . z != 0
    std::vector<std::pair<std::size_t, u32>> combination;
    std::string description;
  };
  std::optional<Certificate> certificate;
  ZnMatrix coeffs;       // 18 x 27, unknowns act on the left
  std::vector<u32> rhs;  // 27
};

TwoGeneratorLiftReport two_generator_lift_system(u32 p = 3, bool zero_rhs = false);

}  // namespace coh2
