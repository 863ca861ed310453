#pragma once

// Maps between cohomology groups, all at the cochain level: pullback,
// pushforward, corestriction (transfer), conjugation, cup with a
// character, and the connecting map of a short exact sequence of trivial
// modules.
//
// H^2(H',Z) is never represented directly: it enters through characters
// chi: H' -> Z/eZ via the connecting isomorphism from H^1(H',Q/Z), whose
// 2-cocycle realization is the integer carry bit
//   w(g,h) = (chi~(g) + chi~(h) - chi~(gh)) / e  in {0,1},
// with chi~ the lift with values in [0,e).

#include <optional>
#include <vector>

#include "coh2/cochain.hpp"
#include "coh2/group.hpp"
#include "coh2/hmodule.hpp"

namespace coh2 {

struct Character {
  u32 modulus = 1;          // e
  std::vector<u32> values;  // one per group element

  bool is_zero() const;
};

bool is_character(const FiniteGroup& g, const Character& chi);
// Rows of characters_mod wrapped as Character values.
std::vector<Character> character_basis(const FiniteGroup& g, u32 e);

// (f*c)(t_1,..,t_q) = c(f(t_1),..,f(t_q)); the module is transported
// along f.  Restriction and inflation are special cases.
Cochain pullback(const Cochain& c, const GroupHom& f);

// Restriction to a subgroup (pullback along the inclusion, module
// restricted); the shared restricted module may be passed to keep
// pointer-identity across calls.
Cochain restrict_to_subgroup(const Cochain& c, const Subgroup& s, ModulePtr restricted = nullptr);

// phi applied entrywise.
Cochain pushforward(const Cochain& c, const ModuleHom& phi);

// Cochain-level transfer along a subgroup inclusion, using the stored
// right transversal; degree 2 (and 1).  c lives over (s.group(),
// restricted module); the result lives over (parent, parent_module).
Cochain corestriction(const Cochain& c, const Subgroup& s, ModulePtr parent_module);

// The pair (g -> t^-1 g t, action of t on the module) for a normalizing
// element; compatibility with the module action is verified.
struct ConjugationData {
  std::vector<int> group_map;
  ZnMatrix module_matrix;  // row-convention matrix of a -> t*a
};

// For t given as a matrix label (gl/b_n conjugation modules, or any module
// on which t acts trivially when trivial_module_action is set).
ConjugationData conjugation_data(const HModule& m, const Label& t,
                                 bool trivial_module_action = false);
// For t inside the group itself.
ConjugationData inner_conjugation_data(const HModule& m, int t);

// (t.c)(g,h) = t * c(t^-1 g t, t^-1 h t).
Cochain conjugation_action(const Cochain& c, const ConjugationData& t);

// The 2-cocycle representing a cup d(chi) for a an H-invariant module
// element and chi a character mod e; verified to be a cocycle.
Cochain cup_with_character(std::span<const u32> a, const Character& chi, GroupPtr g, ModulePtr m);

// A short exact sequence 0 -> X -> Y -> Z0 -> 0 of trivial modules over
// the same group; exactness is verified by enumeration.
struct TrivialSes {
  ModuleHom incl;  // X -> Y
  ModuleHom proj;  // Y -> Z0

  static TrivialSes validated(ModuleHom incl, ModuleHom proj, u64 enumeration_cap = 65536);
};

// z must be a homomorphism H -> Z0 (a 1-cocycle for the trivial action,
// given as a degree-1 cochain).  Lifts z through Y, differentiates, and
// pulls back into X; the result is a 2-cocycle over (H, X).
Cochain connecting_from_ses(const Cochain& z, const TrivialSes& ses);

}  // namespace coh2
