#include "coh2/negligible.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coh2 {

std::string NegligibleBasis::roots_of_unity_label() const {
  std::ostringstream os;
  os << "negligible subgroup over fields with a primitive root of unity of order e(A)e(H) = "
     << static_cast<u64>(module->exponent()) * group->exponent();
  return os.str();
}

namespace {

// cor_H^{H'}(a cup d(chi)) for one generator triple.
Cochain generator_cocycle(const ModulePtr& a, const Subgroup& sub, const ModulePtr& restricted,
                          std::span<const u32> inv, const Character& chi) {
  Cochain cup = cup_with_character(inv, chi, sub.group(), restricted);
  return corestriction(cup, sub, a);
}

struct SubgroupData {
  Subgroup sub;
  ModulePtr restricted;
  std::vector<Character> chars;
};

SubgroupData subgroup_data(const ModulePtr& a, Subgroup sub) {
  ModulePtr restricted = HModule::restricted(a, sub);
  u32 e = static_cast<u32>(sub.group()->exponent());
  std::vector<Character> chars = character_basis(*sub.group(), e);
  return SubgroupData{std::move(sub), std::move(restricted), std::move(chars)};
}

void insert_generators(NegligibleBasis& basis, const SubgroupData& data) {
  const ZnMatrix inv = invariants(*basis.module, data.sub);
  for (std::size_t ai = 0; ai < inv.rows(); ++ai)
    for (const Character& chi : data.chars) {
      if (chi.is_zero()) continue;
      Cochain c = generator_cocycle(basis.module, data.sub, data.restricted, inv.row(ai), chi);
      ++basis.attempted;
      bool grew = basis.tracker.insert(c.coeffs);
      NegligibleGenerator gen;
      gen.subgroup_members = data.sub.members();
      gen.invariant.assign(inv.row(ai).begin(), inv.row(ai).end());
      gen.character = chi;
      gen.grew = grew;
      if (grew) gen.cocycle = std::move(c);
      basis.generators.push_back(std::move(gen));
    }
}

}  // namespace

NegligibleBasis build_negligible_basis(GroupPtr h, ModulePtr a, Strategy strategy,
                                       const Caps& caps, std::shared_ptr<CohomologyContext> ctx) {
  if (static_cast<std::size_t>(h->order()) > caps.max_group_order)
    throw std::runtime_error("build_negligible_basis: group order exceeds --max-group-order");
  if (!ctx) ctx = std::make_shared<CohomologyContext>(h, a);
  if (ctx->c2_dim() > caps.max_ambient_dim)
    throw std::runtime_error("build_negligible_basis: dim C^2 exceeds --max-ambient-dim");

  NegligibleBasis basis{std::move(h),
                        std::move(a),
                        strategy,
                        ctx,
                        ctx->coboundary_tracker(),
                        {},
                        0,
                        0};
  basis.b2_rank = basis.tracker.rank();

  if (strategy == Strategy::AllSubgroups) {
    for (Subgroup& sub : all_subgroups(basis.group, caps.max_subgroup_enum_order))
      insert_generators(basis, subgroup_data(basis.module, std::move(sub)));
    return basis;
  }

  // Centralizer strategy: orbit representatives of the group action on A,
  // their stabilizers as the subgroups.
  if (basis.module->element_count() > caps.max_module_size)
    throw std::runtime_error("build_negligible_basis: |A| exceeds --max-module-size");
  const u64 total = basis.module->element_count();
  const auto& gens = basis.group->generator_indices();
  std::vector<bool> visited(total, false);
  std::map<std::vector<int>, SubgroupData> stab_cache;
  for (u64 start = 0; start < total; ++start) {
    if (visited[start]) continue;
    // orbit sweep
    std::vector<u64> orbit{start};
    visited[start] = true;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      auto v = basis.module->element_at(orbit[i]);
      for (int g : gens) {
        u64 img = basis.module->index_of(basis.module->act(g, v));
        if (!visited[img]) {
          visited[img] = true;
          orbit.push_back(img);
        }
      }
    }
    auto rep = basis.module->element_at(start);
    Subgroup stab = stabilizer(*basis.module, rep);
    auto it = stab_cache.find(stab.members());
    if (it == stab_cache.end())
      it = stab_cache.emplace(stab.members(), subgroup_data(basis.module, stab)).first;
    const SubgroupData& data = it->second;
    for (const Character& chi : data.chars) {
      if (chi.is_zero()) continue;
      Cochain c = generator_cocycle(basis.module, data.sub, data.restricted, rep, chi);
      ++basis.attempted;
      bool grew = basis.tracker.insert(c.coeffs);
      NegligibleGenerator gen;
      gen.subgroup_members = data.sub.members();
      gen.invariant.assign(rep.begin(), rep.end());
      gen.character = chi;
      gen.grew = grew;
      if (grew) gen.cocycle = std::move(c);
      basis.generators.push_back(std::move(gen));
    }
  }
  return basis;
}

bool is_negligible(const NegligibleBasis& basis, const Cochain& c) {
  if (c.degree != 2 || c.group != basis.group || c.module != basis.module)
    throw std::invalid_argument("is_negligible: cochain over a different pair");
  if (!is_cocycle(c)) throw std::invalid_argument("is_negligible: input is not a cocycle");
  return basis.tracker.contains(c.coeffs);
}

bool spans_equal(const NegligibleBasis& a, const NegligibleBasis& b) {
  if (a.tracker.rank() != b.tracker.rank()) return false;
  ZnMatrix ba = a.tracker.canonical_basis();
  ZnMatrix bb = b.tracker.canonical_basis();
  for (std::size_t i = 0; i < ba.rows(); ++i)
    if (!b.tracker.contains(ba.row(i))) return false;
  for (std::size_t i = 0; i < bb.rows(); ++i)
    if (!a.tracker.contains(bb.row(i))) return false;
  return true;
}

InvariantQuotientReport restricted_invariant_quotient(const NegligibleBasis& basis,
                                                      const Subgroup& n,
                                                      const std::vector<Label>& t_elems) {
  if (n.parent() != basis.group)
    throw std::invalid_argument("restricted_invariant_quotient: N not a subgroup of H");
  ModulePtr restricted = HModule::restricted(basis.module, n);

  bool module_trivial = true;
  for (int g = 0; g < n.order() && module_trivial; ++g)
    module_trivial = restricted->action(g) ==
                     ZnMatrix::identity(restricted->modulus(), restricted->rank());

  // Close the normalizing elements into a finite label set.
  std::vector<Label> t_group;
  if (!t_elems.empty()) {
    std::map<std::string, Label> seen;
    Label id = label_identity_like(t_elems[0]);
    seen.emplace(label_key(id), id);
    std::vector<Label> work{id};
    while (!work.empty()) {
      Label cur = work.back();
      work.pop_back();
      for (const Label& t : t_elems) {
        Label next = label_mul(cur, t);
        auto key = label_key(next);
        if (seen.emplace(key, next).second) work.push_back(next);
        if (seen.size() > 4096)
          throw std::runtime_error("restricted_invariant_quotient: T closure too large");
      }
    }
    for (auto& [k, v] : seen) t_group.push_back(v);
  }
  const u64 t_order = t_elems.empty() ? 1 : t_group.size();
  auto inv_t = mod_inverse(static_cast<u32>(t_order % basis.module->modulus()),
                           basis.module->modulus());
  if (!inv_t)
    throw std::invalid_argument(
        "restricted_invariant_quotient: |T| not invertible mod the module exponent");

  std::vector<ConjugationData> conj;
  if (t_elems.empty()) {
    // T trivial: the average is the restriction itself.
    std::vector<int> idmap(n.order());
    std::iota(idmap.begin(), idmap.end(), 0);
    conj.push_back(ConjugationData{std::move(idmap),
                                   ZnMatrix::identity(restricted->modulus(), restricted->rank())});
  } else {
    conj.reserve(t_group.size());
    for (const Label& t : t_group) conj.push_back(conjugation_data(*restricted, t, module_trivial));
  }

  CohomologyContext ctx_n(n.group(), restricted);
  InvariantQuotientReport rep;
  rep.t_order = t_order;
  rep.trivial = true;
  for (std::size_t gi = 0; gi < basis.generators.size(); ++gi) {
    const auto& gen = basis.generators[gi];
    if (!gen.grew) continue;
    Cochain res = restrict_to_subgroup(gen.cocycle, n, restricted);
    Cochain avg = Cochain::zero(2, n.group(), restricted);
    for (const auto& cd : conj) avg = avg + conjugation_action(res, cd);
    avg = avg.scaled(*inv_t);
    ++rep.generators_checked;
    if (!ctx_n.is_coboundary(avg)) {
      rep.trivial = false;
      rep.failing.push_back(gi);
    }
  }
  return rep;
}

}  // namespace coh2
