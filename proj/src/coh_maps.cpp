#include "coh2/coh_maps.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace coh2 {

bool Character::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](u32 v) { return v == 0; });
}

bool is_character(const FiniteGroup& g, const Character& chi) {
  if (chi.values.size() != static_cast<std::size_t>(g.order())) return false;
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      if (chi.values[g.mul(a, b)] != mod_add(chi.values[a], chi.values[b], chi.modulus))
        return false;
  return true;
}

std::vector<Character> character_basis(const FiniteGroup& g, u32 e) {
  ZnMatrix rows = characters_mod(g, e);
  std::vector<Character> out;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    Character chi{e, std::vector<u32>(rows.row(i).begin(), rows.row(i).end())};
    out.push_back(std::move(chi));
  }
  return out;
}

Cochain pullback(const Cochain& c, const GroupHom& f) {
  if (f.target != c.group) throw std::invalid_argument("pullback: hom target mismatch");
  ModulePtr mod = HModule::pulled_back(c.module, f);
  Cochain out = Cochain::zero(c.degree, f.source, mod);
  const int n = f.source->order();
  const std::size_t k = c.module->rank();
  std::vector<int> t(c.degree), ft(c.degree);
  for (std::size_t idx = 0; idx < out.tuple_count(); ++idx) {
    std::size_t rest = idx;
    for (int d = c.degree - 1; d >= 0; --d) {
      t[d] = static_cast<int>(rest % n);
      rest /= n;
    }
    for (int d = 0; d < c.degree; ++d) ft[d] = f(t[d]);
    auto src = c.at(ft);
    std::copy(src.begin(), src.end(), out.coeffs.begin() + idx * k);
  }
  return out;
}

Cochain restrict_to_subgroup(const Cochain& c, const Subgroup& s, ModulePtr restricted) {
  if (s.parent() != c.group) throw std::invalid_argument("restrict: subgroup of a different group");
  if (!restricted) restricted = HModule::restricted(c.module, s);
  Cochain out = Cochain::zero(c.degree, s.group(), restricted);
  const int n = s.order();
  const std::size_t k = c.module->rank();
  std::vector<int> t(c.degree), pt(c.degree);
  for (std::size_t idx = 0; idx < out.tuple_count(); ++idx) {
    std::size_t rest = idx;
    for (int d = c.degree - 1; d >= 0; --d) {
      t[d] = static_cast<int>(rest % n);
      rest /= n;
    }
    for (int d = 0; d < c.degree; ++d) pt[d] = s.to_parent(t[d]);
    auto src = c.at(pt);
    std::copy(src.begin(), src.end(), out.coeffs.begin() + idx * k);
  }
  return out;
}

Cochain pushforward(const Cochain& c, const ModuleHom& phi) {
  if (phi.src != c.module) throw std::invalid_argument("pushforward: module mismatch");
  Cochain out = Cochain::zero(c.degree, c.group, phi.dst);
  const std::size_t ks = phi.src->rank(), kd = phi.dst->rank();
  for (std::size_t tidx = 0; tidx < c.tuple_count(); ++tidx) {
    auto v = phi.apply({c.coeffs.data() + tidx * ks, ks});
    std::copy(v.begin(), v.end(), out.coeffs.begin() + tidx * kd);
  }
  return out;
}

Cochain corestriction(const Cochain& c, const Subgroup& s, ModulePtr parent_module) {
  if (c.group != s.group()) throw std::invalid_argument("corestriction: cochain not over the subgroup");
  if (parent_module->group() != s.parent())
    throw std::invalid_argument("corestriction: module not over the parent group");
  if (c.module->rank() != parent_module->rank() || c.module->modulus() != parent_module->modulus())
    throw std::invalid_argument("corestriction: module shape mismatch");
  if (c.degree != 1 && c.degree != 2)
    throw std::invalid_argument("corestriction: implemented in degrees 1 and 2");
  const FiniteGroup& G = *s.parent();
  const HModule& A = *parent_module;

  // Right cosets Ht: rep_of[x] = chosen representative of the coset of x.
  std::vector<int> reps = transversal(G, s, CosetSide::Right);
  std::vector<int> rep_of(G.order(), -1);
  for (int r : reps)
    for (int m : s.members()) rep_of[G.mul(m, r)] = r;

  auto in_sub = [&](int x) {
    auto i = s.from_parent(x);
    if (!i) throw std::logic_error("corestriction: coset decomposition failed");
    return *i;
  };

  Cochain out = Cochain::zero(c.degree, s.parent(), parent_module);
  const std::size_t k = A.rank();
  const u32 n = A.modulus();
  if (c.degree == 2) {
    for (int g = 0; g < G.order(); ++g)
      for (int h = 0; h < G.order(); ++h) {
        u32* acc = out.coeffs.data() + (static_cast<std::size_t>(g) * G.order() + h) * k;
        for (int r : reps) {
          int rg = G.mul(r, g);
          int r1 = rep_of[rg];
          int rgh = G.mul(rg, h);
          int r2 = rep_of[rgh];
          int s1 = in_sub(G.mul(rg, G.inv(r1)));
          int s2 = in_sub(G.mul(G.mul(r1, h), G.inv(r2)));
          auto val = A.act(G.inv(r), c.at2(s1, s2));
          for (std::size_t i = 0; i < k; ++i) acc[i] = mod_add(acc[i], val[i], n);
        }
      }
  } else {
    for (int g = 0; g < G.order(); ++g) {
      u32* acc = out.coeffs.data() + static_cast<std::size_t>(g) * k;
      for (int r : reps) {
        int rg = G.mul(r, g);
        int s1 = in_sub(G.mul(rg, G.inv(rep_of[rg])));
        auto val = A.act(G.inv(r), c.at({&s1, 1}));
        for (std::size_t i = 0; i < k; ++i) acc[i] = mod_add(acc[i], val[i], n);
      }
    }
  }
  return out;
}

ConjugationData conjugation_data(const HModule& m, const Label& t, bool trivial_module_action) {
  GroupHom aut = conjugation_hom(m.group(), t);
  ZnMatrix theta = trivial_module_action
                       ? ZnMatrix::identity(m.modulus(), m.rank())
                       : conjugation_on_module(m, std::get<ZnMatrix>(t));
  // Cocycles stay cocycles iff action(t^-1 x t) * theta == theta * action(x)
  // (right-action matrix order), which encodes t(x*a) = (t x t^-1)(t*a).
  for (int x = 0; x < m.group()->order(); ++x)
    if (m.action(aut(x)) * theta != theta * m.action(x))
      throw std::invalid_argument("conjugation_data: t does not act compatibly on the module");
  return ConjugationData{aut.image_of, std::move(theta)};
}

ConjugationData inner_conjugation_data(const HModule& m, int t) {
  const FiniteGroup& g = *m.group();
  std::vector<int> map(g.order());
  for (int x = 0; x < g.order(); ++x) map[x] = g.conj(t, x);
  return ConjugationData{std::move(map), m.action(t)};
}

Cochain conjugation_action(const Cochain& c, const ConjugationData& t) {
  if (c.degree != 2) throw std::invalid_argument("conjugation_action: degree 2 only");
  const int n = c.group->order();
  const std::size_t k = c.module->rank();
  Cochain out = Cochain::zero(2, c.group, c.module);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      auto v = row_times_matrix(c.at2(t.group_map[g], t.group_map[h]), t.module_matrix);
      std::copy(v.begin(), v.end(),
                out.coeffs.begin() + (static_cast<std::size_t>(g) * n + h) * k);
    }
  return out;
}

Cochain cup_with_character(std::span<const u32> a, const Character& chi, GroupPtr g, ModulePtr m) {
  if (m->group() != g) throw std::invalid_argument("cup: module over a different group");
  if (!is_character(*g, chi)) throw std::invalid_argument("cup: chi is not a homomorphism");
  std::vector<u32> av(a.begin(), a.end());
  for (int x = 0; x < g->order(); ++x)
    if (m->act(x, a) != av) throw std::invalid_argument("cup: a is not invariant");
  const u32 e = chi.modulus;
  const int n = g->order();
  const std::size_t k = m->rank();
  Cochain out = Cochain::zero(2, g, m);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      // integer carry of the lifted character
      u32 w = (chi.values[x] + chi.values[y] - chi.values[g->mul(x, y)]) / e;
      if (w == 0) continue;
      u32* slot = out.coeffs.data() + (static_cast<std::size_t>(x) * n + y) * k;
      for (std::size_t i = 0; i < k; ++i)
        slot[i] = mod_mul(w % m->modulus(), av[i], m->modulus());
    }
  if (!is_cocycle(out)) throw std::logic_error("cup_with_character: output not a cocycle");
  return out;
}

TrivialSes TrivialSes::validated(ModuleHom incl, ModuleHom proj, u64 enumeration_cap) {
  if (incl.dst != proj.src) throw std::invalid_argument("TrivialSes: maps do not compose");
  const HModule& x = *incl.src;
  const HModule& y = *incl.dst;
  const HModule& z = *proj.dst;
  for (const HModule* m : {&x, &y, &z})
    for (int g = 0; g < m->group()->order(); ++g)
      if (m->action(g) != ZnMatrix::identity(m->modulus(), m->rank()))
        throw std::invalid_argument("TrivialSes: modules must carry the trivial action");
  if (x.element_count() > enumeration_cap || y.element_count() > enumeration_cap)
    throw std::invalid_argument("TrivialSes: enumeration cap exceeded");
  // injectivity of incl, im(incl) = ker(proj), surjectivity of proj
  std::set<std::vector<u32>> image;
  for (u64 i = 0; i < x.element_count(); ++i) {
    auto v = incl.apply(x.element_at(i));
    if (!image.insert(v).second) throw std::invalid_argument("TrivialSes: incl not injective");
  }
  std::set<std::vector<u32>> proj_image;
  for (u64 i = 0; i < y.element_count(); ++i) {
    auto el = y.element_at(i);
    auto p = proj.apply(el);
    proj_image.insert(p);
    bool in_ker = std::all_of(p.begin(), p.end(), [](u32 v) { return v == 0; });
    if (in_ker != (image.count(el) > 0))
      throw std::invalid_argument("TrivialSes: sequence not exact at Y");
  }
  if (proj_image.size() != z.element_count())
    throw std::invalid_argument("TrivialSes: proj not surjective");
  return TrivialSes{std::move(incl), std::move(proj)};
}

Cochain connecting_from_ses(const Cochain& z, const TrivialSes& ses) {
  if (z.degree != 1 || z.module != ses.proj.dst)
    throw std::invalid_argument("connecting: z must be a degree-1 cochain valued in Z0");
  if (!is_cocycle(z)) throw std::invalid_argument("connecting: z is not a cocycle");
  const GroupPtr& g = z.group;
  const HModule& y = *ses.incl.dst;
  const HModule& x = *ses.incl.src;
  const int n = g->order();

  // Set-theoretic lift through Y, first match in enumeration order, 0 at 1.
  std::vector<std::vector<u32>> lift(n);
  for (int h = 0; h < n; ++h) {
    if (h == FiniteGroup::kIdentity) {
      lift[h].assign(y.rank(), 0);
      continue;
    }
    std::vector<u32> target(z.at({&h, 1}).begin(), z.at({&h, 1}).end());
    bool found = false;
    for (u64 i = 0; i < y.element_count() && !found; ++i) {
      auto cand = y.element_at(i);
      if (ses.proj.apply(cand) == target) {
        lift[h] = std::move(cand);
        found = true;
      }
    }
    if (!found) throw std::logic_error("connecting: lift not found (sequence not exact?)");
  }

  // Preimages of X inside Y for pulling the differential back.
  std::map<std::vector<u32>, std::vector<u32>> x_preimage;
  for (u64 i = 0; i < x.element_count(); ++i) {
    auto xi = x.element_at(i);
    x_preimage.emplace(ses.incl.apply(xi), xi);
  }

  Cochain out = Cochain::zero(2, g, ses.incl.src);
  const u32 ny = y.modulus();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<u32> w(y.rank());
      int ab = g->mul(a, b);
      for (std::size_t i = 0; i < y.rank(); ++i)
        w[i] = mod_sub(mod_add(lift[a][i], lift[b][i], ny), lift[ab][i], ny);
      auto it = x_preimage.find(w);
      if (it == x_preimage.end())
        throw std::logic_error("connecting: differential not in the kernel");
      int t[2] = {a, b};
      auto slot = out.at_mut({t, 2});
      std::copy(it->second.begin(), it->second.end(), slot.begin());
    }
  if (!is_cocycle(out)) throw std::logic_error("connecting: output not a cocycle");
  return out;
}

}  // namespace coh2
