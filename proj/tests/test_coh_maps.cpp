#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "coh2/coh_maps.hpp"
#include "coh2/extensions.hpp"

using namespace coh2;

namespace {

Cochain random_coboundary(std::mt19937_64& rng, GroupPtr g, ModulePtr m) {
  Cochain x = Cochain::zero(1, g, m);
  for (auto& v : x.coeffs) v = static_cast<u32>(rng() % m->modulus());
  return differential(x);
}

// Sample cocycles: coboundaries plus all cup generators of all subgroups.
std::vector<Cochain> sample_cocycles(std::mt19937_64& rng, GroupPtr g, ModulePtr m, int n_cob) {
  std::vector<Cochain> out;
  for (int i = 0; i < n_cob; ++i) out.push_back(random_coboundary(rng, g, m));
  for (const Subgroup& sub : all_subgroups(g)) {
    ModulePtr restricted = HModule::restricted(m, sub);
    ZnMatrix inv = invariants(*m, sub);
    for (const Character& chi :
         character_basis(*sub.group(), static_cast<u32>(sub.group()->exponent()))) {
      if (chi.is_zero()) continue;
      for (std::size_t ai = 0; ai < inv.rows(); ++ai)
        out.push_back(corestriction(cup_with_character(inv.row(ai), chi, sub.group(), restricted),
                                    sub, m));
    }
  }
  return out;
}

struct Pair {
  GroupPtr g;
  ModulePtr m;
};

std::vector<Pair> battery() {
  std::vector<Pair> out;
  GroupPtr z4 = cyclic_group(4);
  out.push_back({z4, HModule::trivial(z4, 2, 1)});
  // S3 with the sign action on Z/3
  Perm t, c;
  t.img = {1, 0, 2};
  c.img = {1, 2, 0};
  GroupPtr s3 = FiniteGroup::generate({t, c});
  ZnMatrix sign = ZnMatrix::identity(3, 1).scaled(-1);
  out.push_back({s3, HModule::from_generator_actions(s3, 3, {sign, ZnMatrix::identity(3, 1)})});
  GroupPtr u = u3_group(3);
  out.push_back({u, HModule::gl_conjugation(u, 3, 3)});
  return out;
}

}  // namespace

TEST_CASE("pullback: identity, trivial hom, functoriality") {
  GroupPtr u = u3_group(3);
  ExtensionSpec alpha = glnp2_factor_set(3, 3, u);
  const Cochain& c = alpha.factor_set;

  Cochain same = pullback(c, GroupHom::identity(u));
  CHECK(same.coeffs == c.coeffs);

  GroupPtr z3 = cyclic_group(3);
  GroupHom trivial = GroupHom::validated(z3, u, std::vector<int>(3, 0));
  CHECK(pullback(c, trivial).is_zero());  // normalized cocycle, c(1,1) = 0

  // (f o g)* = g* o f* exactly, along Z c N c U
  Subgroup n = Subgroup::generated(
      u, {unitriangular_generator(*u, 0, 1), unitriangular_generator(*u, 0, 2)});
  int s13_in_n = *n.group()->find_label(u->label(unitriangular_generator(*u, 0, 2)));
  Subgroup z_in_n = Subgroup::generated(n.group(), {s13_in_n});
  GroupHom f = n.inclusion();                 // N -> U
  GroupHom g = z_in_n.inclusion();            // Z -> N
  Cochain two_step = pullback(pullback(c, f), g);
  Cochain one_step = pullback(c, g.compose(f));
  CHECK(two_step.coeffs == one_step.coeffs);
  CHECK(is_cocycle(two_step));
}

TEST_CASE("restriction of the p=3 matrix-family class to the center is a coboundary") {
  GroupPtr u = u3_group(3);
  ExtensionSpec alpha = glnp2_factor_set(3, 3, u);
  Subgroup z = Subgroup::generated(u, {unitriangular_generator(*u, 0, 2)});
  Cochain res = restrict_to_subgroup(alpha.factor_set, z, nullptr);
  CohomologyContext ctx(res.group, res.module);
  CHECK(ctx.coboundary_preimage(res).has_value());
}

TEST_CASE("restriction of the p=5 class to the center is NOT a coboundary") {
  GroupPtr u = u3_group(5);
  ExtensionSpec alpha = glnp2_factor_set(3, 5, u);
  Subgroup z = Subgroup::generated(u, {unitriangular_generator(*u, 0, 2)});
  Cochain res = restrict_to_subgroup(alpha.factor_set, z, nullptr);
  CohomologyContext ctx(res.group, res.module);
  CHECK(!ctx.coboundary_preimage(res).has_value());
}

TEST_CASE("pushforward: identity, zero, Kummer class into gl3 along 1 -> E13") {
  GroupPtr u = u3_group(3);
  ExtensionSpec alpha = glnp2_factor_set(3, 3, u);
  ModulePtr a = alpha.kernel;
  CHECK(pushforward(alpha.factor_set, ModuleHom::identity(a)).coeffs == alpha.factor_set.coeffs);
  CHECK(pushforward(alpha.factor_set, ModuleHom::zero(a, a)).is_zero());

  // Kummer factor set of Z/9 -> Z/3 transported onto Z = <s13> and pushed
  // along 1 -> E13 agrees with E13 cup d(chi13) up to coboundary.
  Subgroup z = Subgroup::generated(u, {unitriangular_generator(*u, 0, 2)});
  ModulePtr az = HModule::restricted(a, z);
  ExtensionSpec kummer = cyclic_kummer_extension(3, 3);
  // identify Z with the abstract cyclic group: s13^k -> k
  std::vector<int> log(3);
  for (int k = 0; k < 3; ++k) log[z.group()->pow(1, k)] = k;
  GroupHom ident = GroupHom::validated(z.group(), kummer.quotient, log);
  Cochain kummer_on_z = pullback(kummer.factor_set, ident);
  ZnMatrix e13mat(3, 1, 9);
  e13mat.set(0, 2, 1);
  ModuleHom phi = ModuleHom::validated(kummer_on_z.module, az, e13mat);
  Cochain pushed = pushforward(kummer_on_z, phi);

  std::vector<u32> e13(9, 0);
  e13[2] = 1;
  Character chi13{3, coordinate_character(*z.group(), 0, 2, 3)};
  Cochain cup = cup_with_character(e13, chi13, z.group(), az);
  CohomologyContext ctx(z.group(), az);
  CHECK(ctx.is_coboundary(pushed - cup));
  CHECK(is_cocycle(pushed));
}

TEST_CASE("corestriction: index one is the identity on cochains") {
  GroupPtr z4 = cyclic_group(4);
  ModulePtr m = HModule::trivial(z4, 2, 1);
  std::mt19937_64 rng(5);
  Subgroup whole = Subgroup::whole(z4);
  ModulePtr mw = HModule::restricted(m, whole);
  for (int i = 0; i < 5; ++i) {
    Cochain x = random_coboundary(rng, whole.group(), mw);
    Cochain cor = corestriction(x, whole, m);
    CHECK(cor.coeffs == x.coeffs);
  }
}

TEST_CASE("cor o res is multiplication by the index at class level") {
  std::mt19937_64 rng(99);
  for (const Pair& pr : battery()) {
    CohomologyContext ctx(pr.g, pr.m);
    auto cocycles = sample_cocycles(rng, pr.g, pr.m, 3);
    for (const Subgroup& sub : all_subgroups(pr.g)) {
      int index = pr.g->order() / sub.order();
      ModulePtr restricted = HModule::restricted(pr.m, sub);
      for (const Cochain& z : cocycles) {
        Cochain res = restrict_to_subgroup(z, sub, restricted);
        Cochain back = corestriction(res, sub, pr.m);
        CHECK(is_cocycle(back));
        CHECK(ctx.is_coboundary(back - z.scaled(index)));
      }
    }
  }
}

TEST_CASE("Mackey special case: res_N o cor_N^U equals the S-norm at class level") {
  std::mt19937_64 rng(123);
  GroupPtr u = u3_group(3);
  ModulePtr a = HModule::gl_conjugation(u, 3, 3);
  Subgroup n = Subgroup::generated(
      u, {unitriangular_generator(*u, 0, 1), unitriangular_generator(*u, 0, 2)});
  int s23 = unitriangular_generator(*u, 1, 2);
  ModulePtr an = HModule::restricted(a, n);
  CohomologyContext ctx_n(n.group(), an);

  // cocycles over (N, A|N): coboundaries, cup generators, res_N(alpha)
  std::vector<Cochain> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(random_coboundary(rng, n.group(), an));
  ZnMatrix inv = invariants(*a, n);
  for (const Character& chi : character_basis(*n.group(), 3)) {
    if (chi.is_zero()) continue;
    for (std::size_t ai = 0; ai < inv.rows(); ++ai)
      xs.push_back(cup_with_character(inv.row(ai), chi, n.group(), an));
  }
  ExtensionSpec alpha = glnp2_factor_set(3, 3, u);
  {
    Cochain res_alpha = restrict_to_subgroup(alpha.factor_set, n, nullptr);
    Cochain rebound = Cochain::zero(2, n.group(), an);
    rebound.coeffs = res_alpha.coeffs;
    xs.push_back(rebound);
  }

  for (const Cochain& x : xs) {
    Cochain lhs = restrict_to_subgroup(corestriction(x, n, a), n, an);
    Cochain rhs = Cochain::zero(2, n.group(), an);
    for (int k = 0; k < 3; ++k) {
      ConjugationData cd = conjugation_data(*an, u->label(u->pow(s23, k)));
      rhs = rhs + conjugation_action(x, cd);
    }
    CHECK(ctx_n.is_coboundary(lhs - rhs));
  }
}

TEST_CASE("corestriction commutes with pushforward at class level") {
  std::mt19937_64 rng(321);
  GroupPtr z4 = cyclic_group(4);
  ModulePtr a = HModule::trivial(z4, 2, 1);
  ModulePtr b = HModule::trivial(z4, 4, 1);
  ZnMatrix two(4, 1, 1);
  two.set(0, 0, 2);
  ModuleHom phi = ModuleHom::validated(a, b, two);
  CohomologyContext ctx(z4, b);
  Subgroup sub = Subgroup::generated(z4, {2});  // index 2
  ModulePtr asub = HModule::restricted(a, sub);
  ModulePtr bsub = HModule::restricted(b, sub);
  ModuleHom phi_sub = ModuleHom::validated(asub, bsub, two);
  for (int i = 0; i < 6; ++i) {
    Cochain x = random_coboundary(rng, sub.group(), asub);
    // also non-coboundary cocycles via cups
    if (i == 0) {
      Character chi{2, {0, 1}};
      x = cup_with_character(std::vector<u32>{1}, chi, sub.group(), asub);
    }
    Cochain route1 = pushforward(corestriction(x, sub, a), phi);
    Cochain route2 = corestriction(pushforward(x, phi_sub), sub, b);
    CHECK(ctx.is_coboundary(route1 - route2));
  }
}

TEST_CASE("conjugation: identity, inner triviality") {
  std::mt19937_64 rng(55);
  GroupPtr u = u3_group(3);
  ModulePtr a = HModule::gl_conjugation(u, 3, 3);
  CohomologyContext ctx(u, a);
  ExtensionSpec alpha = glnp2_factor_set(3, 3, u);
  Cochain c = Cochain::zero(2, u, a);
  c.coeffs = alpha.factor_set.coeffs;

  ConjugationData ident = conjugation_data(*a, u->label(FiniteGroup::kIdentity));
  CHECK(conjugation_action(c, ident).coeffs == c.coeffs);

  for (int t : {unitriangular_generator(*u, 0, 1), unitriangular_generator(*u, 1, 2)}) {
    ConjugationData inner = inner_conjugation_data(*a, t);
    Cochain moved = conjugation_action(c, inner);
    CHECK(is_cocycle(moved));
    CHECK(ctx.is_coboundary(moved - c));
    Cochain cob = random_coboundary(rng, u, a);
    CHECK(ctx.is_coboundary(conjugation_action(cob, inner) - cob));
  }
}

TEST_CASE("cup with character: zero character, additivity") {
  GroupPtr u = u3_group(3);
  ModulePtr a = HModule::gl_conjugation(u, 3, 3);
  Character zero{3, std::vector<u32>(27, 0)};
  std::vector<u32> id_mat{1, 0, 0, 0, 1, 0, 0, 0, 1};
  CHECK(cup_with_character(id_mat, zero, u, a).is_zero());

  Character chi12{3, coordinate_character(*u, 0, 1, 3)};
  Character chi23{3, coordinate_character(*u, 1, 2, 3)};
  std::vector<u32> e13(9, 0);
  e13[2] = 1;
  std::vector<u32> sum(9);
  for (int i = 0; i < 9; ++i) sum[i] = mod_add(id_mat[i], e13[i], 3);

  // exact additivity in the module element
  Cochain lhs = cup_with_character(sum, chi12, u, a);
  Cochain rhs = cup_with_character(id_mat, chi12, u, a) + cup_with_character(e13, chi12, u, a);
  CHECK(lhs.coeffs == rhs.coeffs);

  // class-level additivity in the character
  Character chisum{3, {}};
  chisum.values.resize(27);
  for (int g = 0; g < 27; ++g) chisum.values[g] = mod_add(chi12.values[g], chi23.values[g], 3);
  CohomologyContext ctx(u, a);
  Cochain both = cup_with_character(e13, chisum, u, a);
  Cochain split = cup_with_character(e13, chi12, u, a) + cup_with_character(e13, chi23, u, a);
  CHECK(ctx.is_coboundary(both - split));

  // non-invariant elements are rejected
  std::vector<u32> e21(9, 0);
  e21[3] = 1;
  CHECK_THROWS(cup_with_character(e21, chi12, u, a));
}

TEST_CASE("cup with the identity character realizes the cyclic extension class") {
  for (int m = 1; m <= 4; ++m)
    for (u32 n = 1; n <= 4; ++n) {
      ExtensionSpec ext = cyclic_kummer_extension(m, n);
      Character chi{static_cast<u32>(m), {}};
      chi.values.resize(m);
      for (int k = 0; k < m; ++k) chi.values[k] = static_cast<u32>(k);
      std::vector<u32> one{1 % n};
      Cochain cup = cup_with_character(one, chi, ext.quotient, ext.kernel);
      CohomologyContext ctx(ext.quotient, ext.kernel);
      CHECK(ctx.is_coboundary(cup - ext.factor_set));
    }
}

TEST_CASE("center cup: cor_N^Z res_Z^N kills E13 cup d(chi13)") {
  GroupPtr u = u3_group(3);
  ModulePtr a = HModule::gl_conjugation(u, 3, 3);
  Subgroup n = Subgroup::generated(
      u, {unitriangular_generator(*u, 0, 1), unitriangular_generator(*u, 0, 2)});
  ModulePtr an = HModule::restricted(a, n);
  CohomologyContext ctx_n(n.group(), an);
  int s13_in_n = *n.group()->find_label(u->label(unitriangular_generator(*u, 0, 2)));
  Subgroup z_in_n = Subgroup::generated(n.group(), {s13_in_n});
  ModulePtr az = HModule::restricted(an, z_in_n);

  std::vector<u32> e13(9, 0);
  e13[2] = 1;
  Character chi13_n{3, coordinate_character(*n.group(), 0, 2, 3)};
  Cochain x = cup_with_character(e13, chi13_n, n.group(), an);
  // this class is not itself trivial ...
  CHECK(!ctx_n.is_coboundary(x));
  // ... but cor o res multiplies by [N:Z] = 3 = 0
  Cochain res = restrict_to_subgroup(x, z_in_n, az);
  Cochain back = corestriction(res, z_in_n, an);
  CHECK(ctx_n.is_coboundary(back));
}

TEST_CASE("projection formula shadow: cor(a cup res chi) = norm(a) cup chi") {
  GroupPtr u = u3_group(3);
  ModulePtr a = HModule::gl_conjugation(u, 3, 3);
  Subgroup n = Subgroup::generated(
      u, {unitriangular_generator(*u, 0, 1), unitriangular_generator(*u, 0, 2)});
  ModulePtr an = HModule::restricted(a, n);
  CohomologyContext ctx_n(n.group(), an);
  int s13_in_n = *n.group()->find_label(u->label(unitriangular_generator(*u, 0, 2)));
  Subgroup z_in_n = Subgroup::generated(n.group(), {s13_in_n});
  ModulePtr az = HModule::restricted(an, z_in_n);

  for (auto [i, j] : {std::pair{0, 1}, {0, 2}}) {
    Character chi_n{3, coordinate_character(*n.group(), i, j, 3)};
    Character chi_z{3, {}};
    chi_z.values.resize(z_in_n.order());
    for (int k = 0; k < z_in_n.order(); ++k)
      chi_z.values[k] = chi_n.values[z_in_n.to_parent(k)];
    ZnMatrix inv_z = invariants(*an, z_in_n);
    for (std::size_t ai = 0; ai < inv_z.rows(); ++ai) {
      Cochain lhs = corestriction(
          cup_with_character(inv_z.row(ai), chi_z, z_in_n.group(), az), z_in_n, an);
      auto normed =
          norm_map(*an, Subgroup::whole(n.group()), z_in_n, inv_z.row(ai));
      Cochain rhs = cup_with_character(normed, chi_n, n.group(), an);
      CHECK(ctx_n.is_coboundary(lhs - rhs));
    }
  }
}

TEST_CASE("connecting map: zero, the Kummer sequence, exactness guards") {
  GroupPtr z3 = cyclic_group(3);
  ModulePtr x3 = HModule::trivial(z3, 3, 1);
  ModulePtr y9 = HModule::trivial(z3, 9, 1);
  ZnMatrix three(9, 1, 1);
  three.set(0, 0, 3);
  ZnMatrix one3(3, 1, 1);
  one3.set(0, 0, 1);
  TrivialSes ses = TrivialSes::validated(ModuleHom::validated(x3, y9, three),
                                         ModuleHom::validated(y9, x3, one3));

  Cochain z0 = Cochain::zero(1, z3, x3);
  CHECK(connecting_from_ses(z0, ses).is_zero());

  // z = identity character: the connecting cocycle is the Kummer factor set
  Cochain zid = Cochain::zero(1, z3, x3);
  zid.coeffs = {0, 1, 2};
  Cochain conn = connecting_from_ses(zid, ses);
  ExtensionSpec kummer = cyclic_kummer_extension(3, 3);
  CHECK(conn.coeffs == kummer.factor_set.coeffs);

  // non-exact data is rejected (the zero map is not injective)
  ZnMatrix bad(9, 1, 1);
  CHECK_THROWS(TrivialSes::validated(ModuleHom::validated(x3, y9, bad),
                                     ModuleHom::validated(y9, x3, one3)));
}

TEST_CASE("images of connecting maps lie in the span of cup products") {
  // over H in {Z/2, Z/4, Z/2 x Z/2, S3}, short exact sequences of small
  // trivial modules, exhaustively over all homs z: H -> Z0.
  std::vector<GroupPtr> hs;
  hs.push_back(cyclic_group(2));
  hs.push_back(cyclic_group(4));
  {
    Perm a, b;
    a.img = {1, 0, 2, 3};
    b.img = {0, 1, 3, 2};
    hs.push_back(FiniteGroup::generate({a, b}));
  }
  {
    Perm t, c;
    t.img = {1, 0, 2};
    c.img = {1, 2, 0};
    hs.push_back(FiniteGroup::generate({t, c}));
  }

  struct SesSpec {
    u32 nx, ny, nz;
    std::size_t kx, ky, kz;
    std::vector<std::vector<i64>> incl, proj;
  };
  std::vector<SesSpec> seses = {
      {2, 4, 2, 1, 1, 1, {{2}}, {{1}}},
      {2, 8, 4, 1, 1, 1, {{4}}, {{1}}},
      {4, 8, 2, 1, 1, 1, {{2}}, {{1}}},
      {3, 9, 3, 1, 1, 1, {{3}}, {{1}}},
      {2, 2, 2, 1, 2, 1, {{1, 0}}, {{0}, {1}}},
      {2, 2, 2, 1, 2, 1, {{1, 1}}, {{1}, {1}}},
      {2, 4, 2, 2, 2, 2, {{2, 0}, {0, 2}}, {{1, 0}, {0, 1}}},
  };

  for (const GroupPtr& h : hs) {
    for (const SesSpec& s : seses) {
      ModulePtr x = HModule::trivial(h, s.nx, s.kx);
      ModulePtr y = HModule::trivial(h, s.ny, s.ky);
      ModulePtr z = HModule::trivial(h, s.nz, s.kz);
      TrivialSes ses =
          TrivialSes::validated(ModuleHom::validated(x, y, ZnMatrix::from_rows(s.ny, s.incl)),
                                ModuleHom::validated(y, z, ZnMatrix::from_rows(s.nz, s.proj)));

      // span of coboundaries and x_basis cup d(chi) inside C^2(H, X)
      CohomologyContext ctx(h, x);
      SpanTracker span = ctx.coboundary_tracker();
      auto chars = character_basis(*h, static_cast<u32>(h->exponent()));
      for (const Character& chi : chars) {
        if (chi.is_zero()) continue;
        for (std::size_t b = 0; b < s.kx; ++b) {
          std::vector<u32> e(s.kx, 0);
          e[b] = 1;
          span.insert(cup_with_character(e, chi, h, x).coeffs);
        }
      }

      // every hom z: H -> Z0, built coordinatewise from the character group
      std::vector<std::vector<u32>> zchars;
      {
        ZnMatrix basis = characters_mod(*h, s.nz);
        std::set<std::vector<u32>> all;
        u64 combos = 1;
        for (std::size_t i = 0; i < basis.rows(); ++i) combos *= s.nz;
        for (u64 e = 0; e < combos; ++e) {
          std::vector<u32> chi(h->order(), 0);
          u64 rest = e;
          for (std::size_t i = 0; i < basis.rows(); ++i) {
            u32 cmul = static_cast<u32>(rest % s.nz);
            rest /= s.nz;
            for (int g = 0; g < h->order(); ++g)
              chi[g] = mod_add(chi[g], mod_mul(cmul, basis(i, g), s.nz), s.nz);
          }
          all.insert(chi);
        }
        zchars.assign(all.begin(), all.end());
      }
      u64 homs = 1;
      for (std::size_t c = 0; c < s.kz; ++c) homs *= zchars.size();
      for (u64 e = 0; e < homs; ++e) {
        Cochain zc = Cochain::zero(1, h, z);
        u64 rest = e;
        for (std::size_t c = 0; c < s.kz; ++c) {
          const auto& chi = zchars[rest % zchars.size()];
          rest /= zchars.size();
          for (int g = 0; g < h->order(); ++g) zc.coeffs[g * s.kz + c] = chi[g];
        }
        Cochain conn = connecting_from_ses(zc, ses);
        CHECK(span.contains(conn.coeffs));
      }
    }
  }
}
