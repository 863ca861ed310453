#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "coh2/group.hpp"

using namespace coh2;

namespace {

ZnMatrix elem(u32 p, int i, int j) {
  ZnMatrix m = ZnMatrix::identity(p, 3);
  m.set(i, j, 1);
  return m;
}

}  // namespace

TEST_CASE("generate: cyclic, unitriangular, Borel orders") {
  CHECK(cyclic_group(3)->order() == 3);
  CHECK(cyclic_group(1)->order() == 1);
  CHECK(u3_group(3)->order() == 27);
  CHECK(u3_group(5)->order() == 125);
  CHECK(b3_group(3)->order() == 216);   // (p-1)^3 p^3
  CHECK(t3_group(3)->order() == 8);
  CHECK(b3_group(2)->order() == 8);
  CHECK(gln_group(2, 3)->order() == 48);
  CHECK(gln_group(2, 2)->order() == 6);
  CHECK(gln_group(1, 5)->order() == 4);
}

TEST_CASE("generate: errors") {
  ZnMatrix sing(4, 2, 2);
  sing.set(0, 0, 2);
  sing.set(1, 1, 1);
  CHECK_THROWS(FiniteGroup::generate({sing}));
  GenerateOptions tiny;
  tiny.max_order = 10;
  CHECK_THROWS(FiniteGroup::generate({elem(3, 0, 1), elem(3, 1, 2)}, tiny));
}

TEST_CASE("labels are a faithful homomorphism onto the table") {
  for (GroupPtr g : {u3_group(3), gln_group(2, 3), cyclic_group(6)}) {
    for (int a = 0; a < g->order(); ++a)
      for (int b = 0; b < g->order(); ++b) {
        Label prod = label_mul(g->label(a), g->label(b));
        auto idx = g->find_label(prod);
        REQUIRE(idx.has_value());
        CHECK(*idx == g->mul(a, b));
      }
  }
}

TEST_CASE("associativity, identity, inverse laws on tables") {
  for (GroupPtr g : {u3_group(3), cyclic_group(12), b3_group(2)}) {
    for (int a = 0; a < g->order(); ++a) {
      CHECK(g->mul(a, g->inv(a)) == FiniteGroup::kIdentity);
      for (int b = 0; b < g->order(); ++b)
        for (int c = 0; c < g->order(); ++c)
          CHECK(g->mul(g->mul(a, b), c) == g->mul(a, g->mul(b, c)));
    }
  }
}

TEST_CASE("exponent") {
  CHECK(cyclic_group(1)->exponent() == 1);
  CHECK(u3_group(3)->exponent() == 3);
  CHECK(u3_group(5)->exponent() == 5);
  // Z/4 x Z/6 as a permutation group
  Perm a, b;
  a.img = {1, 2, 3, 0, 4, 5, 6, 7, 8, 9};
  b.img = {0, 1, 2, 3, 5, 6, 7, 8, 9, 4};
  GroupPtr g = FiniteGroup::generate({a, b});
  CHECK(g->order() == 24);
  CHECK(g->exponent() == 12);
}

TEST_CASE("transversal: sizes and partition") {
  GroupPtr u = u3_group(3);
  Subgroup whole = Subgroup::whole(u);
  CHECK(transversal(*u, whole, CosetSide::Left) == std::vector<int>{0});

  int s12 = unitriangular_generator(*u, 0, 1);
  int s13 = unitriangular_generator(*u, 0, 2);
  Subgroup n = Subgroup::generated(u, {s12, s13});
  Subgroup z = Subgroup::generated(u, {s13});
  CHECK(n.order() == 9);
  CHECK(z.order() == 3);
  CHECK(left_transversal_in(*u, n.members(), z.members()).size() == 3);

  GroupPtr b = b3_group(3);
  Subgroup u_in_b = Subgroup::generated(
      b, {unitriangular_generator(*b, 0, 1), unitriangular_generator(*b, 1, 2)});
  CHECK(u_in_b.order() == 27);
  for (CosetSide side : {CosetSide::Left, CosetSide::Right}) {
    auto reps = transversal(*b, u_in_b, side);
    CHECK(reps.size() == 8);
    CHECK(reps[0] == FiniteGroup::kIdentity);
    // each element in exactly one coset
    std::set<int> covered;
    for (int r : reps)
      for (int m : u_in_b.members())
        CHECK(covered.insert(side == CosetSide::Left ? b->mul(r, m) : b->mul(m, r)).second);
    CHECK(static_cast<int>(covered.size()) == b->order());
  }
}

TEST_CASE("characters: cyclic duality and homomorphism law") {
  GroupPtr z6 = cyclic_group(6);
  ZnMatrix chars = characters_mod(*z6);  // e defaults to the exponent
  SpanTracker span(6, 6);
  for (std::size_t i = 0; i < chars.rows(); ++i) span.insert(chars.row(i));
  CHECK(span.span_size() == 6);
  for (std::size_t i = 0; i < chars.rows(); ++i)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        CHECK(chars(i, z6->mul(a, b)) == mod_add(chars(i, a), chars(i, b), 6));
}

TEST_CASE("characters of U3(F3) and of N") {
  GroupPtr u = u3_group(3);
  ZnMatrix chars = characters_mod(*u, 3);
  SpanTracker span(3, u->order());
  for (std::size_t i = 0; i < chars.rows(); ++i) span.insert(chars.row(i));
  CHECK(span.span_size() == 9);
  auto chi12 = coordinate_character(*u, 0, 1, 3);
  auto chi23 = coordinate_character(*u, 1, 2, 3);
  CHECK(span.contains(chi12));
  CHECK(span.contains(chi23));
  SpanTracker coord(3, u->order());
  coord.insert(chi12);
  coord.insert(chi23);
  for (std::size_t i = 0; i < chars.rows(); ++i) CHECK(coord.contains(chars.row(i)));
  // chi13 is not a homomorphism on all of U
  CHECK_THROWS(coordinate_character(*u, 0, 2, 3));

  Subgroup n = Subgroup::generated(
      u, {unitriangular_generator(*u, 0, 1), unitriangular_generator(*u, 0, 2)});
  ZnMatrix nchars = characters_mod(*n.group(), 3);
  SpanTracker nspan(3, n.order());
  for (std::size_t i = 0; i < nchars.rows(); ++i) nspan.insert(nchars.row(i));
  CHECK(nspan.span_size() == 9);
  CHECK(nspan.contains(coordinate_character(*n.group(), 0, 1, 3)));
  CHECK(nspan.contains(coordinate_character(*n.group(), 0, 2, 3)));
}

TEST_CASE("all_subgroups: counts and Lagrange") {
  CHECK(all_subgroups(cyclic_group(6)).size() == 4);

  // (Z/3)^2: 1 + 4 + 1 subgroups
  Perm a, b;
  a.img = {1, 2, 0, 3, 4, 5};
  b.img = {0, 1, 2, 4, 5, 3};
  GroupPtr e9 = FiniteGroup::generate({a, b});
  CHECK(e9->order() == 9);
  CHECK(all_subgroups(e9).size() == 6);

  GroupPtr u = u3_group(3);
  auto subs = all_subgroups(u);
  for (const Subgroup& s : subs) CHECK(u->order() % s.order() == 0);

  // brute-force oracle: closures of all generator pairs and triples
  std::set<std::vector<int>> oracle;
  for (int x = 0; x < u->order(); ++x)
    for (int y = x; y < u->order(); ++y) {
      Subgroup s = Subgroup::generated(u, {x, y});
      oracle.insert(s.members());
      for (int z = y; z < u->order(); ++z)
        oracle.insert(Subgroup::generated(u, {x, y, z}).members());
    }
  std::set<std::vector<int>> got;
  for (const Subgroup& s : subs) got.insert(s.members());
  CHECK(got == oracle);
  CHECK(got.size() == 19);  // 1 + 13 + 4 + 1 for the extraspecial group of order 27
}

TEST_CASE("all_subgroups: cap") {
  CHECK_THROWS(all_subgroups(b3_group(3), 100));
}

TEST_CASE("conjugation_hom") {
  GroupPtr u = u3_group(3);
  // identity element acts as identity automorphism
  GroupHom id = conjugation_hom(u, u->label(FiniteGroup::kIdentity));
  for (int x = 0; x < u->order(); ++x) CHECK(id(x) == x);

  // diag(2,1,1): s12 -> s12^{t2/t1} = s12^{1/2} = s12^2; s23 fixed
  ZnMatrix t = ZnMatrix::identity(3, 3);
  t.set(0, 0, 2);
  GroupHom conj = conjugation_hom(u, t);
  int s12 = unitriangular_generator(*u, 0, 1);
  int s23 = unitriangular_generator(*u, 1, 2);
  CHECK(conj(s12) == u->pow(s12, 2));
  CHECK(conj(s23) == s23);

  // inner conjugation stays inside
  GroupHom inner = conjugation_hom(u, u->label(s12));
  for (int x = 0; x < u->order(); ++x) CHECK(inner(x) == u->conj(s12, x));

  // a non-normalizing element: the permutation-matrix swap of rows 1,2
  ZnMatrix bad(3, 3, 3);
  bad.set(0, 1, 1);
  bad.set(1, 0, 1);
  bad.set(2, 2, 1);
  CHECK_THROWS(conjugation_hom(u, bad));
}

TEST_CASE("subgroup machinery") {
  GroupPtr u = u3_group(3);
  int s12 = unitriangular_generator(*u, 0, 1);
  int s13 = unitriangular_generator(*u, 0, 2);
  Subgroup n = Subgroup::generated(u, {s12, s13});
  Subgroup z = Subgroup::generated(u, {s13});
  CHECK(n.contains_subgroup(z));
  CHECK(!z.contains_subgroup(n));
  CHECK(n.group()->is_abelian());
  CHECK(!u->is_abelian());
  GroupHom incl = n.inclusion();
  for (int i = 0; i < n.order(); ++i) CHECK(incl(i) == n.to_parent(i));
  CHECK_THROWS(Subgroup(u, std::vector<int>{0, s12}));  // not closed
}

TEST_CASE("element orders and powers") {
  GroupPtr g = cyclic_group(12);
  CHECK(g->element_order(1) == 12);
  CHECK(g->element_order(4) == 3);
  CHECK(g->pow(1, 25) == 1);
  CHECK(g->pow(1, -1) == 11);
}
