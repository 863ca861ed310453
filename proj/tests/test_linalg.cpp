#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "coh2/linalg.hpp"
#include "coh2/smith.hpp"

using namespace coh2;

namespace {

// All Z/n-combinations of the rows, by closure under row addition.
std::set<std::vector<u32>> enumerate_span(const ZnMatrix& m) {
  std::set<std::vector<u32>> span;
  span.insert(std::vector<u32>(m.cols(), 0));
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<u32>> current(span.begin(), span.end());
    for (const auto& v : current)
      for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<u32> w(v);
        for (std::size_t j = 0; j < m.cols(); ++j) w[j] = mod_add(w[j], m(i, j), m.modulus());
        if (span.insert(w).second) changed = true;
      }
  }
  return span;
}

ZnMatrix random_matrix(std::mt19937_64& rng, u32 n, std::size_t r, std::size_t c) {
  ZnMatrix m(n, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<i64>(rng() % n));
  return m;
}

}  // namespace

TEST_CASE("howell form: identity and single-row cases") {
  ZnMatrix id = ZnMatrix::identity(6, 3);
  CHECK(howell_form(id) == id);

  ZnMatrix single = ZnMatrix::from_rows(4, {{2}});
  ZnMatrix h = howell_form(single);
  CHECK(h.rows() == 1);
  CHECK(h(0, 0) == 2);
  auto span = enumerate_span(h);
  CHECK(span == std::set<std::vector<u32>>{{0}, {2}});
}

TEST_CASE("howell form mod 6: span of {(2,0),(0,3)} has 6 elements") {
  ZnMatrix m = ZnMatrix::from_rows(6, {{2, 0}, {0, 3}});
  ZnMatrix h = howell_form(m);
  CHECK(enumerate_span(h).size() == 6);
  CHECK(enumerate_span(h) == enumerate_span(m));
}

TEST_CASE("howell form is idempotent and span-preserving (randomized)") {
  std::mt19937_64 rng(12345);
  for (u32 n = 2; n <= 12; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t r = 1 + rng() % 4, c = 1 + rng() % 6;
      ZnMatrix m = random_matrix(rng, n, r, c);
      ZnMatrix h = howell_form(m);
      CHECK(howell_form(h) == h);
      // mutual membership of rows
      SpanTracker tm(n, c), th(n, c);
      for (std::size_t i = 0; i < m.rows(); ++i) tm.insert(m.row(i));
      for (std::size_t i = 0; i < h.rows(); ++i) th.insert(h.row(i));
      for (std::size_t i = 0; i < m.rows(); ++i) CHECK(th.contains(m.row(i)));
      for (std::size_t i = 0; i < h.rows(); ++i) CHECK(tm.contains(h.row(i)));
    }
}

TEST_CASE("solve: identity, impossible, and 2x=2 mod 4") {
  ZnMatrix id = ZnMatrix::identity(5, 3);
  std::vector<u32> rhs{1, 2, 3};
  auto x = solve_row(id, rhs);
  REQUIRE(x.has_value());
  CHECK(*x == rhs);

  ZnMatrix two = ZnMatrix::from_rows(4, {{2}});
  CHECK(!solve_row(two, std::vector<u32>{1}).has_value());

  auto y = solve_row(two, std::vector<u32>{2});
  REQUIRE(y.has_value());
  CHECK(((*y)[0] == 1 || (*y)[0] == 3));
}

TEST_CASE("solve: no-solution agrees with exhaustive search (small random)") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 60; ++trial) {
    u32 n = 2 + rng() % 9;
    std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
    ZnMatrix m = random_matrix(rng, n, r, c);
    std::vector<u32> rhs(c);
    for (auto& v : rhs) v = static_cast<u32>(rng() % n);
    auto got = solve_row(m, rhs);
    // exhaustive over all x in (Z/n)^r (n^r <= 9^3 = 729)
    bool exists = false;
    u64 total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= n;
    for (u64 e = 0; e < total && !exists; ++e) {
      std::vector<u32> x(r);
      u64 rest = e;
      for (std::size_t i = 0; i < r; ++i) {
        x[i] = static_cast<u32>(rest % n);
        rest /= n;
      }
      exists = row_times_matrix(x, m) == rhs;
    }
    CHECK(got.has_value() == exists);
    if (got) CHECK(row_times_matrix(*got, m) == rhs);
  }
}

TEST_CASE("kernel: examples") {
  // zero map on (Z/3)^2 -> kernel of size 9
  ZnMatrix zero(3, 2, 2);
  ZnMatrix k = kernel_basis(zero);
  CHECK(enumerate_span(k).size() == 9);

  // identity mod 7 -> kernel {0}
  CHECK(kernel_basis(ZnMatrix::identity(7, 3)).rows() == 0);

  // multiplication by 2 on Z/4 -> kernel {0,2}
  ZnMatrix twox = ZnMatrix::from_rows(4, {{2}});
  auto span = enumerate_span(kernel_basis(twox));
  CHECK(span == std::set<std::vector<u32>>{{0}, {2}});
}

TEST_CASE("kernel: rank-nullity for prime moduli (randomized)") {
  std::mt19937_64 rng(4242);
  for (u32 p : {2u, 3u, 5u, 7u})
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
      ZnMatrix m = random_matrix(rng, p, r, c);
      std::size_t rank = howell_form(m.transpose()).rows();  // column rank
      ZnMatrix k = kernel_basis(m);
      CHECK(k.rows() + rank == r);
      for (std::size_t i = 0; i < k.rows(); ++i) {
        auto prod = row_times_matrix(k.row(i), m);
        CHECK(std::all_of(prod.begin(), prod.end(), [](u32 v) { return v == 0; }));
      }
    }
}

TEST_CASE("kernel rows multiply to zero for composite moduli too") {
  std::mt19937_64 rng(99);
  for (u32 n : {4u, 6u, 8u, 9u, 12u})
    for (int trial = 0; trial < 15; ++trial) {
      ZnMatrix m = random_matrix(rng, n, 1 + rng() % 4, 1 + rng() % 4);
      ZnMatrix k = kernel_basis(m);
      for (std::size_t i = 0; i < k.rows(); ++i) {
        auto prod = row_times_matrix(k.row(i), m);
        CHECK(std::all_of(prod.begin(), prod.end(), [](u32 v) { return v == 0; }));
      }
      // completeness against exhaustive enumeration when small
      u64 total = 1;
      bool small = true;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        total *= n;
        if (total > 5000) small = false;
      }
      if (small) {
        SpanTracker tk(n, m.rows());
        for (std::size_t i = 0; i < k.rows(); ++i) tk.insert(k.row(i));
        for (u64 e = 0; e < total; ++e) {
          std::vector<u32> x(m.rows());
          u64 rest = e;
          for (std::size_t i = 0; i < m.rows(); ++i) {
            x[i] = static_cast<u32>(rest % n);
            rest /= n;
          }
          auto prod = row_times_matrix(x, m);
          bool in_kernel = std::all_of(prod.begin(), prod.end(), [](u32 v) { return v == 0; });
          CHECK(tk.contains(x) == in_kernel);
        }
      }
    }
}

TEST_CASE("span tracker: trivial and generator examples") {
  SpanTracker t(3, 2);
  CHECK(t.contains(std::vector<u32>{0, 0}));
  CHECK(t.insert(std::vector<u32>{1, 0}));
  CHECK(t.contains(std::vector<u32>{2, 0}));
  CHECK(!t.contains(std::vector<u32>{0, 1}));

  SpanTracker t4(4, 2);
  t4.insert(std::vector<u32>{2, 0});
  t4.insert(std::vector<u32>{0, 2});
  CHECK(!t4.contains(std::vector<u32>{1, 1}));
  CHECK(t4.contains(std::vector<u32>{2, 2}));
  CHECK(t4.span_size() == 4);
}

TEST_CASE("span tracker: membership agrees with exhaustive enumeration") {
  std::mt19937_64 rng(31337);
  for (u32 n : {2u, 3u, 4u, 5u, 6u, 8u, 9u, 12u, 16u})
    for (int trial = 0; trial < 10; ++trial) {
      std::size_t d = 1 + rng() % 4;
      std::size_t rows = 1 + rng() % 3;
      ZnMatrix m = random_matrix(rng, n, rows, d);
      SpanTracker t(n, d);
      bool grew_any = false;
      for (std::size_t i = 0; i < m.rows(); ++i) grew_any |= t.insert(m.row(i));
      auto span = enumerate_span(m);
      CHECK(t.span_size() == span.size());
      if (!m.is_zero()) CHECK(grew_any);
      // check all vectors of the ambient space (n^d <= 16^4 ok)
      u64 total = 1;
      for (std::size_t i = 0; i < d; ++i) total *= n;
      for (u64 e = 0; e < total; ++e) {
        std::vector<u32> v(d);
        u64 rest = e;
        for (std::size_t i = 0; i < d; ++i) {
          v[i] = static_cast<u32>(rest % n);
          rest /= n;
        }
        CHECK(t.contains(v) == (span.count(v) > 0));
      }
    }
}

TEST_CASE("span tracker: insertion order does not change membership") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    u32 n = 2 + rng() % 11;
    std::size_t d = 2 + rng() % 3;
    std::vector<std::vector<u32>> vecs;
    for (int i = 0; i < 4; ++i) {
      std::vector<u32> v(d);
      for (auto& x : v) x = static_cast<u32>(rng() % n);
      vecs.push_back(v);
    }
    SpanTracker a(n, d), b(n, d);
    for (const auto& v : vecs) a.insert(v);
    for (auto it = vecs.rbegin(); it != vecs.rend(); ++it) b.insert(*it);
    CHECK(a.canonical_basis() == b.canonical_basis());
  }
}

TEST_CASE("tracker express recovers solutions") {
  std::mt19937_64 rng(9001);
  for (int trial = 0; trial < 30; ++trial) {
    u32 n = 2 + rng() % 11;
    std::size_t d = 1 + rng() % 4, rows = 1 + rng() % 4;
    ZnMatrix m = random_matrix(rng, n, rows, d);
    SpanTracker t(n, d, true);
    for (std::size_t i = 0; i < m.rows(); ++i) t.insert(m.row(i));
    // random combination must be expressible
    std::vector<u32> coef(rows);
    for (auto& c : coef) c = static_cast<u32>(rng() % n);
    auto target = row_times_matrix(coef, m);
    auto expr = t.express(target);
    REQUIRE(expr.has_value());
    CHECK(row_times_matrix(*expr, m) == target);
  }
}

TEST_CASE("matrix inverse mod n") {
  ZnMatrix m = ZnMatrix::from_rows(9, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}});
  auto inv = m.inverse();
  REQUIRE(inv.has_value());
  CHECK(m * *inv == ZnMatrix::identity(9, 3));
  CHECK(*inv * m == ZnMatrix::identity(9, 3));

  ZnMatrix sing = ZnMatrix::from_rows(4, {{2, 0}, {0, 1}});
  CHECK(!sing.inverse().has_value());
}

TEST_CASE("smith machinery: quotient invariant factors") {
  // (Z/4)^2 / <(2,0)> = Z/2 x Z/4
  ZnMatrix sup = ZnMatrix::identity(4, 2);
  ZnMatrix sub = ZnMatrix::from_rows(4, {{2, 0}});
  auto f = quotient_invariant_factors(sub, sup);
  CHECK(f == std::vector<u64>{2, 4});

  // trivial quotient
  CHECK(quotient_invariant_factors(sup, sup).empty());
}
