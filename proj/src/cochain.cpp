#include "coh2/cochain.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "coh2/parallel.hpp"
#include "coh2/smith.hpp"

namespace coh2 {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

Cochain Cochain::zero(int degree, GroupPtr g, ModulePtr m) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("Cochain: degree must be 0..3");
  if (m->group() != g) throw std::invalid_argument("Cochain: module over a different group");
  Cochain c;
  c.degree = degree;
  c.group = std::move(g);
  c.module = std::move(m);
  c.coeffs.assign(ipow(c.group->order(), degree) * c.module->rank(), 0);
  return c;
}

std::size_t Cochain::tuple_count() const { return ipow(group->order(), degree); }

std::size_t Cochain::tuple_index(std::span<const int> tuple) const {
  std::size_t idx = 0;
  for (int g : tuple) idx = idx * group->order() + g;
  return idx;
}

std::span<const u32> Cochain::at(std::span<const int> tuple) const {
  std::size_t k = module->rank();
  return {coeffs.data() + tuple_index(tuple) * k, k};
}

std::span<u32> Cochain::at_mut(std::span<const int> tuple) {
  std::size_t k = module->rank();
  return {coeffs.data() + tuple_index(tuple) * k, k};
}

std::span<const u32> Cochain::at2(int g, int h) const {
  std::size_t k = module->rank();
  return {coeffs.data() + (static_cast<std::size_t>(g) * group->order() + h) * k, k};
}

Cochain Cochain::operator+(const Cochain& o) const {
  if (degree != o.degree || group != o.group || module != o.module)
    throw std::invalid_argument("Cochain sum: mismatch");
  Cochain out = *this;
  u32 n = module->modulus();
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = mod_add(coeffs[i], o.coeffs[i], n);
  return out;
}

Cochain Cochain::operator-(const Cochain& o) const {
  if (degree != o.degree || group != o.group || module != o.module)
    throw std::invalid_argument("Cochain difference: mismatch");
  Cochain out = *this;
  u32 n = module->modulus();
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = mod_sub(coeffs[i], o.coeffs[i], n);
  return out;
}

Cochain Cochain::scaled(i64 c) const {
  Cochain out = *this;
  u32 n = module->modulus();
  u32 cc = mod_reduce(c, n);
  for (auto& v : out.coeffs) v = mod_mul(v, cc, n);
  return out;
}

bool Cochain::operator==(const Cochain& o) const {
  return degree == o.degree && group == o.group && module == o.module && coeffs == o.coeffs;
}

bool Cochain::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](u32 v) { return v == 0; });
}

bool Cochain::is_normalized() const {
  const int n = group->order();
  const std::size_t k = module->rank();
  if (degree == 0) return true;
  auto zero_at = [&](std::size_t t) {
    const u32* p = coeffs.data() + t * k;
    return std::all_of(p, p + k, [](u32 v) { return v == 0; });
  };
  if (degree == 1) return zero_at(FiniteGroup::kIdentity);
  if (degree == 2) {
    for (int g = 0; g < n; ++g)
      if (!zero_at(static_cast<std::size_t>(g) * n) || !zero_at(static_cast<std::size_t>(0) * n + g))
        return false;
    return true;
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      std::size_t gh = static_cast<std::size_t>(g) * n + h;
      if (!zero_at(gh * n) || !zero_at((static_cast<std::size_t>(g) * n) * n + h) ||
          !zero_at((static_cast<std::size_t>(0) * n + g) * n + h))
        return false;
    }
  return true;
}

namespace {

// (dc) at one output tuple, accumulated into out[0..k).
void eval_differential(const Cochain& c, std::span<const int> t, u32* out) {
  const u32 n = c.module->modulus();
  const std::size_t k = c.module->rank();
  const FiniteGroup& grp = *c.group;
  auto add = [&](std::span<const u32> v, bool neg) {
    for (std::size_t i = 0; i < k; ++i)
      out[i] = neg ? mod_sub(out[i], v[i], n) : mod_add(out[i], v[i], n);
  };
  std::fill(out, out + k, 0);
  switch (c.degree) {
    case 0: {
      // (dc)(g) = g*a - a
      auto ga = c.module->act(t[0], c.coeffs);
      add(ga, false);
      add(c.coeffs, true);
      break;
    }
    case 1: {
      // (dc)(g,h) = g*c(h) - c(gh) + c(g)
      auto gch = c.module->act(t[0], c.at({&t[1], 1}));
      add(gch, false);
      int gh = grp.mul(t[0], t[1]);
      add(c.at({&gh, 1}), true);
      add(c.at({&t[0], 1}), false);
      break;
    }
    case 2: {
      // (dc)(g,h,l) = g*c(h,l) - c(gh,l) + c(g,hl) - c(g,h)
      auto first = c.module->act(t[0], c.at2(t[1], t[2]));
      add(first, false);
      add(c.at2(grp.mul(t[0], t[1]), t[2]), true);
      add(c.at2(t[0], grp.mul(t[1], t[2])), false);
      add(c.at2(t[0], t[1]), true);
      break;
    }
    default:
      throw std::invalid_argument("differential: no C^4 is materialized");
  }
}

}  // namespace

Cochain differential(const Cochain& c) {
  if (c.degree >= 3) throw std::invalid_argument("differential: no C^4 is materialized");
  Cochain out = Cochain::zero(c.degree + 1, c.group, c.module);
  const int n = c.group->order();
  const std::size_t k = c.module->rank();
  const std::size_t tuples = out.tuple_count();
  parallel_for(tuples, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> t(c.degree + 1);
    for (std::size_t idx = lo; idx < hi; ++idx) {
      std::size_t rest = idx;
      for (int d = c.degree; d >= 0; --d) {
        t[d] = static_cast<int>(rest % n);
        rest /= n;
      }
      eval_differential(c, t, out.coeffs.data() + idx * k);
    }
  });
  return out;
}

bool is_cocycle(const Cochain& c) {
  if (c.degree >= 3) throw std::invalid_argument("is_cocycle: degree 3 cochains have no materialized d");
  const int n = c.group->order();
  const std::size_t k = c.module->rank();
  const std::size_t tuples = ipow(n, c.degree + 1);
  std::atomic<bool> ok{true};
  parallel_for(tuples, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> t(c.degree + 1);
    std::vector<u32> buf(k);
    for (std::size_t idx = lo; idx < hi && ok.load(std::memory_order_relaxed); ++idx) {
      std::size_t rest = idx;
      for (int d = c.degree; d >= 0; --d) {
        t[d] = static_cast<int>(rest % n);
        rest /= n;
      }
      eval_differential(c, t, buf.data());
      if (!std::all_of(buf.begin(), buf.end(), [](u32 v) { return v == 0; }))
        ok.store(false, std::memory_order_relaxed);
    }
  });
  return ok.load();
}

namespace {

// The differential of the basis 1-cochain (e_j at g0), one dense row of
// the C^1 -> C^2 matrix:  (dx)(a,b) = a*x(b) - x(ab) + x(a).
void fill_d1_row(const GroupPtr& g, const ModulePtr& m, int g0, std::size_t j,
                 std::vector<u32>& row) {
  const int n = g->order();
  const std::size_t k = m->rank();
  const u32 mod = m->modulus();
  std::fill(row.begin(), row.end(), 0);
  auto col = [&](int a, int b, std::size_t jj) {
    return (static_cast<std::size_t>(a) * n + b) * k + jj;
  };
  for (int a = 0; a < n; ++a) {
    const ZnMatrix& act = m->action(a);
    for (std::size_t s = 0; s < k; ++s) {
      u32 v = act(j, s);
      if (v) row[col(a, g0, s)] = mod_add(row[col(a, g0, s)], v, mod);
    }
  }
  for (int a = 0; a < n; ++a) {
    int b = g->mul(g->inv(a), g0);  // ab = g0
    std::size_t c = col(a, b, j);
    row[c] = mod_sub(row[c], 1 % mod, mod);
  }
  for (int b = 0; b < n; ++b) {
    std::size_t c = col(g0, b, j);
    row[c] = mod_add(row[c], 1 % mod, mod);
  }
}

// Dense d1 matrices are only kept for instances of this size or below;
// larger contexts still track the coboundary span row by row.
constexpr std::size_t kDenseD1Limit = 1u << 16;

}  // namespace

CohomologyContext::CohomologyContext(GroupPtr g, ModulePtr m)
    : group_(g),
      module_(m),
      d1_(m->modulus(), 0, 0),
      solver_(m->modulus(),
              static_cast<std::size_t>(g->order()) * g->order() * m->rank(), true) {
  const std::size_t c1 = static_cast<std::size_t>(g->order()) * m->rank();
  const std::size_t c2 = solver_.ambient_dim();
  bool keep_dense = c2 <= kDenseD1Limit;
  if (keep_dense) d1_ = ZnMatrix(m->modulus(), c1, c2);
  std::vector<u32> row(c2);
  for (int g0 = 0; g0 < g->order(); ++g0)
    for (std::size_t j = 0; j < m->rank(); ++j) {
      fill_d1_row(g, m, g0, j, row);
      solver_.insert(row);
      if (keep_dense) {
        auto dst = d1_.row_mut(static_cast<std::size_t>(g0) * m->rank() + j);
        std::copy(row.begin(), row.end(), dst.begin());
      }
    }
  c1_dim_ = c1;
}

const ZnMatrix& CohomologyContext::d1() const {
  if (d1_.cols() == 0 && c2_dim() != 0)
    throw std::logic_error("CohomologyContext::d1: instance too large for the dense matrix");
  return d1_;
}

bool CohomologyContext::is_coboundary(const Cochain& c) const {
  if (c.degree != 2 || c.group != group_ || c.module != module_)
    throw std::invalid_argument("is_coboundary: cochain mismatch");
  return solver_.contains(c.coeffs);
}

std::optional<Cochain> CohomologyContext::coboundary_preimage(const Cochain& c) const {
  if (c.degree != 2 || c.group != group_ || c.module != module_)
    throw std::invalid_argument("coboundary_preimage: cochain mismatch");
  if (!is_cocycle(c)) throw std::invalid_argument("coboundary_preimage: input is not a cocycle");
  auto x = solver_.express(c.coeffs);
  if (!x) return std::nullopt;
  Cochain out = Cochain::zero(1, group_, module_);
  out.coeffs = std::move(*x);
  if (differential(out) != c) throw std::logic_error("coboundary_preimage: verification failed");
  return out;
}

SpanTracker CohomologyContext::coboundary_tracker() const {
  SpanTracker tr(module_->modulus(), c2_dim());
  std::vector<u32> row(c2_dim());
  for (int g0 = 0; g0 < group_->order(); ++g0)
    for (std::size_t j = 0; j < module_->rank(); ++j) {
      fill_d1_row(group_, module_, g0, j, row);
      tr.insert(row);
    }
  return tr;
}

ZnMatrix d2_matrix(const GroupPtr& g, const ModulePtr& m) {
  const int n = g->order();
  const std::size_t k = m->rank();
  const std::size_t c2 = static_cast<std::size_t>(n) * n * k;
  const std::size_t c3 = static_cast<std::size_t>(n) * n * n * k;
  ZnMatrix d2(m->modulus(), c2, c3);
  auto col3 = [&](int a, int b, int c, std::size_t j) {
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * k + j;
  };
  for (int g1 = 0; g1 < n; ++g1)
    for (int g2 = 0; g2 < n; ++g2)
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t row = (static_cast<std::size_t>(g1) * n + g2) * k + j;
        // (dc)(a,g1,g2) gets +a*e_j
        for (int a = 0; a < n; ++a) {
          const ZnMatrix& act = m->action(a);
          for (std::size_t s = 0; s < k; ++s) {
            u32 v = act(j, s);
            if (v)
              d2.set(row, col3(a, g1, g2, s), static_cast<i64>(d2(row, col3(a, g1, g2, s))) + v);
          }
        }
        // -c(gh,l): tuples (a,b,g2) with ab = g1
        for (int a = 0; a < n; ++a) {
          int b = g->mul(g->inv(a), g1);
          d2.set(row, col3(a, b, g2, j), static_cast<i64>(d2(row, col3(a, b, g2, j))) - 1);
        }
        // +c(g,hl): tuples (g1,b,c) with bc = g2
        for (int b = 0; b < n; ++b) {
          int c = g->mul(g->inv(b), g2);
          d2.set(row, col3(g1, b, c, j), static_cast<i64>(d2(row, col3(g1, b, c, j))) + 1);
        }
        // -c(g,h): tuples (g1,g2,c)
        for (int c = 0; c < n; ++c)
          d2.set(row, col3(g1, g2, c, j), static_cast<i64>(d2(row, col3(g1, g2, c, j))) - 1);
      }
  return d2;
}

std::vector<u64> CohomologyContext::h2_invariant_factors(std::size_t max_dim) const {
  if (c2_dim() > max_dim) throw std::runtime_error("h2_invariant_factors: dim C^2 exceeds --max-h2-dim");
  ZnMatrix z2 = kernel_basis(d2_matrix(group_, module_));
  return quotient_invariant_factors(d1(), z2);
}

}  // namespace coh2
