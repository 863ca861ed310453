#include "coh2/extensions.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>


namespace coh2 {

namespace {

const ZnMatrix& matrix_label(const FiniteGroup& g, int idx) {
  if (!g.has_labels() || !std::holds_alternative<ZnMatrix>(g.label(idx)))
    throw std::invalid_argument("extension: group must have matrix labels");
  return std::get<ZnMatrix>(g.label(idx));
}

void check_factor_set(const Cochain& f, bool verify_cocycle) {
  if (!f.is_normalized()) throw std::logic_error("factor set not normalized");
  if (verify_cocycle && !is_cocycle(f)) throw std::logic_error("factor set not a cocycle");
}

// (S - I)/p as a matrix mod p; S must be I mod p.
ZnMatrix unit_offset(const ZnMatrix& s, u32 p) {
  const std::size_t n = s.rows();
  ZnMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      u32 d = mod_sub(s(i, j), i == j ? 1 : 0, p * p);
      if (d % p != 0) throw std::logic_error("matrix extension: section product not I mod p");
      m.set(i, j, d / p);
    }
  return m;
}

// Coordinates of an n x n matrix in a module's basis (full square or
// upper-triangular, matching the module rank).
std::vector<u32> matrix_to_coords(const ZnMatrix& m, std::size_t rank) {
  const std::size_t n = m.rows();
  std::vector<u32> out;
  out.reserve(rank);
  if (rank == n * n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.push_back(m(i, j));
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j >= i)
        out.push_back(m(i, j));
      else if (m(i, j) != 0)
        throw std::logic_error("matrix extension: factor set leaves the triangular kernel");
    }
  if (out.size() != rank) throw std::logic_error("matrix_to_coords: rank mismatch");
  return out;
}

ZnMatrix coords_to_matrix(std::span<const u32> a, std::size_t n, u32 p, bool upper_only) {
  ZnMatrix m(p, n, n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = upper_only ? i : 0; j < n; ++j) m.set(i, j, a[pos++]);
  return m;
}

ExtensionSpec matrix_family_factor_set(int n, u32 p, GroupPtr h, ModulePtr kernel,
                                       bool upper_only, bool verify_cocycle,
                                       const std::string& provenance) {
  const int ord = h->order();
  const u32 p2 = p * p;
  std::vector<ZnMatrix> section(ord), section_inv(ord);
  for (int x = 0; x < ord; ++x) {
    const ZnMatrix& l = matrix_label(*h, x);
    if (static_cast<int>(l.rows()) != n || l.modulus() != p)
      throw std::invalid_argument("matrix extension: label shape mismatch");
    section[x] = l.with_modulus(p2);  // entrywise lift of residues {0..p-1}
    auto inv = section[x].inverse();
    if (!inv) throw std::logic_error("matrix extension: section value not invertible mod p^2");
    section_inv[x] = std::move(*inv);
  }

  Cochain f = Cochain::zero(2, h, kernel);
  const std::size_t k = kernel->rank();
  for (int g = 0; g < ord; ++g)
    for (int x = 0; x < ord; ++x) {
      ZnMatrix s = section[g] * section[x] * section_inv[h->mul(g, x)];
      auto coords = matrix_to_coords(unit_offset(s, p), k);
      int t[2] = {g, x};
      std::copy(coords.begin(), coords.end(), f.at_mut({t, 2}).begin());
    }
  check_factor_set(f, verify_cocycle);

  // The H-action on the kernel must match conjugation by section values:
  // s(h)(I + pM)s(h)^-1 = I + p(h.M).
  for (int x = 0; x < ord; ++x)
    for (std::size_t b = 0; b < k; ++b) {
      std::vector<u32> e(k, 0);
      e[b] = 1;
      ZnMatrix em = coords_to_matrix(e, n, p, upper_only).with_modulus(p2).scaled(p) +
                    ZnMatrix::identity(p2, n);
      ZnMatrix conj = section[x] * em * section_inv[x];
      if (matrix_to_coords(unit_offset(conj, p), k) != kernel->act(x, e))
        throw std::logic_error("matrix extension: module action does not match conjugation");
    }

  ExtensionSpec ext;
  ext.quotient = h;
  ext.kernel = kernel;
  ext.factor_set = std::move(f);
  ext.matrix_section = std::move(section);
  ext.provenance = provenance;
  return ext;
}

}  // namespace

ExtensionSpec glnp2_factor_set(int n, u32 p, GroupPtr h, bool verify_cocycle) {
  std::ostringstream prov;
  prov << "gln_p2(n=" << n << ",p=" << p << ")";
  return matrix_family_factor_set(n, p, h, HModule::gl_conjugation(h, n, p), false,
                                  verify_cocycle, prov.str());
}

ExtensionSpec bnp2_factor_set(int n, u32 p, GroupPtr h, bool verify_cocycle) {
  std::ostringstream prov;
  prov << "bn_p2(n=" << n << ",p=" << p << ")";
  return matrix_family_factor_set(n, p, h, HModule::bn_conjugation(h, n, p), true,
                                  verify_cocycle, prov.str());
}

ExtensionSpec factor_set_from_groups(GroupPtr big, const GroupHom& pi,
                                     const std::vector<int>& kernel_basis_images, ModulePtr a) {
  if (pi.source != big) throw std::invalid_argument("factor_set_from_groups: pi not from big group");
  GroupPtr h = pi.target;
  if (a->group() != h) throw std::invalid_argument("factor_set_from_groups: module not over quotient");
  if (kernel_basis_images.size() != a->rank())
    throw std::invalid_argument("factor_set_from_groups: one image per module basis vector");

  // iota(v) = prod images[i]^{v_i}; must be a bijection onto ker(pi).
  std::vector<int> ker;
  for (int x = 0; x < big->order(); ++x)
    if (pi(x) == FiniteGroup::kIdentity) ker.push_back(x);
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (std::size_t j = i + 1; j < ker.size(); ++j)
      if (big->mul(ker[i], ker[j]) != big->mul(ker[j], ker[i]))
        throw std::invalid_argument("factor_set_from_groups: kernel not abelian");
  if (a->element_count() != ker.size())
    throw std::invalid_argument("factor_set_from_groups: |A| != |ker pi|");

  auto iota = [&](std::span<const u32> v) {
    int out = FiniteGroup::kIdentity;
    for (std::size_t i = 0; i < v.size(); ++i)
      out = big->mul(out, big->pow(kernel_basis_images[i], v[i]));
    return out;
  };
  std::map<int, std::vector<u32>> iota_inv;
  for (u64 e = 0; e < a->element_count(); ++e) {
    auto v = a->element_at(e);
    int g = iota(v);
    if (pi(g) != FiniteGroup::kIdentity || !iota_inv.emplace(g, v).second)
      throw std::invalid_argument("factor_set_from_groups: iota not a bijection onto ker pi");
  }

  // Section: smallest preimage index; s(1) = 1 because the identity has index 0.
  std::vector<int> section(h->order(), -1);
  for (int x = 0; x < big->order(); ++x)
    if (section[pi(x)] < 0) section[pi(x)] = x;
  for (int y = 0; y < h->order(); ++y)
    if (section[y] < 0) throw std::invalid_argument("factor_set_from_groups: pi not surjective");

  // Conjugation must realize the module action.
  for (int y = 0; y < h->order(); ++y)
    for (std::size_t b = 0; b < a->rank(); ++b) {
      std::vector<u32> e(a->rank(), 0);
      e[b] = 1;
      int lhs = big->mul(big->mul(section[y], iota(e)), big->inv(section[y]));
      if (lhs != iota(a->act(y, e)))
        throw std::invalid_argument("factor_set_from_groups: action mismatch with conjugation");
    }

  Cochain f = Cochain::zero(2, h, a);
  for (int g = 0; g < h->order(); ++g)
    for (int x = 0; x < h->order(); ++x) {
      int prod = big->mul(big->mul(section[g], section[x]), big->inv(section[h->mul(g, x)]));
      auto it = iota_inv.find(prod);
      if (it == iota_inv.end())
        throw std::logic_error("factor_set_from_groups: section defect not in kernel");
      int t[2] = {g, x};
      std::copy(it->second.begin(), it->second.end(), f.at_mut({t, 2}).begin());
    }
  check_factor_set(f, true);

  ExtensionSpec ext;
  ext.quotient = h;
  ext.kernel = a;
  ext.factor_set = std::move(f);
  ext.table_section = std::move(section);
  ext.big_group = big;
  ext.provenance = "from_tables";
  return ext;
}

ExtensionSpec cyclic_kummer_extension(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("cyclic_kummer: m,n must be positive");
  GroupPtr big = cyclic_group(m * n);
  GroupPtr h = cyclic_group(m);
  // Cyclic closure enumerates powers in order, so index = exponent.
  std::vector<int> im(big->order());
  for (int i = 0; i < big->order(); ++i) im[i] = i % m;
  GroupHom pi = GroupHom::validated(big, h, std::move(im));
  ModulePtr a = HModule::trivial(h, static_cast<u32>(n), 1);
  ExtensionSpec ext = factor_set_from_groups(big, pi, {m % (m * n)}, a);
  std::ostringstream prov;
  prov << "cyclic_kummer(m=" << m << ",n=" << n << ")";
  ext.provenance = prov.str();
  return ext;
}

LiftResult lift_decision(const GroupHom& rho, const ExtensionSpec& ext) {
  if (rho.target != ext.quotient) throw std::invalid_argument("lift_decision: rho target mismatch");
  Cochain pulled = pullback(ext.factor_set, rho);
  CohomologyContext ctx(pulled.group, pulled.module);
  auto x = ctx.coboundary_preimage(pulled);
  if (!x) return LiftResult{};

  LiftResult res;
  res.lifts = true;
  Cochain y = x->scaled(-1);
  // Multiplicativity in factor-set coordinates:
  // y(gd) = y(g) + g.y(d) + f(rho g, rho d).
  const GroupPtr& gamma = rho.source;
  const u32 n = pulled.module->modulus();
  for (int g = 0; g < gamma->order(); ++g)
    for (int d = 0; d < gamma->order(); ++d) {
      int gd = gamma->mul(g, d);
      auto gyd = pulled.module->act(g, y.at({&d, 1}));
      auto f = pulled.at2(g, d);
      auto yg = y.at({&g, 1});
      auto ygd = y.at({&gd, 1});
      for (std::size_t i = 0; i < gyd.size(); ++i)
        if (ygd[i] != mod_add(mod_add(yg[i], gyd[i], n), f[i], n))
          throw std::logic_error("lift_decision: lift not multiplicative");
    }
  res.witness = std::move(y);

  if (!ext.matrix_section.empty()) {
    const std::size_t k = ext.kernel->rank();
    const std::size_t dim = ext.matrix_section[0].rows();
    const u32 p2 = ext.matrix_section[0].modulus();
    u32 p = 1;
    while (p * p < p2) ++p;
    bool upper_only = k != dim * dim;
    std::vector<ZnMatrix> lifts;
    for (int g = 0; g < gamma->order(); ++g) {
      ZnMatrix ym = coords_to_matrix(res.witness->at({&g, 1}), dim, p, upper_only);
      ZnMatrix el = (ZnMatrix::identity(p2, dim) + ym.with_modulus(p2).scaled(p)) *
                    ext.matrix_section[rho(g)];
      lifts.push_back(std::move(el));
    }
    for (int g = 0; g < gamma->order(); ++g)
      for (int d = 0; d < gamma->order(); ++d)
        if (lifts[g] * lifts[d] != lifts[gamma->mul(g, d)])
          throw std::logic_error("lift_decision: matrix lift not multiplicative");
    res.matrix_lift = std::move(lifts);
  }
  return res;
}

bool exhaustive_lift_exists(const GroupHom& rho, const ExtensionSpec& ext, u64 cap) {
  const GroupPtr& gamma = rho.source;
  ModulePtr mod = HModule::pulled_back(ext.kernel, rho);
  const Cochain f = pullback(ext.factor_set, rho);
  const u32 n = mod->modulus();
  const auto& gens = gamma->generator_indices();
  u64 assignments = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (assignments > cap / std::max<u64>(1, mod->element_count()))
      throw std::runtime_error("exhaustive_lift_exists: cap exceeded");
    assignments *= mod->element_count();
  }

  for (u64 asg = 0; asg < assignments; ++asg) {
    // candidate values of y on the generators
    std::vector<std::vector<u32>> y(gamma->order());
    std::vector<bool> have(gamma->order(), false);
    y[FiniteGroup::kIdentity].assign(mod->rank(), 0);
    have[FiniteGroup::kIdentity] = true;
    u64 rest = asg;
    bool consistent = true;
    for (int gi : gens) {
      u64 e = rest % mod->element_count();
      rest /= mod->element_count();
      auto val = mod->element_at(e);
      if (have[gi] && y[gi] != val) {
        consistent = false;
        break;
      }
      y[gi] = val;
      have[gi] = true;
    }
    if (!consistent) continue;
    // extend via y(u*g) = y(u) + u.y(g) + f(u, g)
    bool progress = true;
    while (progress && consistent) {
      progress = false;
      for (int u = 0; u < gamma->order() && consistent; ++u) {
        if (!have[u]) continue;
        for (int gi : gens) {
          int ug = gamma->mul(u, gi);
          auto uyg = mod->act(u, y[gi]);
          auto fv = f.at2(u, gi);
          std::vector<u32> val(mod->rank());
          for (std::size_t i = 0; i < val.size(); ++i)
            val[i] = mod_add(mod_add(y[u][i], uyg[i], n), fv[i], n);
          if (!have[ug]) {
            y[ug] = std::move(val);
            have[ug] = true;
            progress = true;
          } else if (y[ug] != val) {
            consistent = false;
            break;
          }
        }
      }
    }
    if (!consistent || !std::all_of(have.begin(), have.end(), [](bool b) { return b; })) continue;
    // full multiplicativity
    bool ok = true;
    for (int u = 0; u < gamma->order() && ok; ++u)
      for (int v = 0; v < gamma->order() && ok; ++v) {
        int uv = gamma->mul(u, v);
        auto uyv = mod->act(u, y[v]);
        auto fv = f.at2(u, v);
        for (std::size_t i = 0; i < uyv.size(); ++i)
          if (y[uv][i] != mod_add(mod_add(y[u][i], uyv[i], n), fv[i], n)) {
            ok = false;
            break;
          }
      }
    if (ok) return true;
  }
  return false;
}

ZnMatrix conj_norm(const ZnMatrix& sigma, const ZnMatrix& m, std::optional<u32> ord) {
  auto sinv = sigma.inverse();
  if (!sinv) throw std::invalid_argument("conj_norm: sigma not invertible");
  u32 terms = ord.value_or(sigma.modulus());
  ZnMatrix acc(m.modulus(), m.rows(), m.cols());
  ZnMatrix cur = m;
  for (u32 i = 0; i < terms; ++i) {
    acc = acc + cur;
    cur = sigma * cur * *sinv;
  }
  return acc;
}

std::optional<ZnMatrix> order_p_lift_search(const ZnMatrix& sigma, LiftSearchMode mode, u64 cap) {
  const u32 p = sigma.modulus();
  const std::size_t n = sigma.rows();
  if (sigma.pow(p) != ZnMatrix::identity(p, n))
    throw std::invalid_argument("order_p_lift_search: sigma^p != I");
  const u32 p2 = p * p;
  ZnMatrix lift = sigma.with_modulus(p2);
  ZnMatrix target = lift.pow(p);

  auto try_tau = [&](const ZnMatrix& a) -> std::optional<ZnMatrix> {
    ZnMatrix tau = (ZnMatrix::identity(p2, n) + a.with_modulus(p2).scaled(p)) * lift;
    if (tau.pow(p) == ZnMatrix::identity(p2, n)) return tau;
    return std::nullopt;
  };

  if (mode == LiftSearchMode::Exhaustive) {
    u64 total = 1;
    for (std::size_t i = 0; i < n * n; ++i) {
      total *= p;
      if (total > cap) throw std::runtime_error("order_p_lift_search: exhaustive cap exceeded");
    }
    ZnMatrix a(p, n, n);
    for (u64 e = 0; e < total; ++e) {
      u64 rest = e;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          a.set(i, j, static_cast<i64>(rest % p));
          rest /= p;
        }
      if (auto tau = try_tau(a)) return tau;
    }
    return std::nullopt;
  }

  // Linear criterion: tau^p = lift^p + p N_sigma(a); solve N_sigma(a) = -(lift^p - I)/p.
  ZnMatrix rhs = unit_offset(target, p).scaled(-1);
  ZnMatrix nop(p, n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ZnMatrix e(p, n, n);
      e.set(i, j, 1);
      ZnMatrix ne = conj_norm(sigma, e);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) nop.set(i * n + j, a * n + b, ne(a, b));
    }
  std::vector<u32> rhs_flat;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rhs_flat.push_back(rhs(i, j));
  auto x = solve_row(nop, rhs_flat);
  if (!x) return std::nullopt;
  ZnMatrix a(p, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, (*x)[i * n + j]);
  auto tau = try_tau(a);
  if (!tau) throw std::logic_error("order_p_lift_search: linear criterion produced a bad lift");
  return tau;
}

TwoGeneratorLiftReport two_generator_lift_system(u32 p, bool zero_rhs) {
  const std::size_t n = 3, nn = n * n;
  ZnMatrix s12 = ZnMatrix::identity(p, n);
  s12.set(0, 1, 1);
  ZnMatrix s13 = ZnMatrix::identity(p, n);
  s13.set(0, 2, 1);
  const ZnMatrix s12inv = *s12.inverse();
  const ZnMatrix s13inv = *s13.inverse();

  // 18 unknowns (a then b), 27 equations in three blocks of 9.
  ZnMatrix coeffs(p, 2 * nn, 3 * nn);
  auto fill = [&](const ZnMatrix& img, std::size_t unknown, std::size_t block) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        coeffs.set(unknown, block * nn + i * n + j,
                   static_cast<i64>(coeffs(unknown, block * nn + i * n + j)) + img(i, j));
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ZnMatrix e(p, n, n);
      e.set(i, j, 1);
      std::size_t ua = i * n + j, ub = nn + i * n + j;
      fill(conj_norm(s12, e), ua, 0);                  // N_s12(a)
      fill(conj_norm(s13, e), ub, 1);                  // N_s13(b)
      fill(s13 * e * s13inv - e, ua, 2);               // (s13 - 1)a
      fill((s12 * e * s12inv - e).scaled(-1), ub, 2);  // -(s12 - 1)b
    }

  std::vector<u32> rhs(3 * nn, 0);
  if (!zero_rhs) {
    rhs[0 * nn + 0 * n + 1] = p - 1;  // -E12
    rhs[1 * nn + 0 * n + 2] = p - 1;  // -E13
  }

  TwoGeneratorLiftReport rep;
  rep.coeffs = coeffs;
  rep.rhs = rhs;
  auto x = solve_row(coeffs, rhs);
  if (x) {
    rep.consistent = true;
    ZnMatrix a(p, n, n), b(p, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a.set(i, j, (*x)[i * n + j]);
        b.set(i, j, (*x)[nn + i * n + j]);
      }
    rep.solution = std::make_pair(std::move(a), std::move(b));
    return rep;
  }
  rep.consistent = false;

  // Certificate z: C z = 0 with rhs . z != 0.  The two-equation witness
  // (entry (1,2) of the first norm block against entry (2,3) of the
  // commutation block, both constraining only a21) is tried first.
  auto check_cert = [&](const std::vector<std::pair<std::size_t, u32>>& comb) {
    std::vector<u32> cz(2 * nn, 0);
    u64 rz = 0;
    for (auto [eq, c] : comb) {
      for (std::size_t u = 0; u < 2 * nn; ++u)
        cz[u] = mod_add(cz[u], mod_mul(c, coeffs(u, eq), p), p);
      rz = (rz + static_cast<u64>(c) * rhs[eq]) % p;
    }
    return std::all_of(cz.begin(), cz.end(), [](u32 v) { return v == 0; }) && rz % p != 0;
  };
  std::vector<std::pair<std::size_t, u32>> canonical{{0 * nn + 0 * n + 1, 1},
                                                     {2 * nn + 1 * n + 2, 1}};
  if (check_cert(canonical)) {
    rep.certificate = TwoGeneratorLiftReport::Certificate{
        canonical,
        "entry (1,2) of N_s12(a) = -E12 forces a21 = -1; entry (2,3) of "
        "(s13-1)a = (s12-1)b forces a21 = 0"};
    return rep;
  }
  ZnMatrix cz_kernel = kernel_basis(coeffs.transpose());
  for (std::size_t i = 0; i < cz_kernel.rows(); ++i) {
    u64 rz = 0;
    for (std::size_t j = 0; j < rhs.size(); ++j)
      rz = (rz + static_cast<u64>(cz_kernel(i, j)) * rhs[j]) % p;
    if (rz % p == 0) continue;
    std::vector<std::pair<std::size_t, u32>> comb;
    for (std::size_t j = 0; j < rhs.size(); ++j)
      if (cz_kernel(i, j)) comb.emplace_back(j, cz_kernel(i, j));
    rep.certificate = TwoGeneratorLiftReport::Certificate{std::move(comb), "kernel combination witness"};
    return rep;
  }
  throw std::logic_error("two_generator_lift_system: inconsistent but no certificate found");
}

}  // namespace coh2
