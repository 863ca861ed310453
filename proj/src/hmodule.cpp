#include "coh2/hmodule.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace coh2 {

HModule::HModule(GroupPtr g, u32 modulus, std::size_t rank, std::vector<ZnMatrix> actions,
                 std::vector<std::string> labels)
    : group_(std::move(g)),
      modulus_(modulus),
      rank_(rank),
      action_(std::move(actions)),
      basis_labels_(std::move(labels)) {
  if (modulus_ == 0) throw std::invalid_argument("HModule: modulus must be positive");
  if (action_.size() != static_cast<std::size_t>(group_->order()))
    throw std::invalid_argument("HModule: one action matrix per group element required");
  for (const auto& m : action_)
    if (m.rows() != rank_ || m.cols() != rank_ || m.modulus() != modulus_)
      throw std::invalid_argument("HModule: action matrix shape or modulus mismatch");
  if (action_[FiniteGroup::kIdentity] != ZnMatrix::identity(modulus_, rank_))
    throw std::invalid_argument("HModule: identity must act trivially");
  // Right-action law: action(g*h) = action(h)*action(g).
  const int n = group_->order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (action_[group_->mul(a, b)] != action_[b] * action_[a])
        throw std::invalid_argument("HModule: action is not a homomorphism");
}

ModulePtr HModule::trivial(GroupPtr g, u32 modulus, std::size_t rank) {
  std::vector<ZnMatrix> acts(g->order(), ZnMatrix::identity(modulus, rank));
  return std::make_shared<HModule>(std::move(g), modulus, rank, std::move(acts),
                                   std::vector<std::string>{});
}

ModulePtr HModule::from_generator_actions(GroupPtr g, u32 modulus,
                                          const std::vector<ZnMatrix>& gen_actions) {
  const auto& gens = g->generator_indices();
  if (gen_actions.size() != gens.size())
    throw std::invalid_argument("from_generator_actions: one matrix per generator required");
  std::size_t rank = gen_actions.empty() ? 0 : gen_actions[0].rows();
  for (const auto& m : gen_actions)
    if (!m.inverse()) throw std::invalid_argument("from_generator_actions: action not invertible");
  std::vector<ZnMatrix> acts(g->order());
  std::vector<bool> have(g->order(), false);
  acts[FiniteGroup::kIdentity] = ZnMatrix::identity(modulus, rank);
  have[FiniteGroup::kIdentity] = true;
  std::vector<int> work{FiniteGroup::kIdentity};
  while (!work.empty()) {
    int e = work.back();
    work.pop_back();
    for (std::size_t k = 0; k < gens.size(); ++k) {
      int f = g->mul(e, gens[k]);
      if (have[f]) continue;
      acts[f] = gen_actions[k] * acts[e];
      have[f] = true;
      work.push_back(f);
    }
  }
  if (!std::all_of(have.begin(), have.end(), [](bool b) { return b; }))
    throw std::invalid_argument("from_generator_actions: generators do not generate the group");
  return std::make_shared<HModule>(std::move(g), modulus, rank, std::move(acts),
                                   std::vector<std::string>{});
}

namespace {

// Matrix of X -> L X Linv on n x n coordinates, row r = i*n+j.
ZnMatrix conj_matrix_full(const ZnMatrix& l, const ZnMatrix& linv) {
  const std::size_t n = l.rows();
  const u32 p = l.modulus();
  ZnMatrix out(p, n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
          out.set(i * n + j, a * n + c, static_cast<i64>(mod_mul(l(a, i), linv(j, c), p)));
  return out;
}

std::vector<std::pair<int, int>> upper_pairs(int n) {
  std::vector<std::pair<int, int>> ps;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) ps.emplace_back(i, j);
  return ps;
}

ZnMatrix conj_matrix_upper(const ZnMatrix& l, const ZnMatrix& linv) {
  const int n = static_cast<int>(l.rows());
  const u32 p = l.modulus();
  auto pairs = upper_pairs(n);
  ZnMatrix out(p, pairs.size(), pairs.size());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    // L E_ij Linv = (col i of L) outer (row j of Linv)
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      auto [a, c] = pairs[s];
      out.set(r, s, static_cast<i64>(mod_mul(l(a, i), linv(j, c), p)));
    }
    // Entries below the diagonal must vanish for the action to be defined.
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < a; ++c)
        if (mod_mul(l(a, i), linv(j, c), p) != 0)
          throw std::invalid_argument("bn_conjugation: action leaves the upper-triangular space");
  }
  return out;
}

const ZnMatrix& matrix_label(const FiniteGroup& g, int idx) {
  if (!g.has_labels() || !std::holds_alternative<ZnMatrix>(g.label(idx)))
    throw std::invalid_argument("module construction requires matrix labels");
  return std::get<ZnMatrix>(g.label(idx));
}

}  // namespace

ModulePtr HModule::gl_conjugation(GroupPtr g, int n, u32 p) {
  std::vector<ZnMatrix> acts;
  acts.reserve(g->order());
  for (int x = 0; x < g->order(); ++x) {
    const ZnMatrix& l = matrix_label(*g, x);
    const ZnMatrix& linv = matrix_label(*g, g->inv(x));
    if (static_cast<int>(l.rows()) != n || l.modulus() != p)
      throw std::invalid_argument("gl_conjugation: label shape mismatch");
    acts.push_back(conj_matrix_full(l, linv));
  }
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      std::ostringstream os;
      os << "E" << i << j;
      labels.push_back(os.str());
    }
  return std::make_shared<HModule>(std::move(g), p, static_cast<std::size_t>(n) * n,
                                   std::move(acts), std::move(labels));
}

ModulePtr HModule::bn_conjugation(GroupPtr g, int n, u32 p) {
  std::vector<ZnMatrix> acts;
  acts.reserve(g->order());
  for (int x = 0; x < g->order(); ++x)
    acts.push_back(conj_matrix_upper(matrix_label(*g, x), matrix_label(*g, g->inv(x))));
  std::vector<std::string> labels;
  for (auto [i, j] : upper_pairs(n)) {
    std::ostringstream os;
    os << "E" << i + 1 << j + 1;
    labels.push_back(os.str());
  }
  return std::make_shared<HModule>(std::move(g), p, upper_pairs(n).size(), std::move(acts),
                                   std::move(labels));
}

ModulePtr HModule::restricted(const ModulePtr& parent, const Subgroup& s) {
  if (s.parent() != parent->group())
    throw std::invalid_argument("HModule::restricted: subgroup of a different group");
  std::vector<ZnMatrix> acts;
  acts.reserve(s.order());
  for (int i = 0; i < s.order(); ++i) acts.push_back(parent->action(s.to_parent(i)));
  return std::make_shared<HModule>(s.group(), parent->modulus(), parent->rank(), std::move(acts),
                                   parent->basis_labels());
}

ModulePtr HModule::pulled_back(const ModulePtr& m, const GroupHom& f) {
  if (f.target != m->group())
    throw std::invalid_argument("HModule::pulled_back: hom target mismatch");
  std::vector<ZnMatrix> acts;
  acts.reserve(f.source->order());
  for (int i = 0; i < f.source->order(); ++i) acts.push_back(m->action(f(i)));
  return std::make_shared<HModule>(f.source, m->modulus(), m->rank(), std::move(acts),
                                   m->basis_labels());
}

std::vector<u32> HModule::act(int g, std::span<const u32> a) const {
  return row_times_matrix(a, action_[g]);
}

u64 HModule::element_count() const {
  u64 total = 1;
  for (std::size_t i = 0; i < rank_; ++i) {
    if (total > UINT64_MAX / modulus_) return UINT64_MAX;
    total *= modulus_;
  }
  return total;
}

std::vector<u32> HModule::element_at(u64 idx) const {
  std::vector<u32> a(rank_);
  for (std::size_t i = 0; i < rank_; ++i) {
    a[i] = static_cast<u32>(idx % modulus_);
    idx /= modulus_;
  }
  return a;
}

u64 HModule::index_of(std::span<const u32> a) const {
  u64 idx = 0;
  for (std::size_t i = rank_; i-- > 0;) idx = idx * modulus_ + a[i] % modulus_;
  return idx;
}

ZnMatrix invariants(const HModule& m, const Subgroup& h) {
  if (h.parent() != m.group()) throw std::invalid_argument("invariants: H not a subgroup of M.group");
  std::vector<int> gens;
  for (int gi : h.group()->generator_indices()) gens.push_back(h.to_parent(gi));
  const std::size_t k = m.rank();
  ZnMatrix stacked(m.modulus(), k, k * gens.size());
  for (std::size_t gpos = 0; gpos < gens.size(); ++gpos) {
    const ZnMatrix& a = m.action(gens[gpos]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        stacked.set(i, gpos * k + j, static_cast<i64>(a(i, j)) - (i == j ? 1 : 0));
  }
  return kernel_basis(stacked);
}

std::vector<u32> norm_map(const HModule& m, const Subgroup& h, const Subgroup& hp,
                          std::span<const u32> a) {
  if (h.parent() != m.group() || hp.parent() != m.group())
    throw std::invalid_argument("norm_map: subgroups of a different group");
  if (!h.contains_subgroup(hp)) throw std::invalid_argument("norm_map: H' not contained in H");
  for (int x : hp.members())
    if (m.act(x, a) != std::vector<u32>(a.begin(), a.end()))
      throw std::invalid_argument("norm_map: a is not H'-invariant");
  std::vector<u32> out(m.rank(), 0);
  for (int t : left_transversal_in(*m.group(), h.members(), hp.members())) {
    auto ta = m.act(t, a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod_add(out[i], ta[i], m.modulus());
  }
  return out;
}

Subgroup stabilizer(const HModule& m, std::span<const u32> a) {
  std::vector<int> members;
  std::vector<u32> av(a.begin(), a.end());
  for (int g = 0; g < m.group()->order(); ++g)
    if (m.act(g, a) == av) members.push_back(g);
  return Subgroup(m.group(), std::move(members));
}

ModuleHom ModuleHom::validated(ModulePtr src, ModulePtr dst, ZnMatrix mat) {
  if (src->group() != dst->group())
    throw std::invalid_argument("ModuleHom: modules over different groups");
  if (mat.rows() != src->rank() || mat.cols() != dst->rank() || mat.modulus() != dst->modulus())
    throw std::invalid_argument("ModuleHom: matrix shape or modulus mismatch");
  for (std::size_t i = 0; i < mat.rows(); ++i)
    for (std::size_t j = 0; j < mat.cols(); ++j)
      if (static_cast<u64>(src->modulus()) * mat(i, j) % dst->modulus() != 0)
        throw std::invalid_argument("ModuleHom: matrix does not kill src torsion");
  // Equivariance via mixed-modulus products: entries of the source action
  // are used as integer representatives.
  for (int g = 0; g < src->group()->order(); ++g) {
    const ZnMatrix lhs = src->action(g).with_modulus(dst->modulus()) * mat;
    const ZnMatrix rhs = mat * dst->action(g);
    if (lhs != rhs) throw std::invalid_argument("ModuleHom: not equivariant");
  }
  return ModuleHom{std::move(src), std::move(dst), std::move(mat)};
}

ModuleHom ModuleHom::identity(ModulePtr m) {
  ZnMatrix id = ZnMatrix::identity(m->modulus(), m->rank());
  return ModuleHom{m, m, std::move(id)};
}

ModuleHom ModuleHom::zero(ModulePtr src, ModulePtr dst) {
  ZnMatrix z(dst->modulus(), src->rank(), dst->rank());
  return ModuleHom{std::move(src), std::move(dst), std::move(z)};
}

std::vector<u32> ModuleHom::apply(std::span<const u32> a) const {
  return row_times_matrix(a, mat);
}

ZnMatrix conjugation_on_module(const HModule& m, const ZnMatrix& t) {
  auto tinv = t.inverse();
  if (!tinv) throw std::invalid_argument("conjugation_on_module: t not invertible");
  const std::size_t n = t.rows();
  if (m.rank() == n * n) return conj_matrix_full(t, *tinv);
  if (m.rank() == upper_pairs(static_cast<int>(n)).size()) return conj_matrix_upper(t, *tinv);
  throw std::invalid_argument("conjugation_on_module: module is not a matrix-coordinate module");
}

}  // namespace coh2
