#include "coh2/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coh2 {

// ---- labels ----

Perm Perm::identity(int degree) {
  Perm p;
  p.img.resize(degree);
  std::iota(p.img.begin(), p.img.end(), 0);
  return p;
}

Perm Perm::compose(const Perm& then) const {
  if (degree() != then.degree()) throw std::invalid_argument("Perm::compose: degree mismatch");
  Perm out;
  out.img.resize(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) out.img[i] = then.img[img[i]];
  return out;
}

Perm Perm::inverse() const {
  Perm out;
  out.img.resize(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) out.img[img[i]] = static_cast<int>(i);
  return out;
}

bool Perm::is_valid() const {
  std::vector<bool> seen(img.size(), false);
  for (int v : img) {
    if (v < 0 || v >= degree() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::string label_key(const Label& l) {
  std::ostringstream os;
  if (std::holds_alternative<Perm>(l)) {
    os << "p";
    for (int v : std::get<Perm>(l).img) os << ":" << v;
  } else {
    const ZnMatrix& m = std::get<ZnMatrix>(l);
    os << "m" << m.modulus() << "x" << m.rows();
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) os << ":" << m(i, j);
  }
  return os.str();
}

Label label_mul(const Label& a, const Label& b) {
  if (std::holds_alternative<Perm>(a))
    return std::get<Perm>(a).compose(std::get<Perm>(b));
  return std::get<ZnMatrix>(a) * std::get<ZnMatrix>(b);
}

std::optional<Label> label_inverse(const Label& l) {
  if (std::holds_alternative<Perm>(l)) {
    const Perm& p = std::get<Perm>(l);
    if (!p.is_valid()) return std::nullopt;
    return Label{p.inverse()};
  }
  auto inv = std::get<ZnMatrix>(l).inverse();
  if (!inv) return std::nullopt;
  return Label{*inv};
}

Label label_identity_like(const Label& l) {
  if (std::holds_alternative<Perm>(l)) return Perm::identity(std::get<Perm>(l).degree());
  const ZnMatrix& m = std::get<ZnMatrix>(l);
  return ZnMatrix::identity(m.modulus(), m.rows());
}

// ---- FiniteGroup ----

FiniteGroup::FiniteGroup(std::vector<u32> mult, std::vector<int> gen_indices, std::vector<Label> labels)
    : mult_(std::move(mult)), gens_(std::move(gen_indices)), labels_(std::move(labels)) {
  std::size_t n = 1;
  while (n * n < mult_.size()) ++n;
  if (n * n != mult_.size()) throw std::invalid_argument("FiniteGroup: table not square");
  order_ = static_cast<int>(n);
  finish_init();
}

void FiniteGroup::finish_init() {
  inv_.assign(order_, -1);
  for (int a = 0; a < order_; ++a) {
    for (int b = 0; b < order_; ++b)
      if (mul(a, b) == kIdentity) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0) throw std::invalid_argument("FiniteGroup: element without inverse");
  }
  for (int a = 0; a < order_; ++a)
    if (mul(a, kIdentity) != a || mul(kIdentity, a) != a)
      throw std::invalid_argument("FiniteGroup: identity law fails");
  if (!labels_.empty()) {
    label_index_.reserve(labels_.size());
    for (int i = 0; i < order_; ++i) label_index_.emplace(label_key(labels_[i]), i);
  }
}

GroupPtr FiniteGroup::generate(const std::vector<Label>& gens, const GenerateOptions& opt) {
  if (gens.empty()) throw std::invalid_argument("generate: need at least one generator");
  for (const auto& g : gens) {
    if (std::holds_alternative<Perm>(g)) {
      if (!std::get<Perm>(g).is_valid()) throw std::invalid_argument("generate: invalid permutation");
    } else if (!label_inverse(g)) {
      throw std::invalid_argument("generate: non-invertible matrix generator");
    }
  }
  if (opt.max_order > 65535) throw std::invalid_argument("generate: cap exceeds table limit (65535)");

  std::vector<Label> elems;
  std::unordered_map<std::string, int> index;
  auto add = [&](const Label& l) -> int {
    auto key = label_key(l);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (elems.size() >= opt.max_order) throw std::runtime_error("generate: closure cap exceeded");
    int id = static_cast<int>(elems.size());
    elems.push_back(l);
    index.emplace(std::move(key), id);
    return id;
  };

  add(label_identity_like(gens[0]));
  std::vector<int> gen_idx;
  // parent/generator factorization: elems[i] = elems[parent[i]] * gens[via[i]]
  std::vector<int> parent(1, -1), via(1, -1);
  for (const auto& g : gens) {
    std::size_t before = elems.size();
    int id = add(g);
    gen_idx.push_back(id);
    if (elems.size() > before) {
      parent.push_back(0);
      via.push_back(static_cast<int>(&g - gens.data()));
    }
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      std::size_t before = elems.size();
      add(label_mul(elems[i], gens[k]));
      if (elems.size() > before) {
        parent.push_back(static_cast<int>(i));
        via.push_back(static_cast<int>(k));
      }
    }
  }

  const int n = static_cast<int>(elems.size());
  // Right translation by each generator, then the full table through the
  // factorization b = parent(b)*gen; keeps label products to O(n * #gens).
  std::vector<std::vector<u32>> rho(gens.size(), std::vector<u32>(n));
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (int a = 0; a < n; ++a) rho[k][a] = static_cast<u32>(index.at(label_key(label_mul(elems[a], gens[k]))));

  std::vector<u32> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) table[static_cast<std::size_t>(a) * n + 0] = static_cast<u32>(a);
  for (int b = 1; b < n; ++b) {
    int c = parent[b], k = via[b];
    for (int a = 0; a < n; ++a)
      table[static_cast<std::size_t>(a) * n + b] = rho[k][table[static_cast<std::size_t>(a) * n + c]];
  }

  return std::make_shared<FiniteGroup>(std::move(table), std::move(gen_idx), std::move(elems));
}

int FiniteGroup::pow(int g, i64 e) const {
  if (e < 0) {
    g = inv(g);
    e = -e;
  }
  int acc = kIdentity;
  while (e > 0) {
    if (e & 1) acc = mul(acc, g);
    e >>= 1;
    if (e) g = mul(g, g);
  }
  return acc;
}

int FiniteGroup::element_order(int g) const {
  int k = 1, x = g;
  while (x != kIdentity) {
    x = mul(x, g);
    ++k;
  }
  return k;
}

u64 FiniteGroup::exponent() const {
  u64 e = 1;
  for (int g = 0; g < order_; ++g) e = std::lcm(e, static_cast<u64>(element_order(g)));
  return e;
}

std::optional<int> FiniteGroup::find_label(const Label& l) const {
  auto it = label_index_.find(label_key(l));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order_; ++a)
    for (int b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

// ---- GroupHom ----

GroupHom GroupHom::validated(GroupPtr src, GroupPtr dst, std::vector<int> image_of) {
  if (static_cast<int>(image_of.size()) != src->order())
    throw std::invalid_argument("GroupHom: image size mismatch");
  if (image_of[FiniteGroup::kIdentity] != FiniteGroup::kIdentity)
    throw std::invalid_argument("GroupHom: identity not preserved");
  for (int a = 0; a < src->order(); ++a)
    for (int b = 0; b < src->order(); ++b)
      if (image_of[src->mul(a, b)] != dst->mul(image_of[a], image_of[b]))
        throw std::invalid_argument("GroupHom: homomorphism law fails");
  return GroupHom{std::move(src), std::move(dst), std::move(image_of)};
}

GroupHom GroupHom::identity(GroupPtr g) {
  std::vector<int> im(g->order());
  std::iota(im.begin(), im.end(), 0);
  return GroupHom{g, g, std::move(im)};
}

GroupHom GroupHom::compose(const GroupHom& then) const {
  if (target != then.source) throw std::invalid_argument("GroupHom::compose: chain mismatch");
  std::vector<int> im(image_of.size());
  for (std::size_t i = 0; i < im.size(); ++i) im[i] = then.image_of[image_of[i]];
  return GroupHom{source, then.target, std::move(im)};
}

// ---- Subgroup ----

namespace {

std::vector<int> close_members(const FiniteGroup& g, std::vector<int> seed) {
  std::set<int> members(seed.begin(), seed.end());
  members.insert(FiniteGroup::kIdentity);
  std::vector<int> work(members.begin(), members.end());
  while (!work.empty()) {
    int a = work.back();
    work.pop_back();
    for (int b : std::vector<int>(members.begin(), members.end())) {
      for (int c : {g.mul(a, b), g.mul(b, a)}) {
        if (members.insert(c).second) work.push_back(c);
      }
    }
    int ia = g.inv(a);
    if (members.insert(ia).second) work.push_back(ia);
  }
  return {members.begin(), members.end()};
}

}  // namespace

Subgroup::Subgroup(GroupPtr parent, std::vector<int> members) : parent_(std::move(parent)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  members_ = std::move(members);
  if (members_.empty() || members_[0] != FiniteGroup::kIdentity)
    throw std::invalid_argument("Subgroup: must contain the identity");
  std::unordered_map<int, int> pos;
  for (std::size_t i = 0; i < members_.size(); ++i) pos[members_[i]] = static_cast<int>(i);
  const int n = static_cast<int>(members_.size());
  std::vector<u32> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int p = parent_->mul(members_[a], members_[b]);
      auto it = pos.find(p);
      if (it == pos.end()) throw std::invalid_argument("Subgroup: member set not closed");
      table[static_cast<std::size_t>(a) * n + b] = static_cast<u32>(it->second);
    }
  // Greedy generating set.
  std::vector<int> gens;
  {
    std::set<int> have{FiniteGroup::kIdentity};
    for (int i = 0; i < n && static_cast<int>(have.size()) < n; ++i) {
      if (have.count(members_[i])) continue;
      gens.push_back(i);
      std::vector<int> closed = close_members(*parent_, [&] {
        std::vector<int> s;
        for (int gi : gens) s.push_back(members_[gi]);
        return s;
      }());
      have = std::set<int>(closed.begin(), closed.end());
    }
  }
  std::vector<Label> labels;
  if (parent_->has_labels())
    for (int m : members_) labels.push_back(parent_->label(m));
  group_ = std::make_shared<FiniteGroup>(std::move(table), std::move(gens), std::move(labels));
}

Subgroup Subgroup::generated(GroupPtr parent, const std::vector<int>& generator_indices) {
  auto members = close_members(*parent, generator_indices);
  return Subgroup(std::move(parent), std::move(members));
}

Subgroup Subgroup::whole(GroupPtr parent) {
  std::vector<int> all(parent->order());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup(std::move(parent), std::move(all));
}

std::optional<int> Subgroup::from_parent(int p) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), p);
  if (it == members_.end() || *it != p) return std::nullopt;
  return static_cast<int>(it - members_.begin());
}

bool Subgroup::contains_subgroup(const Subgroup& other) const {
  return std::includes(members_.begin(), members_.end(), other.members_.begin(), other.members_.end());
}

GroupHom Subgroup::inclusion() const {
  return GroupHom::validated(group_, parent_, members_);
}

// ---- transversals ----

std::vector<int> transversal(const FiniteGroup& g, const Subgroup& h, CosetSide side) {
  std::vector<bool> seen(g.order(), false);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    reps.push_back(x);
    for (int m : h.members()) seen[side == CosetSide::Left ? g.mul(x, m) : g.mul(m, x)] = true;
  }
  return reps;
}

std::vector<int> left_transversal_in(const FiniteGroup& g, const std::vector<int>& sup,
                                     const std::vector<int>& sub) {
  std::set<int> seen;
  std::vector<int> reps;
  for (int x : sup) {
    if (seen.count(x)) continue;
    reps.push_back(x);
    for (int m : sub) seen.insert(g.mul(x, m));
  }
  return reps;
}

// ---- characters ----

ZnMatrix characters_mod(const FiniteGroup& g, u32 e) {
  const std::size_t n = g.order();
  ZnMatrix system(e, n, n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t col = a * n + b;
      auto bump = [&](std::size_t row, i64 d) {
        system.set(row, col, static_cast<i64>(system(row, col)) + d);
      };
      bump(a, 1);
      bump(b, 1);
      bump(g.mul(static_cast<int>(a), static_cast<int>(b)), -1);
    }
  return kernel_basis(system);
}

ZnMatrix characters_mod(const FiniteGroup& g) {
  return characters_mod(g, static_cast<u32>(g.exponent()));
}

// ---- subgroup enumeration ----

std::vector<Subgroup> all_subgroups(GroupPtr g, std::size_t max_order) {
  if (static_cast<std::size_t>(g->order()) > max_order)
    throw std::runtime_error("all_subgroups: group order cap exceeded");
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> frontier;
  std::vector<int> trivial{FiniteGroup::kIdentity};
  seen.insert(trivial);
  frontier.push_back(trivial);
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& members : frontier) {
      for (int x = 0; x < g->order(); ++x) {
        if (std::binary_search(members.begin(), members.end(), x)) continue;
        std::vector<int> seed = members;
        seed.push_back(x);
        auto closed = close_members(*g, std::move(seed));
        if (seen.insert(closed).second) next.push_back(std::move(closed));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out;
  out.reserve(seen.size());
  for (const auto& members : seen) out.emplace_back(g, members);
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members() < b.members();
  });
  return out;
}

// ---- conjugation ----

GroupHom conjugation_hom(GroupPtr g, const Label& t) {
  if (!g->has_labels()) throw std::invalid_argument("conjugation_hom: group has no labels");
  auto tinv = label_inverse(t);
  if (!tinv) throw std::invalid_argument("conjugation_hom: t not invertible");
  std::vector<int> im(g->order());
  for (int x = 0; x < g->order(); ++x) {
    Label conj = label_mul(label_mul(*tinv, g->label(x)), t);
    auto idx = g->find_label(conj);
    if (!idx) throw std::invalid_argument("conjugation_hom: t does not normalize the group");
    im[x] = *idx;
  }
  return GroupHom::validated(g, g, std::move(im));
}

// ---- builders ----

GroupPtr cyclic_group(int m) {
  if (m < 1) throw std::invalid_argument("cyclic_group: m must be positive");
  Perm c;
  c.img.resize(m);
  for (int i = 0; i < m; ++i) c.img[i] = (i + 1) % m;
  return FiniteGroup::generate({c});
}

namespace {

ZnMatrix elementary(u32 p, int n, int i, int j) {
  ZnMatrix m = ZnMatrix::identity(p, n);
  m.set(i, j, 1);
  return m;
}

u32 primitive_root(u32 p) {
  // p is a small prime; brute force.
  for (u32 g = 2; g < p; ++g) {
    u32 x = g;
    u32 ord = 1;
    while (x != 1) {
      x = x * g % p;
      ++ord;
    }
    if (ord == p - 1) return g;
  }
  return 1;  // p == 2
}

}  // namespace

GroupPtr u3_group(u32 p) {
  return FiniteGroup::generate({elementary(p, 3, 0, 1), elementary(p, 3, 1, 2)});
}

GroupPtr t3_group(u32 p) {
  u32 r = primitive_root(p);
  std::vector<Label> gens;
  for (int i = 0; i < 3; ++i) {
    ZnMatrix d = ZnMatrix::identity(p, 3);
    d.set(i, i, r);
    gens.push_back(d);
  }
  if (p == 2) return FiniteGroup::generate({Label{ZnMatrix::identity(p, 3)}});
  return FiniteGroup::generate(gens);
}

GroupPtr b3_group(u32 p) {
  std::vector<Label> gens{elementary(p, 3, 0, 1), elementary(p, 3, 1, 2)};
  if (p > 2) {
    u32 r = primitive_root(p);
    for (int i = 0; i < 3; ++i) {
      ZnMatrix d = ZnMatrix::identity(p, 3);
      d.set(i, i, r);
      gens.push_back(d);
    }
  }
  return FiniteGroup::generate(gens);
}

GroupPtr gln_group(int n, u32 p, const GenerateOptions& opt) {
  std::vector<Label> gens;
  if (n == 1) {
    ZnMatrix d(p, 1, 1);
    d.set(0, 0, p == 2 ? 1 : primitive_root(p));
    return FiniteGroup::generate({d}, opt);
  }
  gens.push_back(elementary(p, n, 0, 1));
  ZnMatrix cyc(p, n, n);
  for (int i = 0; i < n; ++i) cyc.set((i + 1) % n, i, 1);
  gens.push_back(cyc);
  if (p > 2) {
    ZnMatrix d = ZnMatrix::identity(p, n);
    d.set(0, 0, primitive_root(p));
    gens.push_back(d);
  }
  return FiniteGroup::generate(gens, opt);
}

int unitriangular_generator(const FiniteGroup& g, int i, int j) {
  if (!g.has_labels()) throw std::invalid_argument("unitriangular_generator: no labels");
  const ZnMatrix& any = std::get<ZnMatrix>(g.label(0));
  auto idx = g.find_label(elementary(any.modulus(), static_cast<int>(any.rows()), i, j));
  if (!idx) throw std::invalid_argument("unitriangular_generator: element not in group");
  return *idx;
}

std::vector<u32> coordinate_character(const FiniteGroup& g, int i, int j, u32 e) {
  std::vector<u32> chi(g.order());
  for (int x = 0; x < g.order(); ++x) {
    const ZnMatrix& m = std::get<ZnMatrix>(g.label(x));
    chi[x] = m(i, j) % e;
  }
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      if (chi[g.mul(a, b)] != mod_add(chi[a], chi[b], e))
        throw std::invalid_argument("coordinate_character: not a homomorphism");
  return chi;
}

}  // namespace coh2
