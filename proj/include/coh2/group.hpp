#pragma once

// Finite groups materialized as multiplication tables, built by closure
// from permutation or matrix generators.  Products follow the row-vector
// convention of the whole library: g*h means "g then h".

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "coh2/linalg.hpp"

namespace coh2 {

struct Perm {
  std::vector<int> img;

  static Perm identity(int degree);
  int degree() const { return static_cast<int>(img.size()); }
  Perm compose(const Perm& then) const;  // apply *this first, `then` second
  Perm inverse() const;
  bool is_valid() const;
  bool operator==(const Perm&) const = default;
};

using Label = std::variant<Perm, ZnMatrix>;

std::string label_key(const Label& l);
Label label_mul(const Label& a, const Label& b);
std::optional<Label> label_inverse(const Label& l);
Label label_identity_like(const Label& l);

struct GenerateOptions {
  std::size_t max_order = 20000;  // closure cap
  bool build_table = true;
};

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

class FiniteGroup {
 public:
  static constexpr int kIdentity = 0;

  // Closure from invertible generators; throws when the cap is exceeded or
  // a generator is not invertible.
  static GroupPtr generate(const std::vector<Label>& gens, const GenerateOptions& opt = {});

  // Table-only construction (used for materialized subgroups).
  FiniteGroup(std::vector<u32> mult, std::vector<int> gen_indices, std::vector<Label> labels);

  int order() const { return order_; }
  int mul(int a, int b) const { return static_cast<int>(mult_[static_cast<std::size_t>(a) * order_ + b]); }
  int inv(int a) const { return inv_[a]; }
  int conj(int t, int g) const { return mul(mul(inv(t), g), t); }  // t^-1 g t
  int pow(int g, i64 e) const;
  int element_order(int g) const;
  u64 exponent() const;

  const std::vector<int>& generator_indices() const { return gens_; }
  bool has_labels() const { return !labels_.empty(); }
  const Label& label(int i) const { return labels_[i]; }
  std::optional<int> find_label(const Label& l) const;
  bool is_abelian() const;

 private:
  int order_ = 1;
  std::vector<u32> mult_;
  std::vector<int> inv_;
  std::vector<int> gens_;
  std::vector<Label> labels_;
  std::unordered_map<std::string, int> label_index_;

  void finish_init();
};

struct GroupHom {
  GroupPtr source;
  GroupPtr target;
  std::vector<int> image_of;

  // Validates the homomorphism law on all pairs.
  static GroupHom validated(GroupPtr src, GroupPtr dst, std::vector<int> image_of);
  static GroupHom identity(GroupPtr g);
  int operator()(int g) const { return image_of[g]; }
  GroupHom compose(const GroupHom& then) const;  // first *this, then `then`
};

class Subgroup {
 public:
  // From a closed member set (validated).
  Subgroup(GroupPtr parent, std::vector<int> members);
  static Subgroup generated(GroupPtr parent, const std::vector<int>& generator_indices);
  static Subgroup whole(GroupPtr parent);

  const GroupPtr& parent() const { return parent_; }
  const GroupPtr& group() const { return group_; }  // materialized table
  int order() const { return static_cast<int>(members_.size()); }
  const std::vector<int>& members() const { return members_; }  // sorted parent indices
  int to_parent(int s) const { return members_[s]; }
  std::optional<int> from_parent(int p) const;
  bool contains(int parent_index) const { return from_parent(parent_index).has_value(); }
  bool contains_subgroup(const Subgroup& other) const;
  GroupHom inclusion() const;
  bool operator==(const Subgroup& o) const { return parent_ == o.parent_ && members_ == o.members_; }

 private:
  GroupPtr parent_;
  std::vector<int> members_;
  GroupPtr group_;
};

enum class CosetSide { Left, Right };

// One representative per coset of H in G (identity first, then increasing
// index): left cosets tH, right cosets Ht.
std::vector<int> transversal(const FiniteGroup& g, const Subgroup& h, CosetSide side);

// Left transversal of the subgroup with member set `sub` inside the
// subgroup with member set `sup` (parent indices; sub ⊆ sup).
std::vector<int> left_transversal_in(const FiniteGroup& g, const std::vector<int>& sup,
                                     const std::vector<int>& sub);

// Basis of Hom(G, Z/eZ): rows are functions (value at element index i in
// column i), computed as the kernel of the linear system over all pairs.
// Without an explicit e, the exponent of G is used.
ZnMatrix characters_mod(const FiniteGroup& g, u32 e);
ZnMatrix characters_mod(const FiniteGroup& g);

// Every subgroup exactly once; throws if |G| exceeds the cap.
std::vector<Subgroup> all_subgroups(GroupPtr g, std::size_t max_order = 256);

// The automorphism g -> t^-1 g t of a labelled group, where t is a label
// of an ambient element normalizing it.
GroupHom conjugation_hom(GroupPtr g, const Label& t);

// ---- named builders ----

GroupPtr cyclic_group(int m);
GroupPtr u3_group(u32 p);                                    // upper unitriangular 3x3 / F_p
GroupPtr b3_group(u32 p);                                    // upper triangular invertible
GroupPtr t3_group(u32 p);                                    // diagonal torus
GroupPtr gln_group(int n, u32 p, const GenerateOptions& opt = {});

// sigma_ij = I + E_ij inside a matrix group (by label lookup).
int unitriangular_generator(const FiniteGroup& g, int i, int j);

// The character g -> label(g)[i][j] mod e on a unitriangular matrix group;
// validated as a homomorphism.
std::vector<u32> coordinate_character(const FiniteGroup& g, int i, int j, u32 e);

}  // namespace coh2
