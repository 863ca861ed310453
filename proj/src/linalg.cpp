#include "coh2/linalg.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coh2 {

i64 xgcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

std::optional<u32> mod_inverse(u32 a, u32 n) {
  if (n == 1) return 0u;
  i64 x, y;
  if (xgcd(static_cast<i64>(a % n), static_cast<i64>(n), x, y) != 1) return std::nullopt;
  return mod_reduce(x, n);
}

u32 unit_for(u32 a, u32 n) {
  a %= n;
  if (a == 0 || n == 1) throw std::invalid_argument("unit_for: a must be nonzero mod n");
  u32 g = std::gcd(a, n);
  u32 b = a / g, m = n / g;
  u32 d = *mod_inverse(b % m, m);
  // Some d + k*m with k < g is a unit mod n.
  for (u32 k = 0; k < g; ++k) {
    u64 u = d + static_cast<u64>(k) * m;
    u32 um = static_cast<u32>(u % n);
    if (um != 0 && std::gcd(um, n) == 1) return um;
  }
  throw std::logic_error("unit_for: no unit found");
}

// ---- ZnMatrix ----

ZnMatrix::ZnMatrix(u32 modulus, std::size_t rows, std::size_t cols)
    : modulus_(modulus), rows_(rows), cols_(cols), data_(rows * cols, 0) {
  if (modulus == 0) throw std::invalid_argument("ZnMatrix: modulus must be positive");
}

ZnMatrix ZnMatrix::identity(u32 modulus, std::size_t dim) {
  ZnMatrix m(modulus, dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1);
  return m;
}

ZnMatrix ZnMatrix::from_rows(u32 modulus, const std::vector<std::vector<i64>>& rows) {
  std::size_t r = rows.size(), c = r == 0 ? 0 : rows[0].size();
  ZnMatrix m(modulus, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

ZnMatrix ZnMatrix::operator*(const ZnMatrix& rhs) const {
  if (cols_ != rhs.rows_ || modulus_ != rhs.modulus_)
    throw std::invalid_argument("matrix product: shape or modulus mismatch");
  ZnMatrix out(modulus_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      u64 a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        u64 v = out(i, j) + a * rhs(k, j);
        out.data_[i * rhs.cols_ + j] = static_cast<u32>(v % modulus_);
      }
    }
  return out;
}

ZnMatrix ZnMatrix::operator+(const ZnMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || modulus_ != rhs.modulus_)
    throw std::invalid_argument("matrix sum: shape or modulus mismatch");
  ZnMatrix out(modulus_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = mod_add(data_[i], rhs.data_[i], modulus_);
  return out;
}

ZnMatrix ZnMatrix::operator-(const ZnMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || modulus_ != rhs.modulus_)
    throw std::invalid_argument("matrix difference: shape or modulus mismatch");
  ZnMatrix out(modulus_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = mod_sub(data_[i], rhs.data_[i], modulus_);
  return out;
}

ZnMatrix ZnMatrix::scaled(i64 c) const {
  u32 cc = mod_reduce(c, modulus_);
  ZnMatrix out(modulus_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = mod_mul(data_[i], cc, modulus_);
  return out;
}

ZnMatrix ZnMatrix::pow(u64 e) const {
  if (rows_ != cols_) throw std::invalid_argument("pow: matrix not square");
  ZnMatrix acc = identity(modulus_, rows_);
  ZnMatrix base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

ZnMatrix ZnMatrix::transpose() const {
  ZnMatrix out(modulus_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.data_[j * rows_ + i] = (*this)(i, j);
  return out;
}

bool ZnMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](u32 v) { return v == 0; });
}

ZnMatrix ZnMatrix::with_modulus(u32 m) const {
  ZnMatrix out(m, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] % m;
  return out;
}

std::optional<ZnMatrix> ZnMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  SpanTracker tr(modulus_, cols_, /*record_exprs=*/true);
  for (std::size_t i = 0; i < rows_; ++i) tr.insert(row(i));
  ZnMatrix inv(modulus_, rows_, cols_);
  std::vector<u32> e(cols_, 0);
  for (std::size_t i = 0; i < cols_; ++i) {
    std::fill(e.begin(), e.end(), 0);
    e[i] = 1 % modulus_;
    auto x = tr.express(e);
    if (!x) return std::nullopt;
    for (std::size_t j = 0; j < cols_; ++j) inv.data_[i * cols_ + j] = (*x)[j];
  }
  return inv;
}

std::string ZnMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? " [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "] mod " << modulus_;
  return os.str();
}

std::vector<u32> row_times_matrix(std::span<const u32> v, const ZnMatrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("row_times_matrix: length mismatch");
  std::vector<u32> out(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    u64 a = v[i];
    if (a == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      out[j] = static_cast<u32>((out[j] + a * m(i, j)) % m.modulus());
  }
  return out;
}

// ---- SpanTracker internals ----

namespace {

// w += c*r (mod n), byte storage, n <= 11: eight lanes per word.  All lane
// values stay below 128 so the high bit is free for the compare trick.
void axpy_packed(u8* w, const u8* r, std::size_t len, u32 c, u32 n) {
  constexpr u64 kLane = 0x0101010101010101ull;
  const u64 cw = c;
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    u64 a, b;
    std::memcpy(&a, w + i, 8);
    std::memcpy(&b, r + i, 8);
    u64 x = a + b * cw;  // lanes <= (n-1) + (n-1)^2 <= 110
    for (u32 k = 8 * n; k >= n; k >>= 1) {
      u64 t = x + (128 - k) * kLane;
      u64 mask = (t >> 7) & kLane;
      x -= mask * k;
    }
    std::memcpy(w + i, &x, 8);
  }
  for (; i < len; ++i) w[i] = static_cast<u8>((w[i] + c * static_cast<u32>(r[i])) % n);
}

template <class Elem>
struct RowOps {
  static void axpy(std::vector<Elem>& w, const std::vector<Elem>& r, u32 c, u32 n) {
    if (c == 0) return;
    if constexpr (std::is_same_v<Elem, u8>) {
      if (n <= 11) {
        axpy_packed(w.data(), r.data(), w.size(), c, n);
        return;
      }
    }
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = static_cast<Elem>((static_cast<u64>(w[i]) + static_cast<u64>(c) * r[i]) % n);
  }
  static void scale(std::vector<Elem>& w, u32 c, u32 n) {
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = static_cast<Elem>((static_cast<u64>(c) * w[i]) % n);
  }
};

void expr_axpy(std::vector<u32>& w, const std::vector<u32>& r, u32 c, u32 n) {
  if (c == 0) return;
  if (w.size() < r.size()) w.resize(r.size(), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    w[i] = static_cast<u32>((static_cast<u64>(w[i]) + static_cast<u64>(c) * r[i]) % n);
}

void expr_scale(std::vector<u32>& w, u32 c, u32 n) {
  for (auto& v : w) v = mod_mul(v, c, n);
}

template <class Elem>
class TrackerImpl {
 public:
  TrackerImpl(u32 n, std::size_t dim, bool record) : n_(n), dim_(dim), record_(record) {}

  struct Row {
    std::vector<Elem> v;
    std::size_t pivot_col;
    u32 pivot;
    std::vector<u32> expr;
  };

  u32 n_;
  std::size_t dim_;
  bool record_;
  std::vector<Row> rows_;  // sorted by pivot_col, one per column
  std::size_t inserted_ = 0;

  std::vector<Elem> load(std::span<const u32> v) const {
    std::vector<Elem> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<Elem>(v[i] % n_);
    return out;
  }

  // Index of the row with the given pivot column, or insertion position.
  std::pair<std::size_t, bool> find_row(std::size_t col) const {
    std::size_t lo = 0, hi = rows_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (rows_[mid].pivot_col < col)
        lo = mid + 1;
      else
        hi = mid;
    }
    return {lo, lo < rows_.size() && rows_[lo].pivot_col == col};
  }

  bool insert(std::span<const u32> vin) {
    if (vin.size() != dim_) throw std::invalid_argument("SpanTracker: dimension mismatch");
    std::vector<u32> e;
    if (record_) {
      e.assign(inserted_ + 1, 0);
      e[inserted_] = 1 % n_;
    }
    ++inserted_;
    if (n_ == 1) return false;
    bool grew = false;
    std::vector<std::pair<std::vector<Elem>, std::vector<u32>>> work;
    work.emplace_back(load(vin), std::move(e));
    while (!work.empty()) {
      auto [w, we] = std::move(work.back());
      work.pop_back();
      reduce_or_merge(std::move(w), std::move(we), grew, work);
    }
    return grew;
  }

  void push_annihilator(const Row& r, std::vector<std::pair<std::vector<Elem>, std::vector<u32>>>& work) {
    // (n/pivot)*row has a zero pivot column; reinserting it maintains the
    // Howell property.  For pivot 1 the multiplier is 0 mod n.
    u32 q = (n_ / r.pivot) % n_;
    if (q == 0) return;
    std::vector<Elem> av(dim_, 0);
    RowOps<Elem>::axpy(av, r.v, q, n_);
    if (std::all_of(av.begin(), av.end(), [](Elem x) { return x == 0; })) return;
    std::vector<u32> ae = r.expr;
    expr_scale(ae, q, n_);
    work.emplace_back(std::move(av), std::move(ae));
  }

  void reduce_or_merge(std::vector<Elem> w, std::vector<u32> we, bool& grew,
                       std::vector<std::pair<std::vector<Elem>, std::vector<u32>>>& work) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (w[j] == 0) continue;
      auto [pos, found] = find_row(j);
      if (found) {
        Row& r = rows_[pos];
        u32 wj = static_cast<u32>(w[j]);
        if (wj % r.pivot == 0) {
          u32 c = mod_reduce(-static_cast<i64>(wj / r.pivot), n_);
          RowOps<Elem>::axpy(w, r.v, c, n_);
          if (record_) expr_axpy(we, r.expr, c, n_);
          continue;
        }
        // Merge: replace r by the gcd combination, keep reducing the rest.
        i64 s, t;
        i64 gg = xgcd(static_cast<i64>(r.pivot), static_cast<i64>(wj), s, t);
        u32 su = mod_reduce(s, n_), tu = mod_reduce(t, n_);
        std::vector<Elem> nv(dim_, 0);
        RowOps<Elem>::axpy(nv, r.v, su, n_);
        RowOps<Elem>::axpy(nv, w, tu, n_);
        std::vector<u32> ne;
        if (record_) {
          ne = r.expr;
          expr_scale(ne, su, n_);
          expr_axpy(ne, we, tu, n_);
        }
        u32 u1 = mod_reduce(-static_cast<i64>(wj / gg), n_);
        u32 u2 = mod_reduce(static_cast<i64>(r.pivot / gg), n_);
        std::vector<Elem> w2(dim_, 0);
        RowOps<Elem>::axpy(w2, r.v, u1, n_);
        RowOps<Elem>::axpy(w2, w, u2, n_);
        std::vector<u32> we2;
        if (record_) {
          we2 = r.expr;
          expr_scale(we2, u1, n_);
          expr_axpy(we2, we, u2, n_);
        }
        r.v = std::move(nv);
        r.pivot = static_cast<u32>(gg);
        r.expr = std::move(ne);
        grew = true;
        push_annihilator(r, work);
        w = std::move(w2);
        we = std::move(we2);
        // w[j] is now zero; continue scanning.
        continue;
      }
      // New pivot at column j.
      u32 wj = static_cast<u32>(w[j]);
      u32 g = std::gcd(wj, n_);
      u32 u = (wj == g) ? 1u : unit_for(wj, n_);
      if (u != 1) {
        RowOps<Elem>::scale(w, u, n_);
        if (record_) expr_scale(we, u, n_);
      }
      Row nr{std::move(w), j, g, std::move(we)};
      rows_.insert(rows_.begin() + pos, std::move(nr));
      grew = true;
      push_annihilator(rows_[pos], work);
      return;
    }
  }

  // Greedy reduction; returns the expression coefficients if v is in the
  // span (and record mode is on).
  bool reduce(std::span<const u32> vin, std::vector<u32>* expr_out) const {
    if (vin.size() != dim_) throw std::invalid_argument("SpanTracker: dimension mismatch");
    if (n_ == 1) {
      if (expr_out) expr_out->assign(inserted_, 0);
      return true;
    }
    std::vector<Elem> w = load(vin);
    std::vector<u32> acc;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (w[j] == 0) continue;
      auto [pos, found] = find_row(j);
      if (!found) return false;
      const Row& r = rows_[pos];
      u32 wj = static_cast<u32>(w[j]);
      if (wj % r.pivot != 0) return false;
      u32 c = wj / r.pivot;
      RowOps<Elem>::axpy(w, r.v, mod_reduce(-static_cast<i64>(c), n_), n_);
      if (expr_out) expr_axpy(acc, r.expr, c % n_, n_);
    }
    if (expr_out) {
      acc.resize(inserted_, 0);
      *expr_out = std::move(acc);
    }
    return true;
  }

  ZnMatrix basis() const {
    // Above-pivot reduction for the canonical form.
    std::vector<std::vector<Elem>> rows;
    rows.reserve(rows_.size());
    for (const auto& r : rows_) rows.push_back(r.v);
    for (std::size_t a = 0; a < rows_.size(); ++a) {
      std::size_t ja = rows_[a].pivot_col;
      u32 g = rows_[a].pivot;
      for (std::size_t b = 0; b < a; ++b) {
        u32 v = static_cast<u32>(rows[b][ja]);
        u32 c = v / g;
        if (c) RowOps<Elem>::axpy(rows[b], rows[a], mod_reduce(-static_cast<i64>(c), n_), n_);
      }
    }
    ZnMatrix out(n_, rows.size(), dim_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < dim_; ++j) out.set(i, j, rows[i][j]);
    return out;
  }

  u64 span_size() const {
    u64 total = 1;
    for (const auto& r : rows_) {
      u64 f = n_ / r.pivot;
      if (total > UINT64_MAX / f) return UINT64_MAX;
      total *= f;
    }
    return total;
  }
};

}  // namespace

struct SpanTracker::Impl {
  // Byte rows cover every modulus that occurs in practice; wide rows keep
  // the contract for larger n.
  std::optional<TrackerImpl<u8>> narrow;
  std::optional<TrackerImpl<u32>> wide;

  template <class F>
  auto visit(F&& f) {
    return narrow ? f(*narrow) : f(*wide);
  }
  template <class F>
  auto visit(F&& f) const {
    return narrow ? f(*narrow) : f(*wide);
  }
};

SpanTracker::SpanTracker(u32 modulus, std::size_t ambient_dim, bool record_exprs)
    : impl_(std::make_unique<Impl>()) {
  if (modulus == 0) throw std::invalid_argument("SpanTracker: modulus must be positive");
  if (modulus <= 255)
    impl_->narrow.emplace(modulus, ambient_dim, record_exprs);
  else
    impl_->wide.emplace(modulus, ambient_dim, record_exprs);
}

SpanTracker::SpanTracker(const SpanTracker& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
SpanTracker::SpanTracker(SpanTracker&&) noexcept = default;
SpanTracker& SpanTracker::operator=(SpanTracker&&) noexcept = default;
SpanTracker::~SpanTracker() = default;

bool SpanTracker::insert(std::span<const u32> v) {
  return impl_->visit([&](auto& t) { return t.insert(v); });
}
bool SpanTracker::contains(std::span<const u32> v) const {
  return impl_->visit([&](const auto& t) { return t.reduce(v, nullptr); });
}
std::optional<std::vector<u32>> SpanTracker::express(std::span<const u32> v) const {
  return impl_->visit([&](const auto& t) -> std::optional<std::vector<u32>> {
    if (!t.record_) throw std::logic_error("SpanTracker::express requires record_exprs");
    std::vector<u32> e;
    if (!t.reduce(v, &e)) return std::nullopt;
    return e;
  });
}
std::size_t SpanTracker::rank() const {
  return impl_->visit([](const auto& t) { return t.rows_.size(); });
}
std::size_t SpanTracker::ambient_dim() const {
  return impl_->visit([](const auto& t) { return t.dim_; });
}
u32 SpanTracker::modulus() const {
  return impl_->visit([](const auto& t) { return t.n_; });
}
std::size_t SpanTracker::inserted_count() const {
  return impl_->visit([](const auto& t) { return t.inserted_; });
}
u64 SpanTracker::span_size() const {
  return impl_->visit([](const auto& t) { return t.span_size(); });
}
ZnMatrix SpanTracker::canonical_basis() const {
  return impl_->visit([](const auto& t) { return t.basis(); });
}

// ---- derived operations ----

ZnMatrix howell_form(const ZnMatrix& m) {
  SpanTracker tr(m.modulus(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) tr.insert(m.row(i));
  return tr.canonical_basis();
}

std::optional<std::vector<u32>> solve_row(const ZnMatrix& m, std::span<const u32> rhs) {
  if (rhs.size() != m.cols()) throw std::invalid_argument("solve_row: rhs length != cols");
  SpanTracker tr(m.modulus(), m.cols(), /*record_exprs=*/true);
  for (std::size_t i = 0; i < m.rows(); ++i) tr.insert(m.row(i));
  auto x = tr.express(rhs);
  if (!x) return std::nullopt;
  auto check = row_times_matrix(*x, m);
  if (!std::equal(check.begin(), check.end(), rhs.begin(),
                  [&](u32 a, u32 b) { return a == b % m.modulus(); }))
    throw std::logic_error("solve_row: verification failed");
  return x;
}

ZnMatrix kernel_basis(const ZnMatrix& m) {
  // Howell form of [m | I]; rows whose left block vanished give the kernel.
  std::size_t r = m.rows(), c = m.cols();
  SpanTracker tr(m.modulus(), c + r);
  std::vector<u32> aug(c + r);
  for (std::size_t i = 0; i < r; ++i) {
    std::fill(aug.begin(), aug.end(), 0);
    std::copy(m.row(i).begin(), m.row(i).end(), aug.begin());
    aug[c + i] = 1 % m.modulus();
    tr.insert(aug);
  }
  ZnMatrix h = tr.canonical_basis();
  std::vector<std::vector<i64>> ker;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    bool left_zero = true;
    for (std::size_t j = 0; j < c && left_zero; ++j) left_zero = h(i, j) == 0;
    if (!left_zero) continue;
    std::vector<i64> row(r);
    for (std::size_t j = 0; j < r; ++j) row[j] = h(i, c + j);
    ker.push_back(std::move(row));
  }
  ZnMatrix out(m.modulus(), ker.size(), r);
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (std::size_t j = 0; j < r; ++j) out.set(i, j, ker[i][j]);
  return out;
}

}  // namespace coh2
