#pragma once

#include <functional>
#include <numeric>

#include "types.hpp"

namespace ecat {

/// A finite category given by explicit tables. Composition is diagrammatic:
/// then(f, g) is "f, then g".
class FinCat {
 public:
  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

  FinCat() = default;

  /// Allocates tables for `n` objects with the given hom sizes (row-major
  /// n*n). Identities and composites start unset.
  FinCat(std::size_t n, std::vector<std::uint32_t> hom_sizes) : n_(n), hom_(std::move(hom_sizes)) {
    if (hom_.size() != n * n) throw StructuralError("hom size table must have n*n entries");
    identity_.assign(n, kUnset);
    offset_.assign(n * n * n, 0);
    std::uint64_t total = 0;
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z) {
          offset_[(x * n + y) * n + z] = total;
          total += std::uint64_t{hom_size(x, y)} * hom_size(y, z);
        }
    then_.assign(total, kUnset);
  }

  /// Builds a category from callbacks; `compose` receives composable arrows and
  /// returns the local index of the composite.
  static FinCat build(std::size_t n, const std::function<std::uint32_t(ObjId, ObjId)>& hom_size,
                      const std::function<std::uint32_t(ObjId)>& identity,
                      const std::function<std::uint32_t(const Arrow&, const Arrow&)>& compose) {
    std::vector<std::uint32_t> sizes(n * n);
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y) sizes[x * n + y] = hom_size(x, y);
    FinCat c(n, std::move(sizes));
    for (ObjId x = 0; x < n; ++x) c.identity_[x] = identity(x);
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z)
          for (std::uint32_t i = 0; i < c.hom_size(x, y); ++i)
            for (std::uint32_t j = 0; j < c.hom_size(y, z); ++j)
              c.then_[c.slot(x, y, z, i, j)] = compose(Arrow{x, y, i}, Arrow{y, z, j});
    return c;
  }

  static FinCat discrete(std::size_t n) {
    std::vector<std::uint32_t> sizes(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) sizes[i * n + i] = 1;
    FinCat c(n, std::move(sizes));
    for (ObjId x = 0; x < n; ++x) {
      c.identity_[x] = 0;
      c.then_[c.slot(x, x, x, 0, 0)] = 0;
    }
    return c;
  }

  /// Thin category of a reflexive transitive relation `le` (row-major n*n).
  static FinCat preorder(std::size_t n, const std::vector<bool>& le) {
    return build(
        n, [&](ObjId x, ObjId y) -> std::uint32_t { return le[x * n + y] ? 1 : 0; },
        [](ObjId) { return 0u; }, [](const Arrow&, const Arrow&) { return 0u; });
  }

  std::size_t objects() const { return n_; }

  std::uint32_t hom_size(ObjId x, ObjId y) const { return hom_[x * n_ + y]; }

  bool valid_object(ObjId x) const { return x < n_; }
  bool valid(const Arrow& f) const { return f.src < n_ && f.dst < n_ && f.k < hom_size(f.src, f.dst); }

  Arrow identity(ObjId x) const {
    if (x >= n_) throw StructuralError("identity: object " + std::to_string(x) + " out of range");
    return Arrow{x, x, identity_[x]};
  }

  Arrow then(const Arrow& f, const Arrow& g) const {
    if (f.dst != g.src) throw StructuralError("then: arrows " + to_string(f) + " and " + to_string(g) + " not composable");
    if (!valid(f) || !valid(g)) throw StructuralError("then: arrow out of range");
    std::uint32_t k = then_[slot(f.src, f.dst, g.dst, f.k, g.k)];
    return Arrow{f.src, g.dst, k};
  }

  void set_identity(ObjId x, std::uint32_t k) { identity_.at(x) = k; }
  void set_then(const Arrow& f, const Arrow& g, std::uint32_t k) {
    if (f.dst != g.src || !valid(f) || !valid(g)) throw StructuralError("set_then: bad arrows");
    then_[slot(f.src, f.dst, g.dst, f.k, g.k)] = k;
  }

  std::vector<Arrow> arrows(ObjId x, ObjId y) const {
    std::vector<Arrow> out;
    for (std::uint32_t k = 0; k < hom_size(x, y); ++k) out.push_back(Arrow{x, y, k});
    return out;
  }

  std::vector<Arrow> all_arrows() const {
    std::vector<Arrow> out;
    for (ObjId x = 0; x < n_; ++x)
      for (ObjId y = 0; y < n_; ++y)
        for (std::uint32_t k = 0; k < hom_size(x, y); ++k) out.push_back(Arrow{x, y, k});
    return out;
  }

  std::uint64_t arrow_count() const { return std::accumulate(hom_.begin(), hom_.end(), std::uint64_t{0}); }

  /// Throws StructuralError unless every table entry is set and in range.
  void validate() const {
    for (ObjId x = 0; x < n_; ++x)
      if (identity_[x] >= hom_size(x, x))
        throw StructuralError("identity of object " + std::to_string(x) + " out of range");
    for (ObjId x = 0; x < n_; ++x)
      for (ObjId y = 0; y < n_; ++y)
        for (ObjId z = 0; z < n_; ++z)
          for (std::uint32_t i = 0; i < hom_size(x, y); ++i)
            for (std::uint32_t j = 0; j < hom_size(y, z); ++j)
              if (then_[slot(x, y, z, i, j)] >= hom_size(x, z))
                throw StructuralError("composite of " + to_string(Arrow{x, y, i}) + " and " +
                                      to_string(Arrow{y, z, j}) + " out of range");
  }

  FinCat opposite() const {
    return build(
        n_, [&](ObjId x, ObjId y) { return hom_size(y, x); }, [&](ObjId x) { return identity_[x]; },
        [&](const Arrow& f, const Arrow& g) { return then(Arrow{g.dst, g.src, g.k}, Arrow{f.dst, f.src, f.k}).k; });
  }

  /// Full subcategory on `keep` (new object i is old object keep[i]).
  FinCat full_sub(const std::vector<ObjId>& keep) const {
    return build(
        keep.size(), [&](ObjId x, ObjId y) { return hom_size(keep[x], keep[y]); },
        [&](ObjId x) { return identity_[keep[x]]; },
        [&](const Arrow& f, const Arrow& g) {
          return then(Arrow{keep[f.src], keep[f.dst], f.k}, Arrow{keep[g.src], keep[g.dst], g.k}).k;
        });
  }

  friend bool operator==(const FinCat&, const FinCat&) = default;

  // Raw table views, used by serialization and mutation tests.
  const std::vector<std::uint32_t>& hom_table() const { return hom_; }
  const std::vector<std::uint32_t>& then_table() const { return then_; }
  std::vector<std::uint32_t>& then_table_mut() { return then_; }
  const std::vector<std::uint32_t>& identity_table() const { return identity_; }

  std::size_t slot(ObjId x, ObjId y, ObjId z, std::uint32_t i, std::uint32_t j) const {
    return offset_[(x * n_ + y) * n_ + z] + std::size_t{i} * hom_size(y, z) + j;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> hom_;
  std::vector<std::uint32_t> identity_;
  std::vector<std::uint64_t> offset_;
  std::vector<std::uint32_t> then_;
};

inline Instance inst_of(std::initializer_list<InstanceItem> items) { return Instance(items); }

/// Identity and associativity laws at every instance. Throws StructuralError
/// on malformed tables.
inline CheckReport check_category(const FinCat& c, const CheckOptions& opts = {}) {
  c.validate();
  CheckReport r;
  auto full = [&] { return r.failures.size() >= opts.max_failures; };
  for (const Arrow& f : c.all_arrows()) {
    ++r.instances;
    if (c.then(c.identity(f.src), f) != f)
      r.fail("category.left_identity", {f}, {}, {}, "id;f = " + to_string(c.then(c.identity(f.src), f)));
    if (c.then(f, c.identity(f.dst)) != f)
      r.fail("category.right_identity", {f}, {}, {}, "f;id = " + to_string(c.then(f, c.identity(f.dst))));
    if (full()) return r;
  }
  const std::size_t n = c.objects();
  for (ObjId w = 0; w < n; ++w)
    for (ObjId x = 0; x < n; ++x)
      for (ObjId y = 0; y < n; ++y)
        for (ObjId z = 0; z < n; ++z)
          for (std::uint32_t i = 0; i < c.hom_size(w, x); ++i)
            for (std::uint32_t j = 0; j < c.hom_size(x, y); ++j) {
              Arrow f{w, x, i}, g{x, y, j};
              Arrow fg = c.then(f, g);
              for (std::uint32_t l = 0; l < c.hom_size(y, z); ++l) {
                Arrow h{y, z, l};
                ++r.instances;
                Arrow lhs = c.then(fg, h), rhs = c.then(f, c.then(g, h));
                if (lhs != rhs) {
                  r.fail("category.associativity", {f, g, h}, {}, {},
                         "(f;g);h = " + to_string(lhs) + ", f;(g;h) = " + to_string(rhs));
                  if (full()) return r;
                }
              }
            }
  r.normalize();
  return r;
}

/// Two-sided inverse of `f`, if any (first in index order).
/// Composite of arrows in diagrammatic order.
inline Arrow seq_arrows(const FinCat& c, std::initializer_list<Arrow> as) {
  auto it = as.begin();
  Arrow acc = *it++;
  for (; it != as.end(); ++it) acc = c.then(acc, *it);
  return acc;
}

inline std::optional<Arrow> inverse_of(const FinCat& c, const Arrow& f) {
  for (std::uint32_t k = 0; k < c.hom_size(f.dst, f.src); ++k) {
    Arrow g{f.dst, f.src, k};
    if (c.then(f, g) == c.identity(f.src) && c.then(g, f) == c.identity(f.dst)) return g;
  }
  return std::nullopt;
}

inline bool is_iso(const FinCat& c, const Arrow& f) { return inverse_of(c, f).has_value(); }

/// All isomorphisms x -> y, in index order.
inline std::vector<Arrow> isos(const FinCat& c, ObjId x, ObjId y) {
  std::vector<Arrow> out;
  for (const Arrow& f : c.arrows(x, y))
    if (is_iso(c, f)) out.push_back(f);
  return out;
}

/// Iso classes as representative table: rep[x] is the least object isomorphic to x.
inline std::vector<ObjId> iso_class_representatives(const FinCat& c) {
  std::vector<ObjId> rep(c.objects());
  for (ObjId x = 0; x < c.objects(); ++x) {
    rep[x] = x;
    for (ObjId y = 0; y < x; ++y)
      if (!isos(c, y, x).empty()) {
        rep[x] = rep[y];
        break;
      }
  }
  return rep;
}

}  // namespace ecat
