#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace ecat {

using ObjId = std::uint32_t;

/// Morphism of an explicit finite category: the k-th arrow of hom(src, dst).
struct Arrow {
  ObjId src = 0;
  ObjId dst = 0;
  std::uint32_t k = 0;

  friend bool operator==(const Arrow&, const Arrow&) = default;
  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

/// Payload of a base morphism. Table bases use a single index; symbolic
/// bases (finite sets, structured sets) store the underlying function.
using Code = boost::container::small_vector<std::uint32_t, 4>;

/// Morphism of a monoidal base category.
struct Mor {
  ObjId src = 0;
  ObjId dst = 0;
  Code code;

  friend bool operator==(const Mor& a, const Mor& b) {
    return a.src == b.src && a.dst == b.dst && a.code == b.code;
  }
  friend std::strong_ordering operator<=>(const Mor& a, const Mor& b) {
    if (auto c = a.src <=> b.src; c != 0) return c;
    if (auto c = a.dst <=> b.dst; c != 0) return c;
    if (auto c = a.code.size() <=> b.code.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.code.size(); ++i)
      if (auto c = a.code[i] <=> b.code[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

inline Mor table_mor(ObjId src, ObjId dst, std::uint32_t k) { return Mor{src, dst, Code{k}}; }

// ---------------------------------------------------------------------------
// errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data: an index out of range, a missing table, a type mismatch.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An optional piece of structure (symmetry, closedness, limits) is absent.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A construction refused its input because a precondition failed.
class Refusal : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the caller's cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::uint64_t bound)
      : Error(what + " (search space " + std::to_string(bound) + ")"), bound_(bound) {}
  std::uint64_t bound() const { return bound_; }

 private:
  std::uint64_t bound_;
};

// ---------------------------------------------------------------------------
// printing

inline std::string to_string(const Arrow& a) {
  return "(" + std::to_string(a.src) + "," + std::to_string(a.dst) + "," + std::to_string(a.k) + ")";
}

inline std::string to_string(const Code& c) {
  if (c.size() == 1) return std::to_string(c[0]);
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
  return s + "]";
}

inline std::string to_string(const Mor& m) {
  return "(" + std::to_string(m.src) + "," + std::to_string(m.dst) + "," + to_string(m.code) + ")";
}

// ---------------------------------------------------------------------------
// check reports

using InstanceItem = std::variant<ObjId, Arrow, Mor>;
using Instance = std::vector<InstanceItem>;

inline std::string to_string(const InstanceItem& item) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ObjId>)
          return std::to_string(v);
        else
          return to_string(v);
      },
      item);
}

inline std::string to_string(const Instance& inst) {
  std::string s = "(";
  for (std::size_t i = 0; i < inst.size(); ++i) s += (i ? ", " : "") + to_string(inst[i]);
  return s + ")";
}

struct Failure {
  std::string law;
  Instance instance;
  std::optional<Mor> lhs;
  std::optional<Mor> rhs;
  std::string detail;
};

/// Verdict of an exhaustive law scan. `ok` holds exactly when no failure was
/// recorded; `skipped` counts instances excluded by an enumeration budget.
struct CheckReport {
  std::vector<Failure> failures;
  std::uint64_t instances = 0;
  std::uint64_t skipped = 0;
  std::vector<std::pair<std::string, bool>> verdicts;

  bool ok() const { return failures.empty(); }

  void fail(std::string law, Instance inst, std::optional<Mor> lhs = {}, std::optional<Mor> rhs = {},
            std::string detail = {}) {
    failures.push_back(Failure{std::move(law), std::move(inst), std::move(lhs), std::move(rhs), std::move(detail)});
  }

  void merge(CheckReport other) {
    for (auto& f : other.failures) failures.push_back(std::move(f));
    instances += other.instances;
    skipped += other.skipped;
    for (auto& v : other.verdicts) verdicts.push_back(std::move(v));
  }

  std::optional<bool> verdict(const std::string& name) const {
    for (const auto& [n, v] : verdicts)
      if (n == name) return v;
    return std::nullopt;
  }

  bool has_law(const std::string& prefix) const {
    return std::any_of(failures.begin(), failures.end(),
                       [&](const Failure& f) { return f.law.rfind(prefix, 0) == 0; });
  }

  /// Deterministic order: by instance tuple, then law name.
  void normalize() {
    std::stable_sort(failures.begin(), failures.end(), [](const Failure& a, const Failure& b) {
      if (a.instance != b.instance) return a.instance < b.instance;
      return a.law < b.law;
    });
  }

  std::string summary() const {
    std::ostringstream out;
    out << (ok() ? "ok" : "FAILED") << " (" << instances << " instances";
    if (skipped) out << ", " << skipped << " skipped";
    out << ", " << failures.size() << " failures)";
    for (const auto& f : failures) {
      out << "\n  " << f.law << " at " << to_string(f.instance);
      if (f.lhs) out << " lhs=" << to_string(*f.lhs);
      if (f.rhs) out << " rhs=" << to_string(*f.rhs);
      if (!f.detail.empty()) out << " : " << f.detail;
    }
    return out.str();
  }
};

/// Options shared by the exhaustive checkers.
struct CheckOptions {
  /// Stop scanning once this many failures have been recorded.
  std::size_t max_failures = std::numeric_limits<std::size_t>::max();
  /// Instances whose hom enumeration exceeds this size are counted as skipped.
  std::uint64_t hom_budget = std::uint64_t{1} << 20;

  /// Law families to scan. Light families are cheap per instance (typing,
  /// coherence equations, small closed instances); heavy ones scan pairs of
  /// morphisms or large hom-sets.
  static constexpr unsigned kLight = 1, kHeavy = 2, kAll = 3;
  unsigned sections = kAll;
  /// Closed-structure instances up to this enumeration size count as light.
  std::uint64_t light_budget = 4096;
};

}  // namespace ecat
