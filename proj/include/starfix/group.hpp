#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "starfix/errors.hpp"

namespace starfix {

using PointId = std::size_t;
using Tuple = std::vector<PointId>;

/// A permutation of {0,...,m-1}; perm[i] is the image of i.
using Permutation = std::vector<std::uint8_t>;

inline constexpr std::size_t kMaxGroupOrder = 720;
inline constexpr std::size_t kMaxArity = 8;

/// A subgroup G of the symmetric group S_m, stored as its full element list
/// (sorted, identity first). Closure is verified or computed on construction.
class PermGroup {
 public:
  PermGroup() : PermGroup(trivial(1)) {}

  static PermGroup trivial(std::size_t m) {
    check_arity(m);
    return PermGroup(m, {identity(m)});
  }

  static PermGroup symmetric(std::size_t m) {
    check_arity(m);
    std::vector<Permutation> all;
    Permutation p = identity(m);
    do {
      all.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    if (all.size() > kMaxGroupOrder) throw DomainError("group order exceeds 720");
    return PermGroup(m, std::move(all));
  }

  // The cyclic group generated by the rotation i -> i+1 (mod m).
  static PermGroup cyclic(std::size_t m) {
    check_arity(m);
    Permutation rot(m);
    for (std::size_t i = 0; i < m; ++i) rot[i] = static_cast<std::uint8_t>((i + 1) % m);
    return generated(m, {rot});
  }

  /// Closure of a generator list (0-based images). Throws DomainError when a
  /// generator is not a permutation of arity m or the closure exceeds 720.
  static PermGroup generated(std::size_t m, const std::vector<Permutation>& generators) {
    check_arity(m);
    for (const auto& g : generators) check_permutation(m, g);
    std::set<Permutation> seen{identity(m)};
    std::vector<Permutation> frontier{identity(m)};
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& p : frontier) {
        for (const auto& g : generators) {
          Permutation q = compose(g, p);
          if (seen.insert(q).second) {
            if (seen.size() > kMaxGroupOrder) {
              throw DomainError("group closure exceeds 720 elements");
            }
            next.push_back(std::move(q));
          }
        }
      }
      frontier = std::move(next);
    }
    return PermGroup(m, {seen.begin(), seen.end()});
  }

  /// Builds a group from an explicit element list, verifying that it contains
  /// the identity and is closed under composition and inversion.
  static PermGroup from_elements(std::size_t m, std::vector<Permutation> elements) {
    check_arity(m);
    for (const auto& g : elements) check_permutation(m, g);
    std::set<Permutation> s(elements.begin(), elements.end());
    if (!s.contains(identity(m))) throw DomainError("element list lacks the identity");
    for (const auto& a : s) {
      if (!s.contains(inverse(a))) throw DomainError("element list not closed under inverse");
      for (const auto& b : s) {
        if (!s.contains(compose(a, b))) {
          throw DomainError("element list not closed under composition");
        }
      }
    }
    if (s.size() > kMaxGroupOrder) throw DomainError("group order exceeds 720");
    return PermGroup(m, {s.begin(), s.end()});
  }

  std::size_t arity() const { return arity_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }

  bool is_trivial() const { return elements_.size() == 1; }
  bool is_symmetric() const { return elements_.size() == factorial(arity_); }

  bool contains(const Permutation& p) const {
    return std::binary_search(elements_.begin(), elements_.end(), p);
  }

  bool is_subgroup_of(const PermGroup& g) const {
    return arity_ == g.arity_ &&
           std::all_of(elements_.begin(), elements_.end(),
                       [&](const Permutation& p) { return g.contains(p); });
  }

  friend bool operator==(const PermGroup&, const PermGroup&) = default;

  static Permutation identity(std::size_t m) {
    Permutation p(m);
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    return p;
  }

  // (a o b)(i) = a(b(i))
  static Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
  }

  static Permutation inverse(const Permutation& a) {
    Permutation r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  static std::size_t factorial(std::size_t m) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= m; ++i) f *= i;
    return f;
  }

 private:
  PermGroup(std::size_t m, std::vector<Permutation> elements)
      : arity_(m), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
  }

  static void check_arity(std::size_t m) {
    if (m == 0 || m > kMaxArity) {
      throw DomainError("arity " + std::to_string(m) + " outside [1," +
                        std::to_string(kMaxArity) + "]");
    }
  }

  static void check_permutation(std::size_t m, const Permutation& p) {
    if (p.size() != m) {
      throw DomainError("permutation of arity " + std::to_string(p.size()) +
                        " where arity " + std::to_string(m) + " was expected");
    }
    std::vector<bool> hit(m, false);
    for (auto v : p) {
      if (v >= m || hit[v]) throw DomainError("not a permutation");
      hit[v] = true;
    }
  }

  std::size_t arity_ = 1;
  std::vector<Permutation> elements_;
};

/// Applies sigma to the coordinates of x: result[i] = x[sigma[i]].
template <typename T>
std::vector<T> permute(std::span<const T> x, const Permutation& sigma) {
  std::vector<T> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[sigma[i]];
  return r;
}

/// Lexicographically least element of the orbit {x o sigma : sigma in G}.
inline Tuple orbit_rep(const PermGroup& g, std::span<const PointId> x) {
  if (x.size() != g.arity()) throw DomainError("tuple arity does not match group arity");
  Tuple best(x.begin(), x.end());
  if (g.is_trivial()) return best;
  if (g.is_symmetric()) {
    std::sort(best.begin(), best.end());
    return best;
  }
  for (const auto& sigma : g.elements()) {
    Tuple cand = permute(x, sigma);
    if (cand < best) best = std::move(cand);
  }
  return best;
}

inline bool is_orbit_rep(const PermGroup& g, std::span<const PointId> x) {
  if (g.is_trivial()) return true;
  if (g.is_symmetric()) return std::is_sorted(x.begin(), x.end());
  for (const auto& sigma : g.elements()) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[sigma[i]] < x[i]) return false;
      if (x[sigma[i]] > x[i]) break;
    }
  }
  return true;
}

/// The natural map SP^m_H X -> SP^m_G X for H a subgroup of G.
inline Tuple project_hg(const PermGroup& h, const PermGroup& g, std::span<const PointId> x) {
  if (!h.is_subgroup_of(g)) throw DomainError("H is not a subgroup of G");
  return orbit_rep(g, x);
}

}  // namespace starfix
