#pragma once

// Exact finite models of the hypograph monad. Everything here works on sets
// of (point, level) pairs and applies the set-level definitions literally;
// it shares no code path with the fused kernel in gifs.hpp and is used to
// anchor that kernel's algebra.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "starfix/errors.hpp"
#include "starfix/group.hpp"
#include "starfix/measure.hpp"
#include "starfix/tnorm.hpp"

namespace starfix::oracle {

inline constexpr std::size_t kMaxTensorPoints = 4;
inline constexpr std::size_t kMaxLawPoints = 3;
inline constexpr std::size_t kMaxProjectionPoints = 3;
inline constexpr std::size_t kMaxProjectionArity = 3;
inline constexpr int kMaxLevels = 4;
// Upper bound on the number of third-level instances one associativity run
// may visit (|X| = 3, q = 2 needs about 424k).
inline constexpr std::size_t kMaxAssociativityInstances = 500000;

/// Levels are integers k standing for k/q. Only norms that map the lattice
/// L_q into itself are admitted (minimum and Lukasiewicz).
struct LatticeAlgebra {
  using level = int;
  static constexpr bool generator_form = false;

  LatticeAlgebra(int levels, TNorm norm) : q(levels), t(norm) {
    if (q < 1) throw DomainError("lattice needs q >= 1");
    if (t.kind() == TNormKind::product) {
      throw DomainError("the product norm does not preserve L_q; use RationalProductAlgebra");
    }
  }

  level zero() const { return 0; }
  level one() const { return q; }
  level star(level a, level b) const {
    return t.kind() == TNormKind::minimum ? std::min(a, b) : std::max(a + b - q, 0);
  }
  std::vector<level> all_levels() const {
    std::vector<level> v(q + 1);
    for (int k = 0; k <= q; ++k) v[k] = k;
    return v;
  }
  // Positive lattice levels s <= top, i.e. the saturated column above 0.
  template <typename F>
  void column(level top, F&& emit) const {
    for (int k = 1; k <= top; ++k) emit(k);
  }
  double to_double(level k) const { return static_cast<double>(k) / q; }

  int q;
  TNorm t;
};

/// Exact rational levels with the product norm. A column is stored by its
/// maximal level only: the saturated set {s <= r} is the interval [0, r], and
/// since (r, s) -> r*s is monotone and continuous the image of
/// [0, r] x [0, s] is [0, r*s], so generators compose literally.
struct RationalProductAlgebra {
  using level = boost::rational<long long>;
  static constexpr bool generator_form = true;

  level zero() const { return 0; }
  level one() const { return 1; }
  level star(level a, level b) const { return a * b; }
  template <typename F>
  void column(level top, F&& emit) const {
    if (top > level(0)) emit(top);
  }
  double to_double(level k) const { return boost::rational_cast<double>(k); }
};

/// A subset of P x I containing P x {0} (implicit: only positive levels are
/// stored), kept in the algebra's normal form.
template <typename P, typename L>
struct Hypo {
  std::set<std::pair<P, L>> pairs;

  friend auto operator<=>(const Hypo&, const Hypo&) = default;
  friend bool operator==(const Hypo&, const Hypo&) = default;
};

template <typename P, typename Alg>
using HypoOf = Hypo<P, typename Alg::level>;

/// Normal form: saturate every column (lattice) or keep each column's top
/// (rational generators). Nonpositive levels are dropped.
template <typename Alg, typename P>
HypoOf<P, Alg> normalize(const Alg& alg, const std::vector<std::pair<P, typename Alg::level>>& raw) {
  HypoOf<P, Alg> h;
  if constexpr (Alg::generator_form) {
    std::map<P, typename Alg::level> top;
    for (const auto& [p, t] : raw) {
      if (!(t > alg.zero())) continue;
      auto [it, fresh] = top.emplace(p, t);
      if (!fresh && it->second < t) it->second = t;
    }
    for (const auto& [p, t] : top) h.pairs.emplace(p, t);
  } else {
    for (const auto& [p, t] : raw) {
      if (t > alg.zero()) alg.column(t, [&](auto s) { h.pairs.emplace(p, s); });
    }
  }
  return h;
}

template <typename Alg, typename P>
std::map<P, typename Alg::level> tops(const HypoOf<P, Alg>& h) {
  std::map<P, typename Alg::level> out;
  for (const auto& [p, t] : h.pairs) {
    auto [it, fresh] = out.emplace(p, t);
    if (!fresh && it->second < t) it->second = t;
  }
  return out;
}

/// The three conditions of the hypograph model: meets level 1, contains the
/// zero slice (implicit in the encoding), saturated.
template <typename Alg, typename P>
bool is_mbar(const Alg& alg, const HypoOf<P, Alg>& h) {
  bool meets_one = false;
  std::vector<std::pair<P, typename Alg::level>> raw(h.pairs.begin(), h.pairs.end());
  for (const auto& [p, t] : h.pairs) {
    if (!(t > alg.zero()) || alg.one() < t) return false;
    meets_one = meets_one || t == alg.one();
  }
  return meets_one && normalize(alg, raw) == h;
}

template <typename Alg, typename P>
HypoOf<P, Alg> eta_bar(const Alg& alg, const P& x) {
  return normalize(alg, std::vector<std::pair<P, typename Alg::level>>{{x, alg.one()}});
}

/// Mbar(f)(A) = (f x 1)(A) u (Y x {0}).
template <typename Alg, typename P, typename F>
auto push(const Alg& alg, const HypoOf<P, Alg>& a, F&& f) {
  using Q = std::decay_t<decltype(f(std::declval<const P&>()))>;
  std::vector<std::pair<Q, typename Alg::level>> raw;
  for (const auto& [p, t] : a.pairs) raw.emplace_back(f(p), t);
  return normalize(alg, raw);
}

/// zeta_bar(A) = {(x, r*s) : (x, r) in A, (A, s) in the meta set}.
template <typename Alg, typename P>
HypoOf<P, Alg> zeta_bar(const Alg& alg, const HypoOf<HypoOf<P, Alg>, Alg>& meta) {
  std::vector<std::pair<P, typename Alg::level>> raw;
  for (const auto& [inner, s] : meta.pairs) {
    for (const auto& [x, r] : inner.pairs) raw.emplace_back(x, alg.star(r, s));
  }
  return normalize(alg, raw);
}

template <typename Alg, typename P>
HypoOf<P, Alg> unite(const Alg& alg, const HypoOf<P, Alg>& a, const HypoOf<P, Alg>& b) {
  std::vector<std::pair<P, typename Alg::level>> raw(a.pairs.begin(), a.pairs.end());
  raw.insert(raw.end(), b.pairs.begin(), b.pairs.end());
  return normalize(alg, raw);
}

/// t scaled set {(x, s*t) : (x, s) in A}; need not be normal.
template <typename Alg, typename P>
HypoOf<P, Alg> scale_bar(const Alg& alg, typename Alg::level t, const HypoOf<P, Alg>& a) {
  std::vector<std::pair<P, typename Alg::level>> raw;
  for (const auto& [x, s] : a.pairs) raw.emplace_back(x, alg.star(s, t));
  return normalize(alg, raw);
}

/// h*(A)(phi) = max{phi(x) * t : (x, t) in A}; the zero slice contributes 0.
template <typename Alg, typename P, typename Phi>
typename Alg::level h_star(const Alg& alg, const HypoOf<P, Alg>& a, Phi&& phi) {
  typename Alg::level best = alg.zero();
  for (const auto& [x, t] : a.pairs) best = std::max(best, alg.star(phi(x), t));
  return best;
}

/// s_X: the hypograph of a level-valued function on {0..n-1}.
template <typename Alg>
HypoOf<int, Alg> hypo_of(const Alg& alg, const std::vector<typename Alg::level>& u) {
  std::vector<std::pair<int, typename Alg::level>> raw;
  for (int x = 0; x < static_cast<int>(u.size()); ++x) raw.emplace_back(x, u[x]);
  return normalize(alg, raw);
}

template <typename Alg>
std::vector<typename Alg::level> function_of(const Alg& alg, const HypoOf<int, Alg>& h, int n) {
  std::vector<typename Alg::level> u(n, alg.zero());
  for (const auto& [x, t] : h.pairs) u.at(x) = std::max(u.at(x), t);
  return u;
}

/// Every normal L_q-valued assignment on `points` whose support has at most
/// `max_support` elements, as hypographs over `points`.
template <typename P>
std::vector<HypoOf<P, LatticeAlgebra>> normal_assignments(const LatticeAlgebra& alg,
                                                         const std::vector<P>& points,
                                                         std::size_t max_support) {
  std::vector<HypoOf<P, LatticeAlgebra>> out;
  const std::size_t n = points.size();
  std::vector<int> v(n, 0);
  // Odometer over all level vectors; keep those meeting the caps.
  while (true) {
    std::size_t support = 0;
    bool normal = false;
    for (int k : v) {
      support += k > 0;
      normal = normal || k == alg.q;
    }
    if (normal && support <= max_support) {
      std::vector<std::pair<P, int>> raw;
      for (std::size_t i = 0; i < n; ++i) raw.emplace_back(points[i], v[i]);
      out.push_back(normalize(alg, raw));
    }
    std::size_t i = 0;
    while (i < n && ++v[i] > alg.q) v[i++] = 0;
    if (i == n) break;
  }
  return out;
}

/// Sparse version of `normal_assignments` for large point lists: enumerates
/// supports of size <= max_support directly.
template <typename P>
std::vector<HypoOf<P, LatticeAlgebra>> sparse_normal_assignments(const LatticeAlgebra& alg,
                                                                const std::vector<P>& points,
                                                                std::size_t max_support) {
  std::vector<HypoOf<P, LatticeAlgebra>> out;
  const std::size_t n = points.size();
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (!pick.empty()) {
      std::vector<int> lv(pick.size(), 1);
      while (true) {
        if (std::find(lv.begin(), lv.end(), alg.q) != lv.end()) {
          std::vector<std::pair<P, int>> raw;
          for (std::size_t i = 0; i < pick.size(); ++i) raw.emplace_back(points[pick[i]], lv[i]);
          out.push_back(normalize(alg, raw));
        }
        std::size_t i = 0;
        while (i < lv.size() && ++lv[i] > alg.q) lv[i++] = 1;
        if (i == lv.size()) break;
      }
    }
    if (pick.size() == max_support) return;
    for (std::size_t j = from; j < n; ++j) {
      pick.push_back(j);
      choose(j + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return out;
}

inline std::vector<std::vector<int>> all_level_functions(const LatticeAlgebra& alg, std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(n, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = 0;
    while (i < n && ++v[i] > alg.q) v[i++] = 0;
    if (i == n) break;
  }
  return out;
}

using Point = std::vector<int>;  // a point of X^k as a tuple of base indices

/// mu (x) nu = zeta Mbar(g)(mu), g(x) = Mbar(f_x)(nu), f_x(y) = (x, y), with
/// tuple points concatenated.
template <typename Alg>
HypoOf<Point, Alg> monadic_tensor(const Alg& alg, const HypoOf<Point, Alg>& mu,
                                  const HypoOf<Point, Alg>& nu) {
  auto g = [&](const Point& x) {
    return push(alg, nu, [&](const Point& y) {
      Point xy = x;
      xy.insert(xy.end(), y.begin(), y.end());
      return xy;
    });
  };
  const HypoOf<HypoOf<Point, Alg>, Alg> meta = push(alg, mu, g);
  return zeta_bar(alg, meta);
}

template <typename Alg>
HypoOf<Point, Alg> as_tuples(const Alg& alg, const HypoOf<int, Alg>& h) {
  return push(alg, h, [](int x) { return Point{x}; });
}

/// The pointwise formula {((x, y), r*s) : (x, r) in mu, (y, s) in nu}.
template <typename Alg>
HypoOf<Point, Alg> pointwise_tensor(const Alg& alg, const HypoOf<Point, Alg>& mu,
                                    const HypoOf<Point, Alg>& nu) {
  std::vector<std::pair<Point, typename Alg::level>> raw;
  for (const auto& [x, r] : mu.pairs) {
    for (const auto& [y, s] : nu.pairs) {
      Point xy = x;
      xy.insert(xy.end(), y.begin(), y.end());
      raw.emplace_back(std::move(xy), alg.star(r, s));
    }
  }
  return normalize(alg, raw);
}

struct LawReport {
  LawReport() = default;
  explicit LawReport(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::vector<std::string> samples;  // first few violation descriptions

  void fail(std::string what) {
    ++violations;
    if (samples.size() < 5) samples.push_back(std::move(what));
  }
  bool ok() const { return violations == 0; }
};

namespace detail {

inline std::vector<int> base_points(std::size_t n) {
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
  return p;
}

inline SpacePtr line_space(std::size_t n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::abs(double(i) - double(j));
  }
  return std::make_shared<const Space>(TableSpace(std::move(d)));
}

}  // namespace detail

/// Unit laws on Mbar(X) and Mbar^2(X) and associativity on a family of
/// Mbar^3(X) elements with at most two atoms over the Mbar^2 family.
inline LawReport check_monad_laws(std::size_t n, int q, TNorm t) {
  if (n == 0 || n > kMaxLawPoints || q > kMaxLevels) {
    throw SizeCapError("monad law check is capped at |X| <= 3, q <= 4");
  }
  const LatticeAlgebra alg(q, t);
  using H1 = HypoOf<int, LatticeAlgebra>;
  using H2 = HypoOf<H1, LatticeAlgebra>;
  using H3 = HypoOf<H2, LatticeAlgebra>;
  LawReport rep{"laws/" + std::string(t.name()) + "/n=" + std::to_string(n) + "/q=" +
                std::to_string(q)};

  const auto m1 = normal_assignments(alg, detail::base_points(n), n);
  // Full Mbar^2 when it has at most 4096 elements, otherwise atoms <= 2.
  std::size_t full2 = 1;
  for (std::size_t i = 0; i < m1.size() && full2 <= 4096; ++i) full2 *= (q + 1);
  const auto m2 = full2 <= 4096 ? normal_assignments(alg, m1, m1.size())
                                : sparse_normal_assignments(alg, m1, 2);

  for (const auto& a : m1) {
    ++rep.instances;
    if (zeta_bar(alg, eta_bar(alg, a)) != a) rep.fail("left unit on Mbar(X)");
    ++rep.instances;
    if (zeta_bar(alg, push(alg, a, [&](int x) { return eta_bar(alg, x); })) != a) {
      rep.fail("right unit on Mbar(X)");
    }
    if (!is_mbar(alg, a)) rep.fail("enumerated element violates the Mbar conditions");
  }
  for (const auto& a : m2) {
    ++rep.instances;
    if (zeta_bar(alg, eta_bar(alg, a)) != a) rep.fail("left unit on Mbar^2(X)");
    ++rep.instances;
    if (zeta_bar(alg, push(alg, a, [&](const H1& x) { return eta_bar(alg, x); })) != a) {
      rep.fail("right unit on Mbar^2(X)");
    }
    if (!is_mbar(alg, zeta_bar(alg, a))) rep.fail("zeta_bar output violates the Mbar conditions");
  }

  // Size of the Mbar^3 family before enumerating it.
  const std::size_t k = m2.size();
  const std::size_t pair_levels = static_cast<std::size_t>(q * q - (q - 1) * (q - 1));
  if (k + k * (k - 1) / 2 * pair_levels > kMaxAssociativityInstances) {
    throw SizeCapError("associativity family exceeds the instance cap");
  }
  const auto m3 = sparse_normal_assignments(alg, m2, 2);
  for (const H3& big : m3) {
    ++rep.instances;
    const H1 lhs = zeta_bar(alg, push(alg, big, [&](const H2& x) { return zeta_bar(alg, x); }));
    const H1 rhs = zeta_bar(alg, zeta_bar(alg, big));
    if (lhs != rhs) rep.fail("associativity");
  }
  return rep;
}

/// s_X round trip, union and scaling identities of h*, and agreement of the
/// engine's `evaluate` with the literal h* on every instance.
inline LawReport check_isomorphism(std::size_t n, int q, TNorm t) {
  if (n == 0 || n > kMaxLawPoints || q > kMaxLevels) {
    throw SizeCapError("isomorphism check is capped at |X| <= 3, q <= 4");
  }
  const LatticeAlgebra alg(q, t);
  LawReport rep{"iso/" + std::string(t.name()) + "/n=" + std::to_string(n) + "/q=" +
                std::to_string(q)};
  const auto space = detail::line_space(n);
  const auto hs = normal_assignments(alg, detail::base_points(n), n);
  const auto phis = all_level_functions(alg, n);

  for (const auto& u : all_level_functions(alg, n)) {
    if (std::find(u.begin(), u.end(), q) == u.end()) continue;
    ++rep.instances;
    const auto h = hypo_of(alg, u);
    if (function_of(alg, h, n) != u) rep.fail("s_X round trip (function side)");
    if (!is_mbar(alg, h)) rep.fail("s_X image violates the Mbar conditions");
  }
  for (const auto& h : hs) {
    ++rep.instances;
    if (hypo_of(alg, function_of(alg, h, static_cast<int>(n))) != h) {
      rep.fail("s_X round trip (hypograph side)");
    }
  }
  auto to_doubles = [&](const std::vector<int>& v) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = alg.to_double(v[i]);
    return d;
  };
  for (const auto& a : hs) {
    const StarMeasure mu(space, to_doubles(function_of(alg, a, static_cast<int>(n))));
    for (const auto& phi_v : phis) {
      auto phi = [&](int x) { return phi_v[x]; };
      const int ha = h_star(alg, a, phi);
      ++rep.instances;
      const TestFunction phi_d(space, to_doubles(phi_v));
      if (std::abs(evaluate(mu, phi_d, t) - alg.to_double(ha)) > 1e-12) {
        rep.fail("engine evaluate disagrees with h*");
      }
      for (const auto& b : hs) {
        ++rep.instances;
        if (h_star(alg, unite(alg, a, b), phi) != std::max(ha, h_star(alg, b, phi))) {
          rep.fail("h*(A u B) != h*(A) v h*(B)");
        }
      }
      for (int lvl = 0; lvl <= q; ++lvl) {
        ++rep.instances;
        if (h_star(alg, scale_bar(alg, lvl, a), phi) != alg.star(lvl, ha)) {
          rep.fail("h*(t A) != t * h*(A)");
        }
      }
    }
  }
  return rep;
}

/// Monadic tensor versus the pointwise formula over all pairs of normal
/// measures on |X| = nx, |Y| = ny points. Each (mu, nu, phi) triple is one
/// instance; phi ranges over all L_q test functions on X x Y when there are
/// at most 729 of them, else over scaled point indicators.
inline LawReport check_tensor(std::size_t nx, std::size_t ny, int q, TNorm t) {
  if (nx == 0 || ny == 0 || nx > kMaxTensorPoints || ny > kMaxTensorPoints || q > kMaxLevels) {
    throw SizeCapError("tensor check is capped at 4 points per factor, q <= 4");
  }
  const LatticeAlgebra alg(q, t);
  LawReport rep{"tensor/" + std::string(t.name()) + "/" + std::to_string(nx) + "x" +
                std::to_string(ny) + "/q=" + std::to_string(q)};
  const auto mus = normal_assignments(alg, detail::base_points(nx), nx);
  const auto nus = normal_assignments(alg, detail::base_points(ny), ny);

  const std::size_t cells = nx * ny;
  std::vector<std::vector<int>> phis;
  std::size_t count = 1;
  for (std::size_t i = 0; i < cells && count <= 729; ++i) count *= (q + 1);
  if (count <= 729) {
    phis = all_level_functions(alg, cells);
  } else {
    for (std::size_t c = 0; c < cells; ++c) {
      for (int lvl = 1; lvl <= q; ++lvl) {
        std::vector<int> v(cells, 0);
        v[c] = lvl;
        phis.push_back(std::move(v));
      }
    }
  }

  for (const auto& mu1 : mus) {
    const auto mu = as_tuples(alg, mu1);
    for (const auto& nu1 : nus) {
      const auto nu = as_tuples(alg, nu1);
      const auto lit = monadic_tensor(alg, mu, nu);
      const auto pw = pointwise_tensor(alg, mu, nu);
      if (!is_mbar(alg, lit)) rep.fail("monadic tensor violates the Mbar conditions");
      const bool same = lit == pw;
      for (const auto& phi_v : phis) {
        ++rep.instances;
        auto phi = [&](const Point& xy) { return phi_v[xy[0] * ny + xy[1]]; };
        if (!same || h_star(alg, lit, phi) != h_star(alg, pw, phi)) {
          rep.fail("monadic tensor differs from the pointwise formula");
        }
      }
      // Engine cross-check on the diagonal tensor mu (x) mu.
      if (nx == ny && mu1 == nu1) {
        const auto u = function_of(alg, mu1, static_cast<int>(nx));
        std::vector<double> ud(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) ud[i] = alg.to_double(u[i]);
        const auto tp = tops<LatticeAlgebra>(lit);
        for (std::size_t x = 0; x < nx; ++x) {
          for (std::size_t y = 0; y < ny; ++y) {
            const auto it = tp.find(Point{int(x), int(y)});
            const double lv = it == tp.end() ? 0.0 : alg.to_double(it->second);
            const PointId xy[2] = {x, y};
            if (std::abs(sym_tensor_value(ud, t, xy) - lv) > 1e-12) {
              rep.fail("engine sym_tensor_value disagrees with the monadic tensor");
            }
          }
        }
      }
    }
  }
  return rep;
}

/// m-fold monadic tensor power ((mu (x) mu) (x) mu) ...
template <typename Alg>
HypoOf<Point, Alg> tensor_power(const Alg& alg, const HypoOf<Point, Alg>& mu, std::size_t m) {
  auto acc = mu;
  for (std::size_t i = 1; i < m; ++i) acc = monadic_tensor(alg, acc, mu);
  return acc;
}

/// Mbar(pi_HG)([mu^m]_H) = [mu^m]_G for every normal L_q measure on n points.
inline LawReport check_projection_compat(std::size_t n, const PermGroup& h, const PermGroup& g,
                                         int q, TNorm t) {
  if (n == 0 || n > kMaxProjectionPoints || g.arity() > kMaxProjectionArity || q > kMaxLevels) {
    throw SizeCapError("projection check is capped at |X| <= 3, m <= 3, q <= 4");
  }
  if (!h.is_subgroup_of(g)) throw DomainError("H is not a subgroup of G");
  const LatticeAlgebra alg(q, t);
  const std::size_t m = g.arity();
  LawReport rep{"projection/" + std::string(t.name()) + "/n=" + std::to_string(n) + "/m=" +
                std::to_string(m) + "/|H|=" + std::to_string(h.order()) + "/|G|=" +
                std::to_string(g.order()) + "/q=" + std::to_string(q)};
  auto rep_of = [](const PermGroup& grp) {
    return [&grp](const Point& x) {
      Tuple tx(x.begin(), x.end());
      const Tuple r = orbit_rep(grp, tx);
      return Point(r.begin(), r.end());
    };
  };
  for (const auto& mu1 : normal_assignments(alg, detail::base_points(n), n)) {
    ++rep.instances;
    const auto power = tensor_power(alg, as_tuples(alg, mu1), m);
    const auto sym_h = push(alg, power, rep_of(h));
    const auto lhs = push(alg, sym_h, rep_of(g));
    const auto rhs = push(alg, power, rep_of(g));
    if (lhs != rhs) rep.fail("Mbar(pi_HG)[mu^m]_H != [mu^m]_G");
    // The engine's orbit value is the top of [mu^m]_G at each representative.
    const auto u = function_of(alg, mu1, static_cast<int>(n));
    std::vector<double> ud(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ud[i] = alg.to_double(u[i]);
    const auto tp = tops<LatticeAlgebra>(rhs);
    std::size_t total = 1;
    for (std::size_t j = 0; j < m; ++j) total *= n;
    for (std::size_t code = 0; code < total; ++code) {
      Tuple tx(m);
      std::size_t c = code;
      for (auto& v : tx) {
        v = c % n;
        c /= n;
      }
      if (!is_orbit_rep(g, tx)) continue;
      const auto it = tp.find(Point(tx.begin(), tx.end()));
      const double lvl = it == tp.end() ? 0.0 : alg.to_double(it->second);
      if (std::abs(sym_tensor_value(ud, t, tx) - lvl) > 1e-12) {
        rep.fail("engine sym_tensor_value disagrees with [mu^m]_G");
      }
    }
  }
  return rep;
}

/// Exact rational spot checks for the product norm on 1- and 2-point spaces:
/// tensor versus pointwise formula and both unit laws.
inline LawReport check_product_spot() {
  using Q = boost::rational<long long>;
  const RationalProductAlgebra alg;
  LawReport rep{"product-spot"};
  const std::vector<Q> vals = {Q(0), Q(1, 3), Q(1, 2), Q(2, 3), Q(1)};
  std::vector<std::vector<Q>> fns;
  for (const auto& a : vals) {
    if (a == Q(1)) fns.push_back({a});
    for (const auto& b : vals) {
      if (a == Q(1) || b == Q(1)) fns.push_back({a, b});
    }
  }
  for (const auto& u : fns) {
    const auto hu = as_tuples(alg, hypo_of(alg, u));
    ++rep.instances;
    if (zeta_bar(alg, eta_bar(alg, hu)) != hu) rep.fail("left unit (product)");
    ++rep.instances;
    if (zeta_bar(alg, push(alg, hu, [&](const Point& x) { return eta_bar(alg, x); })) != hu) {
      rep.fail("right unit (product)");
    }
    for (const auto& v : fns) {
      const auto hv = as_tuples(alg, hypo_of(alg, v));
      ++rep.instances;
      const auto lit = monadic_tensor(alg, hu, hv);
      const auto tp = tops<RationalProductAlgebra>(lit);
      for (std::size_t x = 0; x < u.size(); ++x) {
        for (std::size_t y = 0; y < v.size(); ++y) {
          const auto it = tp.find(Point{int(x), int(y)});
          const Q got = it == tp.end() ? Q(0) : it->second;
          if (got != u[x] * v[y]) rep.fail("product tensor differs from u(x) v(y)");
        }
      }
    }
  }
  return rep;
}

}  // namespace starfix::oracle
