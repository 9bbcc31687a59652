#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "starfix/errors.hpp"
#include "starfix/space.hpp"
#include "starfix/tnorm.hpp"

namespace starfix {

using SpacePtr = std::shared_ptr<const Space>;

inline constexpr double kDefaultSupportFloor = 1e-9;
inline constexpr int kDefaultLevels = 256;

namespace detail {

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a != b && !(a && b && *a == *b)) throw DomainError("operands live on different spaces");
}

inline std::vector<double> checked_values(const SpacePtr& space, std::vector<double> values,
                                          std::string_view what) {
  if (!space) throw DomainError("null space");
  if (values.size() != space->size()) {
    throw DomainError(std::string(what) + " has " + std::to_string(values.size()) +
                      " values for a space of " + std::to_string(space->size()) + " points");
  }
  for (double v : values) require_unit_interval(v, what);
  return values;
}

}  // namespace detail

/// A [0,1]-valued function on the points of a space with no normality
/// requirement. Scaled intermediate objects alpha * mu are of this kind.
class WeightFunction {
 public:
  WeightFunction(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)),
        values_(detail::checked_values(space_, std::move(values), "weight")) {}

  static WeightFunction zero(SpacePtr space) {
    const auto n = space->size();
    return WeightFunction(std::move(space), std::vector<double>(n, 0.0));
  }

  const SpacePtr& space() const { return space_; }
  std::span<const double> values() const { return values_; }
  double operator[](PointId p) const { return values_.at(p); }
  std::size_t size() const { return values_.size(); }
  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  friend bool operator==(const WeightFunction& a, const WeightFunction& b) {
    return a.values_ == b.values_ && (a.space_ == b.space_ || *a.space_ == *b.space_);
  }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Test function phi: X -> [0,1].
class TestFunction {
 public:
  TestFunction(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)),
        values_(detail::checked_values(space_, std::move(values), "test function value")) {}

  static TestFunction constant(SpacePtr space, double c) {
    const auto n = space->size();
    return TestFunction(std::move(space), std::vector<double>(n, c));
  }

  const SpacePtr& space() const { return space_; }
  std::span<const double> values() const { return values_; }
  double operator[](PointId p) const { return values_.at(p); }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// An idempotent *-measure stored as its normal usc density u: X -> [0,1]
/// (on a finite space every function is usc). Normality, max u = 1, is
/// checked on construction.
class StarMeasure {
 public:
  StarMeasure(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)),
        values_(detail::checked_values(space_, std::move(values), "measure value")) {
    if (*std::max_element(values_.begin(), values_.end()) != 1.0) {
      throw DomainError("measure density is not normal (max value != 1)");
    }
  }

  explicit StarMeasure(const WeightFunction& w)
      : StarMeasure(w.space(), std::vector<double>(w.values().begin(), w.values().end())) {}

  const SpacePtr& space() const { return space_; }
  std::span<const double> values() const { return values_; }
  double operator[](PointId p) const { return values_.at(p); }
  std::size_t size() const { return values_.size(); }

  WeightFunction as_weight() const { return WeightFunction(space_, values_); }

  // Points with u(x) > floor, ascending.
  std::vector<PointId> support(double floor = kDefaultSupportFloor) const {
    std::vector<PointId> s;
    for (PointId p = 0; p < values_.size(); ++p) {
      if (values_[p] > floor) s.push_back(p);
    }
    return s;
  }

  friend bool operator==(const StarMeasure& a, const StarMeasure& b) {
    return a.values_ == b.values_ && (a.space_ == b.space_ || *a.space_ == *b.space_);
  }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

inline StarMeasure dirac(const SpacePtr& space, PointId x) {
  if (!space || !space->contains(x)) throw DomainError("dirac point not in space");
  std::vector<double> v(space->size(), 0.0);
  v[x] = 1.0;
  return StarMeasure(space, std::move(v));
}

/// u = 1 on A and 0 elsewhere; the hypograph (X x {0}) u (A x I).
inline StarMeasure from_support(const SpacePtr& space, std::span<const PointId> a) {
  if (a.empty()) throw DomainError("from_support of an empty set");
  std::vector<double> v(space->size(), 0.0);
  for (PointId p : a) {
    if (!space->contains(p)) throw DomainError("support point not in space");
    v[p] = 1.0;
  }
  return StarMeasure(space, std::move(v));
}

inline StarMeasure full_measure(const SpacePtr& space) {
  return StarMeasure(space, std::vector<double>(space->size(), 1.0));
}

/// mu(phi) = max_x phi(x) * u(x).
inline double evaluate(std::span<const double> density, const TestFunction& phi, TNorm t) {
  double acc = 0.0;
  for (std::size_t p = 0; p < density.size(); ++p) {
    acc = std::max(acc, t.apply(phi[p], density[p]));
  }
  return acc;
}

inline double evaluate(const StarMeasure& mu, const TestFunction& phi, TNorm t) {
  detail::require_same_space(mu.space(), phi.space());
  return evaluate(mu.values(), phi, t);
}

inline double evaluate(const WeightFunction& w, const TestFunction& phi, TNorm t) {
  detail::require_same_space(w.space(), phi.space());
  return evaluate(w.values(), phi, t);
}

inline StarMeasure join(const StarMeasure& mu, const StarMeasure& nu) {
  detail::require_same_space(mu.space(), nu.space());
  std::vector<double> v(mu.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = std::max(mu[p], nu[p]);
  return StarMeasure(mu.space(), std::move(v));
}

/// Pointwise alpha * u(x); the max value is alpha * 1 = alpha.
inline WeightFunction scale(double alpha, const StarMeasure& mu, TNorm t) {
  require_unit_interval(alpha, "scale factor");
  std::vector<double> v(mu.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = t.apply(alpha, mu[p]);
  return WeightFunction(mu.space(), std::move(v));
}

/// Image of a fuzzy set under f: result(y) = max{w(x) : f(x) = y}, zero on
/// points without preimage. `f` returns a codomain point index.
template <typename F>
WeightFunction pushforward(const WeightFunction& w, const SpacePtr& codomain, F&& f) {
  std::vector<double> v(codomain->size(), 0.0);
  for (PointId x = 0; x < w.size(); ++x) {
    const PointId y = f(x);
    if (!codomain->contains(y)) throw DomainError("pushforward image not in codomain");
    v[y] = std::max(v[y], w[x]);
  }
  return WeightFunction(codomain, std::move(v));
}

template <typename F>
StarMeasure pushforward(const StarMeasure& mu, const SpacePtr& codomain, F&& f) {
  return StarMeasure(pushforward(mu.as_weight(), codomain, std::forward<F>(f)));
}

/// Grid variant: `f` returns raw coordinates that are snapped onto `codomain`.
template <typename F>
WeightFunction pushforward_coords(const WeightFunction& w, const SpacePtr& codomain, F&& f) {
  const GridSpace* g = codomain->grid();
  if (!g) throw DomainError("coordinate pushforward needs a grid codomain");
  return pushforward(w, codomain, [&](PointId x) {
    const std::vector<double> c = f(x);
    if (auto y = g->try_snap(c)) return *y;
    throw MapRangeError("pushforward image of point " + std::to_string(x) +
                        " lies outside the grid box");
  });
}

/// Tensor density of the G-symmetrized power at an orbit: u(x_1) * ... * u(x_m).
/// The factors are folded in descending order so the value is bitwise
/// independent of the representative chosen.
inline double sym_tensor_value(std::span<const double> density, TNorm t,
                               std::span<const PointId> orbit) {
  if (orbit.empty()) throw DomainError("empty tuple");
  std::array<double, kMaxArity> f{};
  if (orbit.size() > f.size()) throw DomainError("tuple arity too large");
  const std::size_t m = orbit.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double v = density[orbit[i]];
    std::size_t j = i;
    for (; j > 0 && f[j - 1] < v; --j) f[j] = f[j - 1];
    f[j] = v;
  }
  double acc = f[0];
  for (std::size_t i = 1; i < m; ++i) acc = t.apply(acc, f[i]);
  return acc;
}

inline double sym_tensor_value(const StarMeasure& mu, TNorm t, std::span<const PointId> orbit) {
  for (PointId p : orbit) {
    if (!mu.space()->contains(p)) throw DomainError("tuple point not in space");
  }
  return sym_tensor_value(mu.values(), t, orbit);
}

/// Level index floor(q * u) with a 1e-9 guard against values that sit one
/// rounding error below a lattice level.
inline int quantize_level(double u, int q) {
  return static_cast<int>(std::floor(u * q + 1e-9));
}

/// Hypograph {(x, k/q) : k/q <= u(x)} at level quantization q, stored as the
/// top level index per point. Saturation and X x {0} are implicit in this
/// encoding; `contains` answers membership of a lattice pair.
class Hypograph {
 public:
  Hypograph(SpacePtr space, int q, std::vector<int> tops)
      : space_(std::move(space)), q_(q), tops_(std::move(tops)) {
    if (q_ < 1) throw DomainError("level quantization must be >= 1");
    if (tops_.size() != space_->size()) throw DomainError("hypograph size mismatch");
    for (int k : tops_) {
      if (k < 0 || k > q_) throw DomainError("hypograph level outside [0,q]");
    }
  }

  const SpacePtr& space() const { return space_; }
  int levels() const { return q_; }
  std::span<const int> tops() const { return tops_; }

  bool contains(PointId x, int level) const { return level >= 0 && level <= tops_.at(x); }

  // Enumerates every (point, level index) pair, including the zero slice.
  std::vector<std::pair<PointId, int>> pairs() const {
    std::vector<std::pair<PointId, int>> out;
    for (PointId x = 0; x < tops_.size(); ++x) {
      for (int k = 0; k <= tops_[x]; ++k) out.emplace_back(x, k);
    }
    return out;
  }

  bool meets_top() const { return std::find(tops_.begin(), tops_.end(), q_) != tops_.end(); }

  friend bool operator==(const Hypograph&, const Hypograph&) = default;

 private:
  SpacePtr space_;
  int q_;
  std::vector<int> tops_;
};

inline Hypograph hypograph(const StarMeasure& mu, int q) {
  if (q < 1) throw DomainError("level quantization must be >= 1");
  std::vector<int> tops(mu.size());
  for (std::size_t p = 0; p < tops.size(); ++p) tops[p] = quantize_level(mu[p], q);
  return Hypograph(mu.space(), q, std::move(tops));
}

inline StarMeasure measure_from_hypograph(const Hypograph& h) {
  std::vector<double> v(h.tops().size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    v[p] = static_cast<double>(h.tops()[p]) / h.levels();
  }
  return StarMeasure(h.space(), std::move(v));
}

/// One-sided Hausdorff excess of hypograph(a) over hypograph(b) in X x I with
/// the sup metric, both quantized at q. For a point (x, s) of the first
/// hypograph the nearest partner is (y, min(s, top_b(y))), so only the top of
/// each column of `a` matters, and only columns of `b` with positive top or
/// y = x can beat the zero slice.
inline double hypograph_excess(const Space& space, std::span<const double> a,
                               std::span<const double> b, int q) {
  std::vector<PointId> b_support;
  std::vector<double> b_level(b.size());
  for (PointId y = 0; y < b.size(); ++y) {
    const int k = quantize_level(b[y], q);
    b_level[y] = static_cast<double>(k) / q;
    if (k > 0) b_support.push_back(y);
  }
  double worst = 0.0;
  for (PointId x = 0; x < a.size(); ++x) {
    const double s = static_cast<double>(quantize_level(a[x], q)) / q;
    double best = std::max(0.0, s - b_level[x]);
    if (best <= worst) continue;
    for (PointId y : b_support) {
      const double d = space.distance(x, y);
      if (d >= best) continue;
      best = std::min(best, std::max(d, s - b_level[y]));
      if (best <= worst) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

enum class DistanceMode { sup, hypograph, weakstar };

struct DistanceParams {
  int levels = kDefaultLevels;
  TNorm tnorm = TNorm::minimum();
  // Required in weakstar mode.
  std::span<const TestFunction> dictionary{};
};

inline double distance(const StarMeasure& mu, const StarMeasure& nu, DistanceMode mode,
                       const DistanceParams& params = {}) {
  detail::require_same_space(mu.space(), nu.space());
  switch (mode) {
    case DistanceMode::sup: {
      double d = 0.0;
      for (std::size_t p = 0; p < mu.size(); ++p) d = std::max(d, std::abs(mu[p] - nu[p]));
      return d;
    }
    case DistanceMode::hypograph: {
      const Space& s = *mu.space();
      return std::max(hypograph_excess(s, mu.values(), nu.values(), params.levels),
                      hypograph_excess(s, nu.values(), mu.values(), params.levels));
    }
    case DistanceMode::weakstar: {
      if (params.dictionary.empty()) throw DomainError("weakstar distance needs a dictionary");
      double d = 0.0;
      for (const auto& phi : params.dictionary) {
        d = std::max(d, std::abs(evaluate(mu, phi, params.tnorm) -
                                 evaluate(nu, phi, params.tnorm)));
      }
      return d;
    }
  }
  return 0.0;
}

/// Default weak* dictionary: every point indicator plus `random_fields`
/// piecewise-constant fields over contiguous index blocks, drawn from `seed`.
inline std::vector<TestFunction> weakstar_dictionary(const SpacePtr& space, std::uint64_t seed,
                                                     std::size_t random_fields = 8) {
  std::vector<TestFunction> dict;
  const std::size_t n = space->size();
  for (PointId p = 0; p < n; ++p) {
    std::vector<double> v(n, 0.0);
    v[p] = 1.0;
    dict.emplace_back(space, std::move(v));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t f = 0; f < random_fields; ++f) {
    const std::size_t blocks = 2 + f;
    std::vector<double> levels(blocks);
    for (auto& l : levels) l = unit(rng);
    std::vector<double> v(n);
    for (PointId p = 0; p < n; ++p) v[p] = levels[p * blocks / n];
    dict.emplace_back(space, std::move(v));
  }
  return dict;
}

inline std::string_view to_string(DistanceMode m) {
  switch (m) {
    case DistanceMode::sup: return "sup";
    case DistanceMode::hypograph: return "hypograph";
    case DistanceMode::weakstar: return "weakstar";
  }
  return "?";
}

/// CSV with header `point_index,value`; values in shortest round-trip form.
inline void write_csv(std::ostream& os, std::span<const double> values) {
  os << "point_index,value\n";
  char buf[64];
  for (std::size_t p = 0; p < values.size(); ++p) {
    std::snprintf(buf, sizeof buf, "%.17g", values[p]);
    os << p << ',' << buf << '\n';
  }
}

inline StarMeasure read_csv(std::istream& is, const SpacePtr& space) {
  std::string line;
  if (!std::getline(is, line) || line != "point_index,value") {
    throw DomainError("measure CSV must start with header 'point_index,value'");
  }
  std::vector<double> v(space->size(), 0.0);
  std::vector<bool> seen(space->size(), false);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("malformed CSV row '" + line + "'");
    const std::size_t p = std::stoull(line.substr(0, comma));
    if (!space->contains(p) || seen[p]) throw DomainError("bad point index in CSV row '" + line + "'");
    seen[p] = true;
    v[p] = std::stod(line.substr(comma + 1));
  }
  return StarMeasure(space, std::move(v));
}

}  // namespace starfix
