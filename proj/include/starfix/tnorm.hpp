#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "starfix/errors.hpp"

namespace starfix {

enum class TNormKind { product, minimum, lukasiewicz };

inline void require_unit_interval(double v, std::string_view what = "value") {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(what) + " " + std::to_string(v) + " outside [0,1]");
  }
}

/// A continuous triangular norm on [0,1].
///
/// Only the three classical norms are provided. The set is closed on purpose
/// so that exhaustive lattice checks stay tractable; adding a norm means a new
/// enumerator plus a case in `apply`.
class TNorm {
 public:
  constexpr TNorm() = default;
  constexpr explicit TNorm(TNormKind kind) : kind_(kind) {}

  static constexpr TNorm product() { return TNorm(TNormKind::product); }
  static constexpr TNorm minimum() { return TNorm(TNormKind::minimum); }
  static constexpr TNorm lukasiewicz() { return TNorm(TNormKind::lukasiewicz); }

  // Accepts the config spellings "product", "min" and "lukasiewicz".
  static TNorm from_name(std::string_view name) {
    if (name == "product") return product();
    if (name == "min" || name == "minimum") return minimum();
    if (name == "lukasiewicz") return lukasiewicz();
    throw DomainError("unknown t-norm '" + std::string(name) + "'");
  }

  constexpr TNormKind kind() const { return kind_; }

  constexpr std::string_view name() const {
    switch (kind_) {
      case TNormKind::product: return "product";
      case TNormKind::minimum: return "min";
      case TNormKind::lukasiewicz: return "lukasiewicz";
    }
    return "?";
  }

  // Unchecked evaluation, used by the hot kernels.
  constexpr double apply(double a, double b) const {
    switch (kind_) {
      case TNormKind::product: return a * b;
      case TNormKind::minimum: return a < b ? a : b;
      case TNormKind::lukasiewicz: {
        // a + 1 - 1 rounds for non-dyadic a; keep the unit law exact.
        if (b == 1.0) return a;
        if (a == 1.0) return b;
        const double s = a + b - 1.0;
        return s > 0.0 ? s : 0.0;
      }
    }
    return 0.0;
  }

  // Checked evaluation.
  double operator()(double a, double b) const {
    require_unit_interval(a, "t-norm argument");
    require_unit_interval(b, "t-norm argument");
    return apply(a, b);
  }

  friend constexpr bool operator==(TNorm, TNorm) = default;

 private:
  TNormKind kind_ = TNormKind::minimum;
};

inline double eval(TNorm t, double a, double b) { return t(a, b); }

/// Left fold of `t` over a nonempty list.
inline double fold(TNorm t, std::span<const double> values) {
  if (values.empty()) throw DomainError("fold of an empty list");
  for (double v : values) require_unit_interval(v, "fold argument");
  double acc = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) acc = t.apply(acc, values[i]);
  return acc;
}

struct AxiomReport {
  std::size_t samples = 0;
  double commutativity = 0.0;
  double associativity = 0.0;
  double monotonicity = 0.0;
  double unit = 0.0;

  double worst() const {
    return std::max({commutativity, associativity, monotonicity, unit});
  }
};

/// Largest observed violation of each axiom over `sample_count` pseudo-random
/// triples drawn from the 1/256 lattice of [0,1]. Monotonicity is measured as
/// max(0, a*b - a'*b) for the ordered pair a <= a'.
inline AxiomReport verify_axioms(TNorm t, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count == 0) throw DomainError("verify_axioms needs sample_count >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, 256);
  auto draw = [&] { return level(rng) / 256.0; };

  AxiomReport r;
  r.samples = sample_count;
  for (std::size_t i = 0; i < sample_count; ++i) {
    double a = draw(), b = draw(), c = draw();
    r.commutativity = std::max(r.commutativity, std::abs(t.apply(a, b) - t.apply(b, a)));
    r.associativity = std::max(
        r.associativity, std::abs(t.apply(t.apply(a, b), c) - t.apply(a, t.apply(b, c))));
    r.unit = std::max(r.unit, std::abs(t.apply(a, 1.0) - a));
    const double lo = std::min(a, c), hi = std::max(a, c);
    r.monotonicity = std::max(r.monotonicity, std::max(0.0, t.apply(lo, b) - t.apply(hi, b)));
  }
  return r;
}

}  // namespace starfix
