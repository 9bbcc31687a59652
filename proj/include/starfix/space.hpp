#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "starfix/errors.hpp"
#include "starfix/group.hpp"

namespace starfix {

enum class GridMetric { chebyshev, euclidean };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Regular lattice over an axis-aligned box. Node indices are row-major with
/// axis 0 varying fastest, so a 2D node (i, j) has index i + j * res[0].
class GridSpace {
 public:
  static constexpr double kDefaultBoxTolerance = 1e-9;

  GridSpace(std::vector<Interval> box, std::vector<std::size_t> resolution,
            GridMetric metric = GridMetric::chebyshev,
            double box_tolerance = kDefaultBoxTolerance)
      : box_(std::move(box)), res_(std::move(resolution)), metric_(metric), tol_(box_tolerance) {
    if (box_.empty() || box_.size() != res_.size()) {
      throw DomainError("grid box and resolution must have the same nonzero dimension");
    }
    std::size_t n = 1;
    for (std::size_t a = 0; a < box_.size(); ++a) {
      if (res_[a] < 2) throw DomainError("grid needs at least 2 nodes per axis");
      if (!(box_[a].hi > box_[a].lo)) throw DomainError("grid box interval must have hi > lo");
      step_.push_back((box_[a].hi - box_[a].lo) / static_cast<double>(res_[a] - 1));
      n *= res_[a];
    }
    size_ = n;
  }

  // Uniform grid on [0,1]^dim.
  static GridSpace unit(std::size_t dim, std::size_t nodes_per_axis,
                        GridMetric metric = GridMetric::chebyshev) {
    return GridSpace(std::vector<Interval>(dim, Interval{0.0, 1.0}),
                     std::vector<std::size_t>(dim, nodes_per_axis), metric);
  }

  std::size_t dim() const { return box_.size(); }
  std::size_t size() const { return size_; }
  GridMetric metric() const { return metric_; }
  const std::vector<Interval>& box() const { return box_; }
  const std::vector<std::size_t>& resolution() const { return res_; }
  double step(std::size_t axis) const { return step_[axis]; }
  double box_tolerance() const { return tol_; }

  std::size_t axis_index(PointId p, std::size_t axis) const {
    for (std::size_t a = 0; a < axis; ++a) p /= res_[a];
    return p % res_[axis];
  }

  double axis_coord(std::size_t axis, std::size_t k) const {
    // The last node is pinned to hi so the box endpoints are exact.
    if (k + 1 == res_[axis]) return box_[axis].hi;
    return box_[axis].lo + static_cast<double>(k) * step_[axis];
  }

  std::vector<double> coords(PointId p) const {
    check(p);
    std::vector<double> c(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
      c[a] = axis_coord(a, p % res_[a]);
      p /= res_[a];
    }
    return c;
  }

  PointId index_of(std::span<const std::size_t> multi) const {
    PointId p = 0, stride = 1;
    for (std::size_t a = 0; a < dim(); ++a) {
      p += multi[a] * stride;
      stride *= res_[a];
    }
    return p;
  }

  double coord_distance(std::span<const double> a, std::span<const double> b) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = std::abs(a[i] - b[i]);
      if (metric_ == GridMetric::chebyshev) {
        acc = std::max(acc, d);
      } else {
        acc += d * d;
      }
    }
    return metric_ == GridMetric::chebyshev ? acc : std::sqrt(acc);
  }

  double distance(PointId p, PointId q) const {
    check(p);
    check(q);
    double acc = 0.0;
    for (std::size_t a = 0; a < dim(); ++a) {
      const double d = std::abs(axis_coord(a, p % res_[a]) - axis_coord(a, q % res_[a]));
      p /= res_[a];
      q /= res_[a];
      if (metric_ == GridMetric::chebyshev) {
        acc = std::max(acc, d);
      } else {
        acc += d * d;
      }
    }
    return metric_ == GridMetric::chebyshev ? acc : std::sqrt(acc);
  }

  double diameter() const {
    std::vector<double> w(dim());
    for (std::size_t a = 0; a < dim(); ++a) w[a] = box_[a].hi - box_[a].lo;
    std::vector<double> zero(dim(), 0.0);
    return coord_distance(zero, w);
  }

  // Length of one cell diagonal in the grid metric.
  double cell() const { return coord_distance(std::vector<double>(dim(), 0.0), step_); }

  /// Nearest node, ties toward the lower index on each axis; nullopt when the
  /// point lies outside the box inflated by the box tolerance.
  std::optional<PointId> try_snap(std::span<const double> p) const {
    if (p.size() != dim()) return std::nullopt;
    PointId idx = 0, stride = 1;
    for (std::size_t a = 0; a < dim(); ++a) {
      const double x = p[a];
      if (!(x >= box_[a].lo - tol_ && x <= box_[a].hi + tol_)) return std::nullopt;
      const double t = (x - box_[a].lo) / step_[a];
      double k = std::ceil(t - 0.5);
      k = std::clamp(k, 0.0, static_cast<double>(res_[a] - 1));
      idx += static_cast<PointId>(k) * stride;
      stride *= res_[a];
    }
    return idx;
  }

  PointId snap(std::span<const double> p) const {
    if (auto s = try_snap(p)) return *s;
    std::string msg = "point (";
    for (std::size_t i = 0; i < p.size(); ++i) msg += (i ? "," : "") + std::to_string(p[i]);
    throw MapRangeError(msg + ") outside the grid box");
  }

  friend bool operator==(const GridSpace& a, const GridSpace& b) {
    return a.box_ == b.box_ && a.res_ == b.res_ && a.metric_ == b.metric_;
  }

 private:
  void check(PointId p) const {
    if (p >= size_) throw DomainError("point " + std::to_string(p) + " not in grid");
  }

  std::vector<Interval> box_;
  std::vector<std::size_t> res_;
  std::vector<double> step_;
  GridMetric metric_;
  double tol_;
  std::size_t size_ = 0;
};

/// Finite metric space given by an explicit distance table.
class TableSpace {
 public:
  explicit TableSpace(std::vector<std::vector<double>> distances) : n_(distances.size()) {
    if (n_ == 0) throw DomainError("table space needs at least one point");
    d_.reserve(n_ * n_);
    for (const auto& row : distances) {
      if (row.size() != n_) throw DomainError("distance table must be square");
      d_.insert(d_.end(), row.begin(), row.end());
    }
    validate();
  }

  std::size_t size() const { return n_; }

  double distance(PointId p, PointId q) const {
    if (p >= n_ || q >= n_) throw DomainError("point not in table space");
    return d_[p * n_ + q];
  }

  double diameter() const { return *std::max_element(d_.begin(), d_.end()); }

  // Smallest positive distance; zero for a one-point space.
  double cell() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : d_) {
      if (v > 0.0) m = std::min(m, v);
    }
    return std::isinf(m) ? 0.0 : m;
  }

  friend bool operator==(const TableSpace&, const TableSpace&) = default;

 private:
  void validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = d_[i * n_ + j];
        if (!std::isfinite(v) || v < 0.0) throw DomainError("distances must be finite and >= 0");
        if (v != d_[j * n_ + i]) throw DomainError("distance table is not symmetric");
        if ((i == j) != (v == 0.0)) {
          throw DomainError("distance must vanish exactly on the diagonal");
        }
        for (std::size_t k = 0; k < n_; ++k) {
          const double via = d_[i * n_ + k] + d_[k * n_ + j];
          if (v > via * (1.0 + 1e-12)) {
            throw DomainError("triangle inequality fails at (" + std::to_string(i) + "," +
                              std::to_string(k) + "," + std::to_string(j) + ")");
          }
        }
      }
    }
  }

  std::size_t n_;
  std::vector<double> d_;
};

/// Either kind of finite space. Immutable after construction.
class Space {
 public:
  Space(GridSpace g) : impl_(std::move(g)) {}
  Space(TableSpace t) : impl_(std::move(t)) {}

  std::size_t size() const {
    return std::visit([](const auto& s) { return s.size(); }, impl_);
  }
  double distance(PointId p, PointId q) const {
    return std::visit([&](const auto& s) { return s.distance(p, q); }, impl_);
  }
  double diameter() const {
    return std::visit([](const auto& s) { return s.diameter(); }, impl_);
  }
  // One grid-cell diagonal; for tables, the smallest positive distance.
  double cell() const {
    return std::visit([](const auto& s) { return s.cell(); }, impl_);
  }

  const GridSpace* grid() const { return std::get_if<GridSpace>(&impl_); }
  const TableSpace* table() const { return std::get_if<TableSpace>(&impl_); }

  bool contains(PointId p) const { return p < size(); }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  std::variant<GridSpace, TableSpace> impl_;
};

inline double distance(const Space& s, PointId p, PointId q) { return s.distance(p, q); }
inline double diameter(const Space& s) { return s.diameter(); }

/// Maximum metric on X^m.
inline double power_distance(const Space& s, std::span<const PointId> x,
                             std::span<const PointId> y) {
  if (x.size() != y.size()) throw DomainError("power_distance arity mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, s.distance(x[i], y[i]));
  return d;
}

/// Quotient metric on SP^m_G X: min over sigma in G of max_i d(x_i, y_sigma(i)).
inline double sym_distance(const Space& s, const PermGroup& g, std::span<const PointId> x,
                           std::span<const PointId> y) {
  if (x.size() != g.arity() || y.size() != g.arity()) {
    throw DomainError("sym_distance arity mismatch");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& sigma : g.elements()) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size() && d < best; ++i) {
      d = std::max(d, s.distance(x[i], y[sigma[i]]));
    }
    best = std::min(best, d);
  }
  return best;
}

/// Directed Hausdorff excess sup_{a in A} inf_{b in B} dist(a, b), with the
/// usual early break once a row can no longer raise the running maximum.
template <typename P, typename Dist>
double directed_hausdorff(std::span<const P> a, std::span<const P> b, Dist&& dist) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      const double d = dist(p, q);
      if (d < best) {
        best = d;
        if (best <= worst) break;
      }
    }
    worst = std::max(worst, best);
  }
  return worst;
}

template <typename P, typename Dist>
double hausdorff(std::span<const P> a, std::span<const P> b, Dist&& dist) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff of an empty set");
  return std::max(directed_hausdorff(a, b, dist), directed_hausdorff(b, a, dist));
}

inline double hausdorff(const Space& s, std::span<const PointId> a, std::span<const PointId> b) {
  return hausdorff(a, b, [&](PointId p, PointId q) { return s.distance(p, q); });
}

}  // namespace starfix
