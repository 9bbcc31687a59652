#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "starfix/errors.hpp"
#include "starfix/group.hpp"
#include "starfix/measure.hpp"
#include "starfix/space.hpp"
#include "starfix/tnorm.hpp"

namespace starfix {

/// g(x_1..x_m) = sum_j A_j x_j + b on a d-dimensional grid. Each block A_j is
/// d x d, row-major.
struct AffineMap {
  std::vector<std::vector<double>> blocks;
  std::vector<double> offset;
};

/// Explicit map on a table space: entry at row-major tuple index
/// x_1 * N^(m-1) + ... + x_m is the image point.
struct TableMap {
  std::vector<PointId> image;
};

using GifsMap = std::variant<AffineMap, TableMap>;

/// A G-symmetric generalized IFS of *-measures: maps g_i: SP^m_G X -> X with
/// weights alpha_i (max alpha_i = 1) and a t-norm.
struct GifsSystem {
  SpacePtr space;
  std::size_t arity = 1;
  PermGroup group = PermGroup::trivial(1);
  std::vector<GifsMap> maps;
  std::vector<double> weights;
  TNorm tnorm = TNorm::minimum();
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

inline std::string tuple_string(std::span<const PointId> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

inline void validate_affine(const GifsSystem& sys, std::size_t i, const AffineMap& f,
                            std::vector<std::string>& out) {
  const std::string tag = "map " + std::to_string(i) + ": ";
  const GridSpace* g = sys.space->grid();
  if (!g) {
    out.push_back(tag + "affine maps require a grid space");
    return;
  }
  const std::size_t d = g->dim();
  if (f.blocks.size() != sys.arity) {
    out.push_back(tag + "expected " + std::to_string(sys.arity) + " blocks, got " +
                  std::to_string(f.blocks.size()));
    return;
  }
  if (f.offset.size() != d) {
    out.push_back(tag + "offset has " + std::to_string(f.offset.size()) +
                  " entries, dimension is " + std::to_string(d));
    return;
  }
  for (std::size_t j = 0; j < f.blocks.size(); ++j) {
    if (f.blocks[j].size() != d * d) {
      out.push_back(tag + "block " + std::to_string(j) + " must have d*d = " +
                    std::to_string(d * d) + " entries");
      return;
    }
    for (double a : f.blocks[j]) {
      if (!std::isfinite(a)) {
        out.push_back(tag + "non-finite coefficient in block " + std::to_string(j));
        return;
      }
    }
  }
  for (double b : f.offset) {
    if (!std::isfinite(b)) {
      out.push_back(tag + "non-finite offset");
      return;
    }
  }
  // G-invariance of an affine map is exactly A_j = A_sigma(j).
  for (const auto& sigma : sys.group.elements()) {
    for (std::size_t j = 0; j < sys.arity; ++j) {
      if (f.blocks[j] != f.blocks[sigma[j]]) {
        out.push_back(tag + "not G-invariant: block " + std::to_string(j) + " differs from block " +
                      std::to_string(sigma[j]));
        return;
      }
    }
  }
  // The image of the box under an affine map is the box spanned by its
  // corner images, so a per-axis interval bound is exact.
  for (std::size_t r = 0; r < d; ++r) {
    double lo = f.offset[r], hi = f.offset[r];
    for (const auto& a : f.blocks) {
      for (std::size_t c = 0; c < d; ++c) {
        const double u = a[r * d + c] * g->box()[c].lo;
        const double v = a[r * d + c] * g->box()[c].hi;
        lo += std::min(u, v);
        hi += std::max(u, v);
      }
    }
    const double tol = g->box_tolerance();
    if (lo < g->box()[r].lo - tol || hi > g->box()[r].hi + tol) {
      out.push_back(tag + "image of the box leaves the box on axis " + std::to_string(r) +
                    ": [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
}

inline void validate_table(const GifsSystem& sys, std::size_t i, const TableMap& f,
                           std::vector<std::string>& out) {
  const std::string tag = "map " + std::to_string(i) + ": ";
  if (!sys.space->table()) {
    out.push_back(tag + "table maps require a table space");
    return;
  }
  const std::size_t n = sys.space->size();
  const std::size_t total = ipow(n, sys.arity);
  if (f.image.size() != total) {
    out.push_back(tag + "table needs N^m = " + std::to_string(total) + " entries, got " +
                  std::to_string(f.image.size()));
    return;
  }
  for (std::size_t k = 0; k < total; ++k) {
    if (f.image[k] >= n) {
      out.push_back(tag + "entry " + std::to_string(k) + " is not a point of the space");
      return;
    }
  }
  Tuple x(sys.arity, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t j = sys.arity; j-- > 0;) {
      x[j] = rest % n;
      rest /= n;
    }
    for (const auto& sigma : sys.group.elements()) {
      const Tuple y = permute<PointId>(x, sigma);
      std::size_t idx = 0;
      for (PointId p : y) idx = idx * n + p;
      if (f.image[idx] != f.image[k]) {
        out.push_back(tag + "not G-invariant at " + tuple_string(x));
        return;
      }
    }
  }
}

}  // namespace detail

/// Checks every structural precondition of a system; never throws for a
/// malformed system, the report lists what is wrong.
inline ValidationReport validate(const GifsSystem& sys) {
  ValidationReport r;
  auto& v = r.violations;
  if (!sys.space) {
    v.push_back("system has no space");
    return r;
  }
  if (sys.arity == 0 || sys.arity > kMaxArity) {
    v.push_back("arity m must lie in [1," + std::to_string(kMaxArity) + "]");
    return r;
  }
  if (sys.group.arity() != sys.arity) {
    v.push_back("group arity " + std::to_string(sys.group.arity()) + " differs from m = " +
                std::to_string(sys.arity));
    return r;
  }
  if (sys.maps.empty()) v.push_back("system has no maps");
  if (sys.weights.size() != sys.maps.size()) {
    v.push_back("expected one weight per map (" + std::to_string(sys.maps.size()) + "), got " +
                std::to_string(sys.weights.size()));
  }
  bool in_range = true;
  for (std::size_t i = 0; i < sys.weights.size(); ++i) {
    if (!(sys.weights[i] >= 0.0 && sys.weights[i] <= 1.0)) {
      v.push_back("weight " + std::to_string(i) + " outside [0,1]");
      in_range = false;
    }
  }
  if (in_range && !sys.weights.empty() &&
      *std::max_element(sys.weights.begin(), sys.weights.end()) != 1.0) {
    v.push_back("max weight must equal 1");
  }
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    std::visit(
        [&](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, AffineMap>) {
            detail::validate_affine(sys, i, f, v);
          } else {
            detail::validate_table(sys, i, f, v);
          }
        },
        sys.maps[i]);
  }
  return r;
}

inline void require_valid(const GifsSystem& sys) {
  const auto r = validate(sys);
  if (!r.ok()) {
    std::string msg = "invalid system:";
    for (const auto& s : r.violations) msg += "\n  " + s;
    throw ValidationError(msg);
  }
}

/// Precomputed evaluation of the maps of a validated system. Affine maps keep
/// A_j x for every point x, so an image costs m vector adds plus one snap.
class MapEvaluator {
 public:
  explicit MapEvaluator(const GifsSystem& sys) : sys_(&sys) {
    const Space& s = *sys.space;
    grid_ = s.grid();
    if (grid_) {
      dim_ = grid_->dim();
      partial_.resize(sys.maps.size());
      for (std::size_t i = 0; i < sys.maps.size(); ++i) {
        const auto* f = std::get_if<AffineMap>(&sys.maps[i]);
        if (!f) continue;
        auto& pi = partial_[i];
        pi.resize(sys.arity, std::vector<double>(s.size() * dim_));
        for (PointId x = 0; x < s.size(); ++x) {
          const auto c = grid_->coords(x);
          for (std::size_t j = 0; j < sys.arity; ++j) {
            for (std::size_t r = 0; r < dim_; ++r) {
              double acc = 0.0;
              for (std::size_t k = 0; k < dim_; ++k) acc += f->blocks[j][r * dim_ + k] * c[k];
              pi[j][x * dim_ + r] = acc;
            }
          }
        }
      }
    }
  }

  std::size_t map_count() const { return sys_->maps.size(); }

  // Unsnapped image coordinates of an affine map.
  void raw_image(std::size_t i, std::span<const PointId> x, std::span<double> out) const {
    const auto& f = std::get<AffineMap>(sys_->maps[i]);
    for (std::size_t r = 0; r < dim_; ++r) out[r] = f.offset[r];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double* p = &partial_[i][j][x[j] * dim_];
      for (std::size_t r = 0; r < dim_; ++r) out[r] += p[r];
    }
  }

  bool is_affine(std::size_t i) const { return std::holds_alternative<AffineMap>(sys_->maps[i]); }

  PointId image(std::size_t i, std::span<const PointId> x) const {
    if (const auto* t = std::get_if<TableMap>(&sys_->maps[i])) {
      const std::size_t n = sys_->space->size();
      std::size_t idx = 0;
      for (PointId p : x) idx = idx * n + p;
      return t->image[idx];
    }
    std::array<double, 16> buf{};
    std::span<double> out(buf.data(), dim_);
    std::vector<double> big;
    if (dim_ > buf.size()) {
      big.resize(dim_);
      out = big;
    }
    raw_image(i, x, out);
    if (auto y = grid_->try_snap(out)) return *y;
    std::string msg = "map " + std::to_string(i) + " sends " + detail::tuple_string(x) + " to (";
    for (std::size_t r = 0; r < dim_; ++r) msg += (r ? "," : "") + std::to_string(out[r]);
    throw MapRangeError(msg + "), outside the grid box");
  }

 private:
  const GifsSystem* sys_;
  const GridSpace* grid_ = nullptr;
  std::size_t dim_ = 0;
  // partial_[map][block][point * dim + axis]
  std::vector<std::vector<std::vector<double>>> partial_;
};

namespace detail {

/// Visits the `enum_group`-canonical tuples over `support` (ascending point
/// ids) whose first coordinate has position index congruent to `worker`
/// modulo `workers`.
template <typename Visit>
void for_each_orbit_rep(std::span<const PointId> support, const PermGroup& enum_group,
                        std::size_t worker, std::size_t workers, Visit&& visit) {
  const std::size_t m = enum_group.arity();
  const std::size_t n = support.size();
  if (n == 0) return;
  const bool nondecreasing = enum_group.is_symmetric();
  std::array<std::size_t, kMaxArity> pos{};
  std::array<PointId, kMaxArity> tup{};
  std::span<const PointId> view(tup.data(), m);
  for (std::size_t first = worker; first < n; first += workers) {
    pos[0] = first;
    for (std::size_t j = 1; j < m; ++j) pos[j] = nondecreasing ? first : 0;
    bool done = false;
    while (!done) {
      for (std::size_t j = 0; j < m; ++j) tup[j] = support[pos[j]];
      if (nondecreasing || is_orbit_rep(enum_group, view)) visit(view);
      // Odometer over positions 1..m-1; position 0 is fixed per outer step.
      std::size_t j = m - 1;
      while (true) {
        if (j == 0) {
          done = true;
          break;
        }
        if (++pos[j] < n) break;
        --j;
      }
      if (done) break;
      for (std::size_t k = j + 1; k < m; ++k) pos[k] = nondecreasing ? pos[j] : 0;
    }
  }
}

}  // namespace detail

struct PsiOptions {
  std::size_t threads = 1;
  double support_floor = kDefaultSupportFloor;
  // Enumerate orbit representatives of this subgroup H of G instead of G and
  // project each tuple through pi_HG before applying the maps. Null means G.
  const PermGroup* enumeration_group = nullptr;
};

namespace detail {

/// The fused kernel: tuple enumeration -> tensor value -> map -> snap ->
/// max-accumulate. With `unit_weights` every map contributes with weight 1
/// (used for the Hutchinson set map).
inline std::vector<double> psi_kernel(const GifsSystem& sys, const MapEvaluator& eval,
                                      std::span<const double> density, const PsiOptions& opt,
                                      bool unit_weights) {
  const Space& space = *sys.space;
  const PermGroup& g = sys.group;
  const PermGroup& h = opt.enumeration_group ? *opt.enumeration_group : g;
  if (!h.is_subgroup_of(g)) throw DomainError("enumeration group is not a subgroup of G");
  const bool project = !(h == g);

  std::vector<PointId> support;
  for (PointId p = 0; p < density.size(); ++p) {
    if (density[p] > opt.support_floor) support.push_back(p);
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min(opt.threads, support.size()));
  std::vector<std::vector<double>> acc(workers);
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t n_maps = sys.maps.size();

  auto work = [&](std::size_t w) {
    try {
      auto& out = acc[w];
      out.assign(space.size(), 0.0);
      Tuple rep(sys.arity);
      for_each_orbit_rep(support, h, w, workers, [&](std::span<const PointId> x) {
        const double val = sym_tensor_value(density, sys.tnorm, x);
        if (!(val > opt.support_floor)) return;
        std::span<const PointId> arg = x;
        if (project) {
          rep = orbit_rep(g, x);
          arg = rep;
        }
        for (std::size_t i = 0; i < n_maps; ++i) {
          const double v = unit_weights ? val : sys.tnorm.apply(sys.weights[i], val);
          const PointId y = eval.image(i, arg);
          if (v > out[y]) out[y] = v;
        }
      });
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<double> result = std::move(acc[0]);
  for (std::size_t w = 1; w < workers; ++w) {
    for (std::size_t p = 0; p < result.size(); ++p) result[p] = std::max(result[p], acc[w][p]);
  }
  return result;
}

}  // namespace detail

/// Psi(mu) = max_i alpha_i * M*(g_i)([mu x ... x mu]_G), computed without
/// materializing the tensor power. The system must be valid.
inline StarMeasure psi(const GifsSystem& sys, const MapEvaluator& eval, const StarMeasure& mu,
                       const PsiOptions& opt = {}) {
  detail::require_same_space(sys.space, mu.space());
  return StarMeasure(sys.space, detail::psi_kernel(sys, eval, mu.values(), opt, false));
}

inline StarMeasure psi(const GifsSystem& sys, const StarMeasure& mu, const PsiOptions& opt = {}) {
  require_valid(sys);
  return psi(sys, MapEvaluator(sys), mu, opt);
}

/// Phi(A) = union_i g_i(A^m), over orbit representatives of A^m.
inline std::vector<PointId> hutchinson_step(const GifsSystem& sys, const MapEvaluator& eval,
                                            std::span<const PointId> a, std::size_t threads = 1) {
  if (a.empty()) throw DomainError("hutchinson_step of an empty set");
  std::vector<double> ind(sys.space->size(), 0.0);
  for (PointId p : a) ind.at(p) = 1.0;
  PsiOptions opt;
  opt.threads = threads;
  const auto img = detail::psi_kernel(sys, eval, ind, opt, true);
  std::vector<PointId> out;
  for (PointId p = 0; p < img.size(); ++p) {
    if (img[p] > 0.0) out.push_back(p);
  }
  return out;
}

inline std::vector<PointId> hutchinson_step(const GifsSystem& sys, std::span<const PointId> a) {
  require_valid(sys);
  return hutchinson_step(sys, MapEvaluator(sys), a);
}

/// Iterates Phi from the whole space until successive sets are within `tol`
/// in the Hausdorff metric. Phi is monotone and the seed is the top element,
/// so with tol = 0 this stops at the exact discrete fixed set.
inline std::vector<PointId> attractor_set(const GifsSystem& sys, std::size_t max_iter = 1000,
                                          double tol = 0.0, std::size_t threads = 1) {
  require_valid(sys);
  const MapEvaluator eval(sys);
  std::vector<PointId> a(sys.space->size());
  for (PointId p = 0; p < a.size(); ++p) a[p] = p;
  for (std::size_t k = 0; k < max_iter; ++k) {
    auto b = hutchinson_step(sys, eval, a, threads);
    if (b == a) return b;
    const double d = hausdorff(*sys.space, std::span<const PointId>(a), std::span<const PointId>(b));
    a = std::move(b);
    if (d <= tol) return a;
  }
  throw ConvergenceError("attractor_set did not settle within " + std::to_string(max_iter) +
                         " steps");
}

struct ContractionRung {
  double threshold = 0.0;
  std::optional<double> alpha;  // empty when no sampled pair reaches the threshold
  std::size_t pairs = 0;
};

struct MapContraction {
  std::vector<ContractionRung> ladder;
  bool contractive = false;
};

/// Sampled evidence for the Matkowski criterion: for each threshold t of the
/// ladder diam/2^k, alpha(t) is the largest ratio d(g(x),g(y)) / d^(x,y) seen
/// over pairs with d^(x,y) >= t. A sampler, not a proof.
struct ContractionReport {
  std::size_t samples = 0;
  std::vector<MapContraction> maps;
  bool contractive = false;

  std::string verdict() const {
    return contractive ? "no violation found among " + std::to_string(samples) + " pairs"
                       : "not contractive";
  }
};

inline ContractionReport check_contraction(const GifsSystem& sys, std::size_t samples,
                                           std::uint64_t seed) {
  if (samples < 2) throw DomainError("check_contraction needs at least 2 samples");
  require_valid(sys);
  const Space& space = *sys.space;
  const MapEvaluator eval(sys);
  const std::size_t m = sys.arity;
  const std::size_t n = space.size();

  // Ladder down to the smallest positive point distance.
  double floor_dist = std::numeric_limits<double>::infinity();
  if (const auto* g = space.grid()) {
    for (std::size_t a = 0; a < g->dim(); ++a) floor_dist = std::min(floor_dist, g->step(a));
  } else {
    floor_dist = space.cell();
  }
  const double diam = space.diameter();
  std::vector<double> thresholds;
  for (double t = diam; t >= floor_dist * (1.0 - 1e-12) && thresholds.size() < 64; t /= 2.0) {
    thresholds.push_back(t);
  }
  if (thresholds.empty()) thresholds.push_back(diam);

  std::vector<std::pair<Tuple, Tuple>> pairs;
  // A diametral pair of diagonal tuples, so the top rung always has data.
  {
    PointId p0 = 0, q0 = n - 1;
    if (!space.grid()) {
      double best = -1.0;
      for (PointId p = 0; p < n; ++p) {
        for (PointId q = p + 1; q < n; ++q) {
          if (space.distance(p, q) > best) {
            best = space.distance(p, q);
            p0 = p;
            q0 = q;
          }
        }
      }
    }
    pairs.emplace_back(Tuple(m, p0), Tuple(m, q0));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, n - 1);
  while (pairs.size() < samples) {
    Tuple x(m), y(m);
    for (auto& v : x) v = pick(rng);
    for (auto& v : y) v = pick(rng);
    pairs.emplace_back(orbit_rep(sys.group, x), orbit_rep(sys.group, y));
  }

  ContractionReport rep;
  rep.samples = pairs.size();
  rep.contractive = true;
  const std::size_t dim = space.grid() ? space.grid()->dim() : 0;
  std::vector<double> gx(dim), gy(dim);
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    MapContraction mc;
    for (double t : thresholds) mc.ladder.push_back({t, std::nullopt, 0});
    for (const auto& [x, y] : pairs) {
      const double dxy = sym_distance(space, sys.group, x, y);
      if (dxy <= 0.0) continue;
      double dimg;
      if (eval.is_affine(i)) {
        eval.raw_image(i, x, gx);
        eval.raw_image(i, y, gy);
        dimg = space.grid()->coord_distance(gx, gy);
      } else {
        dimg = space.distance(eval.image(i, x), eval.image(i, y));
      }
      const double ratio = dimg / dxy;
      for (auto& rung : mc.ladder) {
        if (dxy >= rung.threshold * (1.0 - 1e-12)) {
          rung.alpha = std::max(rung.alpha.value_or(0.0), ratio);
          ++rung.pairs;
        }
      }
    }
    bool any = false;
    mc.contractive = true;
    for (const auto& rung : mc.ladder) {
      if (!rung.alpha) continue;
      any = true;
      if (*rung.alpha >= 1.0) mc.contractive = false;
    }
    mc.contractive = mc.contractive && any;
    rep.contractive = rep.contractive && mc.contractive;
    rep.maps.push_back(std::move(mc));
  }
  return rep;
}

}  // namespace starfix
