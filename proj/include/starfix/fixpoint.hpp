#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starfix/errors.hpp"
#include "starfix/gifs.hpp"
#include "starfix/measure.hpp"

namespace starfix {

enum class SeedStrategy { attractor_support, full, dirac_corner };

inline std::string_view to_string(SeedStrategy s) {
  switch (s) {
    case SeedStrategy::attractor_support: return "attractor_support";
    case SeedStrategy::full: return "full";
    case SeedStrategy::dirac_corner: return "dirac_corner";
  }
  return "?";
}

inline SeedStrategy seed_strategy_from_name(std::string_view s) {
  if (s == "attractor_support") return SeedStrategy::attractor_support;
  if (s == "full") return SeedStrategy::full;
  if (s == "dirac_corner") return SeedStrategy::dirac_corner;
  throw DomainError("unknown seed strategy '" + std::string(s) + "'");
}

struct SolverConfig {
  SeedStrategy seed = SeedStrategy::attractor_support;
  std::optional<double> epsilon;  // default: one cell diagonal + 1/q
  std::size_t max_iter = 200;
  DistanceMode mode = DistanceMode::hypograph;
  int levels = kDefaultLevels;
  double support_floor = kDefaultSupportFloor;
  std::size_t threads = 1;
  bool force = false;
  std::size_t contraction_samples = 2000;
  std::uint64_t rng_seed = 7;
  std::size_t attractor_max_iter = 10000;
};

inline double default_epsilon(const Space& s, int levels) { return s.cell() + 1.0 / levels; }

inline double resolved_epsilon(const SolverConfig& cfg, const Space& s) {
  return cfg.epsilon.value_or(default_epsilon(s, cfg.levels));
}

struct TraceRow {
  std::size_t step = 0;
  double residual = 0.0;     // distance(mu_k, Psi(mu_k)) in the solver's mode
  double sup_change = 0.0;   // max_x |u_{k+1}(x) - u_k(x)|
  std::size_t support = 0;   // points of mu_{k+1} above the support floor
  double nesting_violation = 0.0;  // one-sided excess of hyp(mu_{k+1}) over hyp(mu_k)
  double wall_ms = 0.0;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  std::vector<std::string> warnings;
};

enum class SolveStatus { converged, max_iter };

struct SolveResult {
  StarMeasure measure;
  IterationTrace trace;
  SolveStatus status = SolveStatus::max_iter;
  double residual = 0.0;
  double epsilon = 0.0;
  std::size_t iterations = 0;
  ContractionReport contraction;
};

inline StarMeasure seed_measure(const GifsSystem& sys, const SolverConfig& cfg) {
  switch (cfg.seed) {
    case SeedStrategy::attractor_support: {
      const auto a = attractor_set(sys, cfg.attractor_max_iter, 0.0, cfg.threads);
      return from_support(sys.space, a);
    }
    case SeedStrategy::full: return full_measure(sys.space);
    case SeedStrategy::dirac_corner: return dirac(sys.space, 0);
  }
  return full_measure(sys.space);
}

inline double measure_distance(const StarMeasure& a, const StarMeasure& b, DistanceMode mode,
                               int levels) {
  if (mode == DistanceMode::weakstar) {
    throw DomainError("the solver converges in sup or hypograph mode only");
  }
  DistanceParams p;
  p.levels = levels;
  return distance(a, b, mode, p);
}

/// distance(mu, Psi(mu)).
inline double residual(const GifsSystem& sys, const StarMeasure& mu, DistanceMode mode,
                       int levels = kDefaultLevels, const PsiOptions& opt = {}) {
  return measure_distance(mu, psi(sys, mu, opt), mode, levels);
}

/// Runs mu_{k+1} = Psi(mu_k) from the configured seed until the step
/// distance falls to epsilon. On success the returned measure is the iterate
/// whose residual was measured, so distance(mu*, Psi(mu*)) <= epsilon holds
/// exactly. Exhausting max_iter is reported through `status`, not thrown.
inline SolveResult solve(const GifsSystem& sys, const SolverConfig& cfg) {
  require_valid(sys);
  if (cfg.max_iter < 1) throw DomainError("max_iter must be >= 1");
  if (cfg.levels < 1) throw DomainError("level quantization must be >= 1");
  const double eps = resolved_epsilon(cfg, *sys.space);
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");

  auto contraction = check_contraction(sys, cfg.contraction_samples, cfg.rng_seed);
  IterationTrace trace;
  if (!contraction.contractive) {
    if (!cfg.force) {
      throw ValidationError("system is not contractive on the sampled pairs; use --force to run");
    }
    trace.warnings.push_back("system is not contractive; uniqueness is not guaranteed");
  }

  const MapEvaluator eval(sys);
  PsiOptions opt;
  opt.threads = cfg.threads;
  opt.support_floor = cfg.support_floor;

  StarMeasure mu = seed_measure(sys, cfg);
  SolveResult out{mu, {}, SolveStatus::max_iter, 0.0, eps, 0, std::move(contraction)};
  for (std::size_t k = 0; k < cfg.max_iter; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    StarMeasure next = psi(sys, eval, mu, opt);
    TraceRow row;
    row.step = k;
    row.residual = measure_distance(mu, next, cfg.mode, cfg.levels);
    row.sup_change = distance(mu, next, DistanceMode::sup);
    row.support = next.support(cfg.support_floor).size();
    row.nesting_violation =
        hypograph_excess(*sys.space, next.values(), mu.values(), cfg.levels);
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    trace.rows.push_back(row);
    if (row.residual <= eps) {
      out.measure = std::move(mu);
      out.status = SolveStatus::converged;
      out.residual = row.residual;
      out.iterations = k + 1;
      out.trace = std::move(trace);
      return out;
    }
    mu = std::move(next);
  }
  out.measure = std::move(mu);
  out.residual = trace.rows.back().residual;
  out.iterations = cfg.max_iter;
  out.trace = std::move(trace);
  return out;
}

struct UniquenessReport {
  double max_distance = 0.0;
  double epsilon = 0.0;
  std::vector<SeedStrategy> strategies;
  std::vector<SolveResult> runs;
  std::vector<std::string> warnings;

  bool unique_within_tolerance() const { return max_distance <= 2.0 * epsilon; }
};

/// Solves from several seeds and reports the largest pairwise distance
/// between the limits. Throws ConvergenceError if any run exhausts max_iter.
inline UniquenessReport uniqueness_probe(const GifsSystem& sys, const SolverConfig& cfg,
                                         const std::vector<SeedStrategy>& strategies) {
  if (strategies.size() < 2) throw DomainError("uniqueness_probe needs at least 2 strategies");
  UniquenessReport rep;
  rep.strategies = strategies;
  rep.epsilon = resolved_epsilon(cfg, *sys.space);
  for (auto s : strategies) {
    SolverConfig c = cfg;
    c.seed = s;
    auto r = solve(sys, c);
    if (r.status != SolveStatus::converged) {
      throw ConvergenceError("seed strategy " + std::string(to_string(s)) +
                             " did not converge within max_iter");
    }
    for (const auto& w : r.trace.warnings) {
      if (rep.warnings.empty() || rep.warnings.back() != w) rep.warnings.push_back(w);
    }
    rep.runs.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < rep.runs.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.runs.size(); ++j) {
      rep.max_distance =
          std::max(rep.max_distance, measure_distance(rep.runs[i].measure, rep.runs[j].measure,
                                                      cfg.mode, cfg.levels));
    }
  }
  return rep;
}

}  // namespace starfix
