#pragma once

// Artifact writers. Column names and report keys are listed in README.md and
// should be treated as frozen.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "starfix/errors.hpp"
#include "starfix/fixpoint.hpp"
#include "starfix/gifs.hpp"
#include "starfix/io/config.hpp"
#include "starfix/measure.hpp"

namespace starfix::io {

inline constexpr const char* kEngineVersion = "0.1.0";

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "step,residual,sup_change,support,nesting_violation,wall_ms\n";
  char ms[32];
  for (const auto& r : trace.rows) {
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    os << r.step << ',' << fmt17(r.residual) << ',' << fmt17(r.sup_change) << ',' << r.support
       << ',' << fmt17(r.nesting_violation) << ',' << ms << '\n';
  }
}

/// One row per attractor point; coordinates for grid spaces.
inline void write_attractor_csv(std::ostream& os, const Space& space,
                                std::span<const PointId> points) {
  const auto* g = space.grid();
  os << "point_index";
  if (g) {
    for (std::size_t a = 0; a < g->dim(); ++a) os << ",x" << a;
  }
  os << '\n';
  for (PointId p : points) {
    os << p;
    if (g) {
      for (double c : g->coords(p)) os << ',' << fmt17(c);
    }
    os << '\n';
  }
}

// 255*u rounded half away from zero.
inline std::uint8_t pixel(double u) {
  return static_cast<std::uint8_t>(std::lround(255.0 * u));
}

struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bytes;  // row 0 first
};

/// 2D grids: width = x nodes, height = y nodes, row 0 at the top of the box.
/// 1D grids give a 1-pixel-high strip.
inline Raster raster(std::span<const double> u, const Space& space) {
  const auto* g = space.grid();
  if (!g || g->dim() > 2) throw DomainError("rendering needs a 1D or 2D grid space");
  if (u.size() != g->size()) throw DomainError("density size does not match the grid");
  Raster r;
  r.width = g->resolution()[0];
  r.height = g->dim() == 2 ? g->resolution()[1] : 1;
  r.bytes.resize(r.width * r.height);
  for (std::size_t row = 0; row < r.height; ++row) {
    const std::size_t iy = r.height - 1 - row;
    for (std::size_t ix = 0; ix < r.width; ++ix) {
      r.bytes[row * r.width + ix] = pixel(u[iy * r.width + ix]);
    }
  }
  return r;
}

inline void write_pgm(std::ostream& os, const Raster& r) {
  os << "P5\n" << r.width << ' ' << r.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(r.bytes.data()),
           static_cast<std::streamsize>(r.bytes.size()));
}

inline void render_pgm(const StarMeasure& mu, const std::filesystem::path& path) {
  const Raster r = raster(mu.values(), *mu.space());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_pgm(out, r);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline json validation_json(const ValidationReport& v) {
  return {{"ok", v.ok()}, {"violations", v.violations}};
}

inline json contraction_json(const ContractionReport& c) {
  json maps = json::array();
  for (const auto& m : c.maps) {
    json ladder = json::array();
    for (const auto& r : m.ladder) {
      ladder.push_back({{"threshold", r.threshold},
                        {"alpha", r.alpha ? json(*r.alpha) : json(nullptr)},
                        {"pairs", r.pairs}});
    }
    maps.push_back({{"contractive", m.contractive}, {"ladder", ladder}});
  }
  return {{"samples", c.samples},
          {"contractive", c.contractive},
          {"verdict", c.verdict()},
          {"maps", maps}};
}

// No timings here: the report must be reproducible byte for byte. Per-step
// wall times go to trace.csv.
inline json solve_report(const RunConfig& rc, const SolveResult& r) {
  return {{"engine_version", kEngineVersion},
          {"config", rc.echo},
          {"validation", validation_json(validate(rc.system))},
          {"contraction", contraction_json(r.contraction)},
          {"status", r.status == SolveStatus::converged ? "converged" : "max_iter"},
          {"iterations", r.iterations},
          {"final_residual", r.residual},
          {"epsilon", r.epsilon},
          {"mode", std::string(to_string(rc.solver.mode))},
          {"levels", rc.solver.levels},
          {"seed_strategy", std::string(to_string(rc.solver.seed))},
          {"seed", rc.seed},
          {"support_size", r.measure.support(rc.solver.support_floor).size()},
          {"warnings", r.trace.warnings}};
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& w, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  w(out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace starfix::io
