#pragma once

// Subcommand orchestration behind the command-line tool.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "starfix/errors.hpp"
#include "starfix/fixpoint.hpp"
#include "starfix/gifs.hpp"
#include "starfix/io/config.hpp"
#include "starfix/io/output.hpp"
#include "starfix/oracle.hpp"

namespace starfix::io {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // oracle violation or internal error
  kExitValidation = 2,
  kExitNoConvergence = 3,
  kExitIo = 4,
};

struct RunOptions {
  std::string command;
  std::string config;
  std::string out = ".";
  std::optional<std::size_t> threads;
  bool force = false;
  std::optional<std::uint64_t> seed;
  std::string suite = "all";
  std::string measure;
};

/// --threads, then STARFIX_THREADS, then the hardware concurrency.
inline std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("STARFIX_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

struct OracleEntry {
  std::string suite;
  std::string label;
  std::function<oracle::LawReport()> run;
};

inline std::vector<OracleEntry> oracle_entries(const std::string& suite) {
  using namespace oracle;
  const std::vector<TNorm> lattice = {TNorm::minimum(), TNorm::lukasiewicz()};
  std::vector<OracleEntry> e;
  const bool all = suite == "all";
  auto tag = [](const std::string& what, std::size_t n, int q, TNorm t) {
    return what + " |X|=" + std::to_string(n) + " q=" + std::to_string(q) + " " +
           std::string(t.name());
  };
  if (all || suite == "laws") {
    for (auto t : lattice) {
      for (std::size_t n : {1, 2}) {
        for (int q : {1, 2}) {
          e.push_back({"laws", tag("monad", n, q, t), [=] { return check_monad_laws(n, q, t); }});
        }
      }
      e.push_back({"laws", tag("monad", 3, 1, t), [=] { return check_monad_laws(3, 1, t); }});
    }
    e.push_back({"laws", "product rational spot", [] { return check_product_spot(); }});
  }
  if (all || suite == "iso") {
    for (auto t : lattice) {
      for (std::size_t n : {1, 2, 3}) {
        for (int q : {1, 2}) {
          e.push_back({"iso", tag("iso", n, q, t), [=] { return check_isomorphism(n, q, t); }});
        }
      }
    }
  }
  if (all || suite == "tensor") {
    for (auto t : lattice) {
      for (std::size_t nx : {1, 2}) {
        for (std::size_t ny : {1, 2}) {
          e.push_back({"tensor",
                       "tensor |X|=" + std::to_string(nx) + " |Y|=" + std::to_string(ny) +
                           " q=2 " + std::string(t.name()),
                       [=] { return check_tensor(nx, ny, 2, t); }});
        }
      }
    }
    e.push_back({"tensor", "product rational spot", [] { return check_product_spot(); }});
  }
  if (all || suite == "projection") {
    struct Case {
      std::string name;
      PermGroup h, g;
      int q;
    };
    const auto s2 = PermGroup::symmetric(2);
    const auto s3 = PermGroup::symmetric(3);
    const auto c3 = PermGroup::cyclic(3);
    const auto t12 = PermGroup::generated(3, {Permutation{1, 0, 2}});
    const std::vector<Case> cases = {
        {"H={e} G=S2", PermGroup::trivial(2), s2, 2},
        {"H=G=S2", s2, s2, 2},
        {"H={e} G=S3", PermGroup::trivial(3), s3, 1},
        {"H={e} G=C3", PermGroup::trivial(3), c3, 1},
        {"H=C3 G=S3", c3, s3, 1},
        {"H=<(12)> G=S3", t12, s3, 1},
    };
    for (auto t : lattice) {
      for (const auto& c : cases) {
        e.push_back({"projection",
                     "projection " + c.name + " |X|=2 q=" + std::to_string(c.q) + " " +
                         std::string(t.name()),
                     [=] { return check_projection_compat(2, c.h, c.g, c.q, t); }});
      }
    }
  }
  if (e.empty()) throw ConfigError("unknown oracle suite '" + suite + "'");
  return e;
}

/// Runs the suite's checks on up to `threads` workers. The report lists the
/// checks in a fixed order whatever the worker count.
inline json run_oracle(const std::string& suite, std::size_t threads) {
  const auto entries = oracle_entries(suite);
  std::vector<oracle::LawReport> reports(entries.size());
  std::vector<std::exception_ptr> errors(entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        reports[i] = entries[i].run();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < std::min(threads, entries.size()); ++w) pool.emplace_back(work);
    work();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  json checks = json::array();
  std::size_t instances = 0, violations = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    instances += reports[i].instances;
    violations += reports[i].violations;
    checks.push_back({{"suite", entries[i].suite},
                      {"check", entries[i].label},
                      {"instances", reports[i].instances},
                      {"violations", reports[i].violations},
                      {"samples", reports[i].samples}});
  }
  return {{"engine_version", kEngineVersion},
          {"suite", suite},
          {"instances", instances},
          {"violations", violations},
          {"checks", checks}};
}

namespace detail {

inline RunConfig load_for(const RunOptions& opt) {
  if (opt.config.empty()) throw ConfigError("--config is required for '" + opt.command + "'");
  RunConfig rc = load_config(opt.config);
  if (opt.seed) {
    rc.seed = *opt.seed;
    rc.solver.rng_seed = *opt.seed;
  }
  rc.solver.threads = resolve_threads(opt.threads);
  rc.solver.force = opt.force;
  return rc;
}

inline std::filesystem::path out_dir(const RunOptions& opt) {
  std::filesystem::path dir(opt.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

inline bool renders(const RunConfig& rc) {
  const auto* g = rc.system.space->grid();
  return g && (g->dim() == 2 || (g->dim() == 1 && rc.strip_1d));
}

inline int solve(const RunOptions& opt, std::ostream& out) {
  const RunConfig rc = load_for(opt);
  const auto dir = out_dir(opt);
  const SolveResult r = starfix::solve(rc.system, rc.solver);
  write_file(dir / "measure.csv", [&](std::ostream& os) { write_csv(os, r.measure.values()); });
  write_file(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, r.trace); });
  write_file(dir / "report.json",
             [&](std::ostream& os) { os << solve_report(rc, r).dump(2) << '\n'; });
  if (renders(rc)) render_pgm(r.measure, dir / "render.pgm");
  for (const auto& w : r.trace.warnings) out << "warning: " << w << '\n';
  const bool ok = r.status == SolveStatus::converged;
  out << (ok ? "converged" : "max_iter reached") << " after " << r.iterations
      << " iterations, residual " << fmt17(r.residual) << " (epsilon " << fmt17(r.epsilon)
      << ")\n";
  return ok ? kExitOk : kExitNoConvergence;
}

inline int check(const RunOptions& opt, std::ostream& out) {
  const RunConfig rc = load_for(opt);
  const auto rep = check_contraction(rc.system, rc.solver.contraction_samples, rc.seed);
  const json j = {{"engine_version", kEngineVersion},
                  {"validation", validation_json(validate(rc.system))},
                  {"contraction", contraction_json(rep)}};
  out << j.dump(2) << '\n';
  if (opt.out != ".") {
    write_file(out_dir(opt) / "check.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }
  return kExitOk;
}

inline int attractor(const RunOptions& opt, std::ostream& out) {
  const RunConfig rc = load_for(opt);
  const auto dir = out_dir(opt);
  const auto a = attractor_set(rc.system, rc.solver.attractor_max_iter, 0.0, rc.solver.threads);
  write_file(dir / "attractor.csv",
             [&](std::ostream& os) { write_attractor_csv(os, *rc.system.space, a); });
  out << a.size() << " attractor points\n";
  return kExitOk;
}

inline int render(const RunOptions& opt, std::ostream& out) {
  const RunConfig rc = load_for(opt);
  if (opt.measure.empty()) throw ConfigError("--measure is required for 'render'");
  std::ifstream in(opt.measure);
  if (!in) throw IoError("cannot read measure file '" + opt.measure + "'");
  const StarMeasure mu = read_csv(in, rc.system.space);
  const auto path = out_dir(opt) / "render.pgm";
  render_pgm(mu, path);
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

inline int run_oracle_cmd(const RunOptions& opt, std::ostream& out) {
  const json rep = run_oracle(opt.suite, resolve_threads(opt.threads));
  out << rep.dump(2) << '\n';
  if (opt.out != ".") {
    write_file(out_dir(opt) / "oracle.json", [&](std::ostream& os) { os << rep.dump(2) << '\n'; });
  }
  return rep["violations"].get<std::size_t>() == 0 ? kExitOk : kExitFailure;
}

}  // namespace detail

/// Runs one subcommand, mapping errors onto exit codes.
inline int run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.command == "solve") return detail::solve(opt, out);
    if (opt.command == "check") return detail::check(opt, out);
    if (opt.command == "attractor") return detail::attractor(opt, out);
    if (opt.command == "render") return detail::render(opt, out);
    if (opt.command == "oracle") return detail::run_oracle_cmd(opt, out);
    err << "unknown command '" << opt.command << "'\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const MapRangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace starfix::io
