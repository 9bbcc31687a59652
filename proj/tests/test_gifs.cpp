#include <gtest/gtest.h>

#include <random>

#include "starfix/gifs.hpp"

using namespace starfix;

namespace {

SpacePtr unit_grid(std::size_t dim, std::size_t n) {
  return std::make_shared<const Space>(GridSpace::unit(dim, n));
}

// 1D affine map sum_j a_j x_j + b.
AffineMap affine1(std::vector<double> a, double b) {
  AffineMap f;
  for (double v : a) f.blocks.push_back({v});
  f.offset = {b};
  return f;
}

GifsSystem binary_beta(std::size_t nodes, double beta) {
  GifsSystem s;
  s.space = unit_grid(1, nodes);
  s.arity = 1;
  s.group = PermGroup::trivial(1);
  s.maps = {affine1({0.5}, 0.0), affine1({0.5}, 0.5)};
  s.weights = {1.0, beta};
  s.tnorm = TNorm::minimum();
  return s;
}

GifsSystem sym_pair(std::size_t nodes, TNorm t) {
  GifsSystem s;
  s.space = unit_grid(1, nodes);
  s.arity = 2;
  s.group = PermGroup::symmetric(2);
  s.maps = {affine1({0.25, 0.25}, 0.0), affine1({0.25, 0.25}, 0.5)};
  s.weights = {1.0, 0.5};
  s.tnorm = t;
  return s;
}

GifsSystem single(std::size_t nodes, AffineMap f) {
  GifsSystem s;
  s.space = unit_grid(1, nodes);
  s.arity = f.blocks.size();
  s.group = PermGroup::symmetric(s.arity);
  s.maps = {std::move(f)};
  s.weights = {1.0};
  return s;
}

// Psi by brute force over all of X^m, with no orbit reduction and no support
// pruning. Factors are folded in tuple order.
std::vector<double> brute_psi(const GifsSystem& sys, std::span<const double> u) {
  const std::size_t n = sys.space->size(), m = sys.arity;
  const MapEvaluator eval(sys);
  std::vector<double> out(n, 0.0);
  std::size_t total = 1;
  for (std::size_t j = 0; j < m; ++j) total *= n;
  Tuple x(m);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& v : x) {
      v = c % n;
      c /= n;
    }
    double val = u[x[0]];
    for (std::size_t j = 1; j < m; ++j) val = sys.tnorm.apply(val, u[x[j]]);
    for (std::size_t i = 0; i < sys.maps.size(); ++i) {
      const PointId y = eval.image(i, x);
      out[y] = std::max(out[y], sys.tnorm.apply(sys.weights[i], val));
    }
  }
  return out;
}

std::vector<double> random_density(std::mt19937_64& rng, std::size_t n, int q) {
  std::uniform_int_distribution<int> lvl(0, q);
  std::vector<double> v(n);
  for (auto& x : v) x = lvl(rng) / double(q);
  v[rng() % n] = 1.0;
  return v;
}

}  // namespace

TEST(Validate, Weights) {
  auto s = binary_beta(9, 0.5);
  EXPECT_TRUE(validate(s).ok());
  s.weights = {0.9, 0.5};
  const auto r = validate(s);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0], "max weight must equal 1");
  s.weights = {1.0};
  EXPECT_FALSE(validate(s).ok());
  s.weights = {1.0, 1.5};
  EXPECT_FALSE(validate(s).ok());
  EXPECT_THROW(require_valid(s), ValidationError);
}

TEST(Validate, GroupInvarianceOfAffineBlocks) {
  auto s = sym_pair(9, TNorm::product());
  EXPECT_TRUE(validate(s).ok());
  s.maps[0] = affine1({0.25, 0.2}, 0.0);
  const auto r = validate(s);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations[0].find("not G-invariant"), std::string::npos);
  s.group = PermGroup::trivial(2);  // no symmetry required
  EXPECT_TRUE(validate(s).ok());
}

TEST(Validate, RangeAndShape) {
  auto s = binary_beta(9, 0.5);
  s.maps[1] = affine1({0.5}, 0.6);  // image [0.6, 1.1]
  EXPECT_FALSE(validate(s).ok());
  s.maps[1] = affine1({-0.5}, 0.5);  // image [0, 0.5]
  EXPECT_TRUE(validate(s).ok());
  s.maps[1] = affine1({0.5, 0.5}, 0.0);
  EXPECT_FALSE(validate(s).ok());
  s.arity = 2;  // group arity no longer matches
  EXPECT_FALSE(validate(s).ok());
  auto t = binary_beta(9, 0.5);
  t.maps[0] = TableMap{{0, 1, 2, 3, 4, 5, 6, 7, 8}};
  EXPECT_FALSE(validate(t).ok()) << "table map on a grid";
}

TEST(Validate, TableMaps) {
  GifsSystem s;
  s.space = std::make_shared<const Space>(TableSpace({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
  s.arity = 2;
  s.group = PermGroup::symmetric(2);
  // max(i,j) - 1 clamped at 0: symmetric
  TableMap f;
  for (PointId i = 0; i < 3; ++i) {
    for (PointId j = 0; j < 3; ++j) f.image.push_back(std::max(i, j) == 0 ? 0 : std::max(i, j) - 1);
  }
  s.maps = {f};
  s.weights = {1.0};
  EXPECT_TRUE(validate(s).ok());
  // first coordinate only: not S2-invariant
  TableMap g;
  for (PointId i = 0; i < 3; ++i) {
    for (PointId j = 0; j < 3; ++j) g.image.push_back(i);
  }
  s.maps = {g};
  EXPECT_FALSE(validate(s).ok());
  s.group = PermGroup::trivial(2);
  EXPECT_TRUE(validate(s).ok());
  s.maps = {TableMap{{0, 1, 2}}};
  EXPECT_FALSE(validate(s).ok());
  s.maps = {TableMap{{0, 1, 2, 0, 1, 2, 0, 1, 7}}};
  EXPECT_FALSE(validate(s).ok());
}

TEST(Psi, IdentitySystem) {
  const auto s = single(17, affine1({1.0}, 0.0));
  std::mt19937_64 rng(1);
  for (int it = 0; it < 20; ++it) {
    const StarMeasure mu(s.space, random_density(rng, 17, 8));
    EXPECT_EQ(psi(s, mu), mu);
  }
}

TEST(Psi, DiracUnderAveragingMap) {
  const auto s = single(33, affine1({0.25, 0.25}, 0.0));
  EXPECT_EQ(psi(s, dirac(s.space, 0)), dirac(s.space, 0));
  // A single map with alpha = 1 sends dirac(x) to dirac(snap(g(x,...,x))).
  for (PointId x = 0; x < 33; ++x) {
    const Tuple diag(2, x);
    const PointId y = MapEvaluator(s).image(0, diag);
    EXPECT_EQ(psi(s, dirac(s.space, x)), dirac(s.space, y));
  }
}

TEST(Psi, BinaryBetaFixedPoint) {
  const auto s = binary_beta(1025, 0.5);
  std::vector<double> u(1025, 0.5);
  u[0] = 1.0;
  const StarMeasure mu(s.space, u);
  EXPECT_EQ(psi(s, mu), mu);
}

TEST(Psi, MatchesBruteForce) {
  std::mt19937_64 rng(42);
  for (auto t : {TNorm::minimum(), TNorm::lukasiewicz(), TNorm::product()}) {
    const std::vector<GifsSystem> systems = {binary_beta(33, 0.25), sym_pair(33, t)};
    for (auto sys : systems) {
      sys.tnorm = t;
      for (int it = 0; it < 10; ++it) {
        const auto u = random_density(rng, 33, 16);
        const auto got = psi(sys, StarMeasure(sys.space, u));
        const auto want = brute_psi(sys, u);
        for (PointId p = 0; p < 33; ++p) {
          if (t.kind() == TNormKind::product) {
            ASSERT_NEAR(got[p], want[p], 1e-12);
          } else {
            ASSERT_EQ(got[p], want[p]);
          }
        }
      }
    }
  }
}

TEST(Psi, NormalAndMonotone) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto t : {TNorm::minimum(), TNorm::lukasiewicz(), TNorm::product()}) {
    const auto sys = sym_pair(65, t);
    for (int it = 0; it < 20; ++it) {
      auto lo = random_density(rng, 65, 32);
      auto hi = lo;
      for (auto& v : hi) v = std::min(1.0, v + unit(rng) * 0.3);
      const auto a = psi(sys, StarMeasure(sys.space, lo));
      const auto b = psi(sys, StarMeasure(sys.space, hi));
      EXPECT_EQ(*std::max_element(a.values().begin(), a.values().end()), 1.0);
      for (PointId p = 0; p < 65; ++p) ASSERT_LE(a[p], b[p]);
    }
  }
}

// Enumerating H-orbits and projecting through pi_HG gives the same Psi as
// enumerating G-orbits directly, bit for bit.
TEST(Psi, SubgroupEnumerationIsBitIdentical) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto t : {TNorm::minimum(), TNorm::lukasiewicz(), TNorm::product()}) {
    const auto sys = sym_pair(33, t);
    const auto e2 = PermGroup::trivial(2);
    PsiOptions via_h;
    via_h.enumeration_group = &e2;

    GifsSystem s3;
    s3.space = unit_grid(1, 17);
    s3.arity = 3;
    s3.group = PermGroup::symmetric(3);
    s3.maps = {affine1({0.2, 0.2, 0.2}, 0.1), affine1({0.1, 0.1, 0.1}, 0.5)};
    s3.weights = {0.7, 1.0};
    s3.tnorm = t;
    const auto e3 = PermGroup::trivial(3), c3 = PermGroup::cyclic(3);
    PsiOptions via_e3, via_c3;
    via_e3.enumeration_group = &e3;
    via_c3.enumeration_group = &c3;

    for (int it = 0; it < 10; ++it) {
      std::vector<double> u(33);
      for (auto& v : u) v = unit(rng);
      u[rng() % 33] = 1.0;
      const StarMeasure mu(sys.space, u);
      EXPECT_EQ(psi(sys, mu), psi(sys, mu, via_h));

      std::vector<double> w(17);
      for (auto& v : w) v = unit(rng);
      w[rng() % 17] = 1.0;
      const StarMeasure nu(s3.space, w);
      const auto direct = psi(s3, nu);
      EXPECT_EQ(direct, psi(s3, nu, via_e3));
      EXPECT_EQ(direct, psi(s3, nu, via_c3));
    }
  }
  const auto sys = sym_pair(9, TNorm::minimum());
  const auto c2 = PermGroup::trivial(3);
  PsiOptions bad;
  bad.enumeration_group = &c2;
  EXPECT_THROW(psi(sys, full_measure(sys.space), bad), DomainError);
}

TEST(Psi, DeterministicAcrossThreads) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GifsSystem sys;
  sys.space = unit_grid(2, 24);
  sys.arity = 2;
  sys.group = PermGroup::symmetric(2);
  auto quarter = [](double bx, double by) {
    AffineMap f;
    f.blocks = {{0.25, 0, 0, 0.25}, {0.25, 0, 0, 0.25}};
    f.offset = {bx, by};
    return f;
  };
  sys.maps = {quarter(0, 0), quarter(0.5, 0), quarter(0.25, 0.5)};
  sys.weights = {1.0, 0.8, 0.6};
  sys.tnorm = TNorm::product();
  std::vector<double> u(sys.space->size());
  for (auto& v : u) v = unit(rng);
  u[5] = 1.0;
  const StarMeasure mu(sys.space, u);
  PsiOptions one;
  const auto ref = psi(sys, mu, one);
  for (std::size_t th : {2, 3, 8, 64}) {
    PsiOptions many;
    many.threads = th;
    EXPECT_EQ(psi(sys, mu, many), ref) << th << " threads";
  }
}

TEST(Psi, MapRangeErrorIsReported) {
  // Passes validation only without the range check; build it by hand.
  auto s = binary_beta(9, 0.5);
  s.maps[1] = affine1({0.5}, 0.75);
  const MapEvaluator eval(s);
  const Tuple x = {8};
  try {
    eval.image(1, x);
    FAIL() << "expected MapRangeError";
  } catch (const MapRangeError& e) {
    EXPECT_NE(std::string(e.what()).find("map 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(8)"), std::string::npos);
  }
}

TEST(Hutchinson, Examples) {
  const auto s = binary_beta(5, 0.5);  // nodes 0, .25, .5, .75, 1
  EXPECT_EQ(hutchinson_step(s, std::vector<PointId>{0}), (std::vector<PointId>{0, 2}));
  const auto c = single(5, affine1({0.0}, 0.75));
  EXPECT_EQ(hutchinson_step(c, std::vector<PointId>{0, 1, 4}), (std::vector<PointId>{3}));
  const auto a = attractor_set(s);
  EXPECT_EQ(hutchinson_step(s, a), a);
  EXPECT_THROW(hutchinson_step(s, std::vector<PointId>{}), DomainError);
}

TEST(Attractor, Examples) {
  const auto b = binary_beta(1025, 0.5);
  EXPECT_EQ(attractor_set(b).size(), 1025u);
  EXPECT_EQ(attractor_set(single(1025, affine1({0.5}, 0.0))), (std::vector<PointId>{0}));
  EXPECT_EQ(attractor_set(single(33, affine1({1.0}, 0.0))).size(), 33u);
  // (x+y)/4 and (x+y)/4 + 1/2 on [0,1]: the attractor is the whole interval
  // up to snapping.
  const auto sp = sym_pair(257, TNorm::product());
  const auto a = attractor_set(sp);
  std::vector<PointId> all(257);
  for (PointId p = 0; p < 257; ++p) all[p] = p;
  EXPECT_LE(hausdorff(*sp.space, a, all), 2 * sp.space->cell());
  EXPECT_THROW(attractor_set(single(1025, affine1({0.5}, 0.0)), 2), ConvergenceError);
}

TEST(Contraction, Halving) {
  const auto s = single(1025, affine1({0.5}, 0.0));
  const auto r = check_contraction(s, 2000, 7);
  EXPECT_TRUE(r.contractive);
  EXPECT_EQ(r.verdict(), "no violation found among 2000 pairs");
  ASSERT_EQ(r.maps.size(), 1u);
  EXPECT_GE(r.maps[0].ladder.size(), 10u);
  for (const auto& rung : r.maps[0].ladder) {
    if (!rung.alpha) continue;
    EXPECT_GE(*rung.alpha, 0.45);
    EXPECT_LE(*rung.alpha, 0.55);
  }
}

TEST(Contraction, IdentityIsFlagged) {
  const auto s = single(65, affine1({1.0}, 0.0));
  const auto r = check_contraction(s, 500, 7);
  EXPECT_FALSE(r.contractive);
  EXPECT_EQ(r.verdict(), "not contractive");
  for (const auto& rung : r.maps[0].ladder) {
    if (rung.alpha) EXPECT_EQ(*rung.alpha, 1.0);
  }
}

TEST(Contraction, AveragingPair) {
  const auto s = single(257, affine1({0.25, 0.25}, 0.0));
  const auto r = check_contraction(s, 3000, 3);
  EXPECT_TRUE(r.contractive);
  const auto& ladder = r.maps[0].ladder;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!ladder[k].alpha) continue;
    EXPECT_LE(*ladder[k].alpha, 0.5 + 1e-12);
    // alpha(t) is nonincreasing in t; the ladder runs from large t to small.
    if (k > 0 && ladder[k - 1].alpha) EXPECT_LE(*ladder[k - 1].alpha, *ladder[k].alpha);
  }
}

TEST(Contraction, DeterministicInSeed) {
  const auto s = sym_pair(129, TNorm::product());
  const auto a = check_contraction(s, 800, 11);
  const auto b = check_contraction(s, 800, 11);
  ASSERT_EQ(a.maps.size(), b.maps.size());
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    for (std::size_t k = 0; k < a.maps[i].ladder.size(); ++k) {
      EXPECT_EQ(a.maps[i].ladder[k].alpha, b.maps[i].ladder[k].alpha);
      EXPECT_EQ(a.maps[i].ladder[k].pairs, b.maps[i].ladder[k].pairs);
    }
  }
  EXPECT_THROW(check_contraction(s, 1, 11), DomainError);
}
