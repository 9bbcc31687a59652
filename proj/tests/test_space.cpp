#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "starfix/space.hpp"

using namespace starfix;

TEST(GridSpace, Distances) {
  const Space line(GridSpace::unit(1, 5));
  EXPECT_EQ(distance(line, 0, 4), 1.0);
  for (PointId p = 0; p < 5; ++p) EXPECT_EQ(distance(line, p, p), 0.0);
  EXPECT_EQ(diameter(line), 1.0);

  const GridSpace sq = GridSpace::unit(2, 5);
  const std::size_t a[] = {0, 0}, b[] = {2, 1};  // (0,0) and (0.5,0.25)
  EXPECT_EQ(sq.distance(sq.index_of(a), sq.index_of(b)), 0.5);
  EXPECT_NEAR(GridSpace::unit(2, 3, GridMetric::euclidean).diameter(), std::sqrt(2.0), 1e-12);
  EXPECT_THROW(line.distance(0, 5), DomainError);
}

TEST(GridSpace, Layout) {
  const GridSpace g({{0, 2}, {-1, 1}}, {3, 5});
  EXPECT_EQ(g.size(), 15u);
  const std::size_t m[] = {2, 3};
  const PointId p = g.index_of(m);
  EXPECT_EQ(p, 2u + 3u * 3u);
  EXPECT_EQ(g.axis_index(p, 0), 2u);
  EXPECT_EQ(g.axis_index(p, 1), 3u);
  EXPECT_EQ(g.coords(p), (std::vector<double>{2.0, 0.5}));
  EXPECT_NEAR(g.cell(), 1.0, 1e-15);
  EXPECT_THROW(GridSpace({{0, 1}}, {1}), DomainError);
  EXPECT_THROW(GridSpace({{1, 0}}, {3}), DomainError);
  EXPECT_THROW(GridSpace({{0, 1}}, {3, 3}), DomainError);
}

TEST(GridSpace, Snap) {
  const GridSpace g = GridSpace::unit(1, 5);
  auto snap1 = [&](double x) { return g.coords(g.snap(std::vector<double>{x}))[0]; };
  EXPECT_EQ(snap1(0.3), 0.25);
  EXPECT_EQ(snap1(0.375), 0.25);  // tie goes to the lower index
  EXPECT_EQ(snap1(0.376), 0.5);
  EXPECT_EQ(snap1(1.0 + 5e-10), 1.0);
  EXPECT_EQ(snap1(-5e-10), 0.0);
  EXPECT_THROW(g.snap(std::vector<double>{1.2}), MapRangeError);
  EXPECT_THROW(g.snap(std::vector<double>{-1e-6}), MapRangeError);
  EXPECT_FALSE(g.try_snap(std::vector<double>{0.5, 0.5}).has_value());
}

TEST(GridSpace, SnapIsNearest) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpace g = GridSpace::unit(2, 17);
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> x = {u(rng), u(rng)};
    const PointId s = g.snap(x);
    const double ds = g.coord_distance(g.coords(s), x);
    for (PointId p = 0; p < g.size(); ++p) ASSERT_LE(ds, g.coord_distance(g.coords(p), x) + 1e-15);
  }
}

TEST(TableSpace, Validation) {
  EXPECT_NO_THROW(TableSpace({{0, 1}, {1, 0}}));
  EXPECT_THROW(TableSpace({{0, 1}, {2, 0}}), DomainError);
  EXPECT_THROW(TableSpace({{0, 0}, {0, 0}}), DomainError);
  EXPECT_THROW(TableSpace({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), DomainError);
  EXPECT_THROW(TableSpace({{0, -1}, {-1, 0}}), DomainError);
  EXPECT_THROW(TableSpace(std::vector<std::vector<double>>{{0, 1}}), DomainError);
  EXPECT_THROW(TableSpace(std::vector<std::vector<double>>{}), DomainError);
  const Space one(TableSpace(std::vector<std::vector<double>>{{0}}));
  EXPECT_EQ(diameter(one), 0.0);
  const Space three(TableSpace({{0, 1, 3}, {1, 0, 2}, {3, 2, 0}}));
  EXPECT_EQ(diameter(three), 3.0);
  EXPECT_EQ(three.cell(), 1.0);
}

TEST(PowerDistance, Examples) {
  const Space line(GridSpace::unit(1, 3));  // 0, 0.5, 1
  EXPECT_EQ(power_distance(line, Tuple{0, 0}, Tuple{2, 1}), 1.0);
  EXPECT_EQ(power_distance(line, Tuple{0, 1}, Tuple{0, 1}), 0.0);
  EXPECT_THROW(power_distance(line, Tuple{0, 1}, Tuple{0}), DomainError);
  const Space t(TableSpace({{0, 0.1, 0.7, 0.3}, {0.1, 0, 0.7, 0.3}, {0.7, 0.7, 0, 0.7},
                            {0.3, 0.3, 0.7, 0}}));
  EXPECT_EQ(power_distance(t, Tuple{0, 1, 0}, Tuple{1, 2, 3}), 0.7);
}

TEST(SymDistance, Examples) {
  const Space line(GridSpace::unit(1, 3));
  const auto s2 = PermGroup::symmetric(2);
  EXPECT_EQ(sym_distance(line, s2, Tuple{0, 2}, Tuple{2, 0}), 0.0);
  EXPECT_EQ(sym_distance(line, s2, Tuple{0, 1}, Tuple{1, 2}), 0.5);
  const auto e = PermGroup::trivial(2);
  EXPECT_EQ(sym_distance(line, e, Tuple{0, 2}, Tuple{2, 0}),
            power_distance(line, Tuple{0, 2}, Tuple{2, 0}));
  EXPECT_THROW(sym_distance(line, s2, Tuple{0, 1, 2}, Tuple{0, 1, 2}), DomainError);
}

namespace {

std::vector<Tuple> all_tuples(std::size_t n, std::size_t m) {
  std::vector<Tuple> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    Tuple x(m);
    std::size_t c = code;
    for (auto& v : x) {
      v = c % n;
      c /= n;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

// d^ is a metric on orbit representatives: exhaustive on small instances.
TEST(SymDistance, MetricAxiomsExhaustive) {
  const Space table(TableSpace({{0, 1, 3, 4}, {1, 0, 2, 3}, {3, 2, 0, 1.5}, {4, 3, 1.5, 0}}));
  const Space grid(GridSpace::unit(1, 4));
  for (const Space* s : {&table, &grid}) {
    for (std::size_t m : {2, 3}) {
      for (const auto& g : {PermGroup::trivial(m), PermGroup::symmetric(m), PermGroup::cyclic(m)}) {
        std::vector<Tuple> reps;
        for (const auto& x : all_tuples(s->size(), m)) {
          if (is_orbit_rep(g, x)) reps.push_back(x);
        }
        for (const auto& a : reps) {
          for (const auto& b : reps) {
            const double dab = sym_distance(*s, g, a, b);
            ASSERT_EQ(dab, sym_distance(*s, g, b, a));
            ASSERT_EQ(dab == 0.0, a == b);
            for (const auto& c : reps) {
              ASSERT_LE(dab, sym_distance(*s, g, a, c) + sym_distance(*s, g, c, b) + 1e-12);
            }
          }
        }
      }
    }
  }
}

// pi_HG does not expand distances.
TEST(SymDistance, ProjectionNonexpanding) {
  const Space grid(GridSpace::unit(1, 5));
  struct Pair {
    PermGroup h, g;
  };
  const std::vector<Pair> pairs = {
      {PermGroup::trivial(2), PermGroup::symmetric(2)},
      {PermGroup::trivial(3), PermGroup::symmetric(3)},
      {PermGroup::cyclic(3), PermGroup::symmetric(3)},
      {PermGroup::trivial(3), PermGroup::cyclic(3)},
      {PermGroup::generated(3, {Permutation{1, 0, 2}}), PermGroup::symmetric(3)}};
  for (const auto& [h, g] : pairs) {
    const auto tuples = all_tuples(grid.size(), h.arity());
    for (const auto& a : tuples) {
      if (!is_orbit_rep(h, a)) continue;
      for (const auto& b : tuples) {
        if (!is_orbit_rep(h, b)) continue;
        ASSERT_LE(sym_distance(grid, g, project_hg(h, g, a), project_hg(h, g, b)),
                  sym_distance(grid, h, a, b));
      }
    }
  }
}

TEST(Hausdorff, Examples) {
  const Space line(GridSpace::unit(1, 5));  // 0, .25, .5, .75, 1
  EXPECT_EQ(hausdorff(line, std::vector<PointId>{0}, std::vector<PointId>{0, 4}), 1.0);
  EXPECT_EQ(hausdorff(line, std::vector<PointId>{1, 3}, std::vector<PointId>{3, 1}), 0.0);
  EXPECT_EQ(hausdorff(line, std::vector<PointId>{1}, std::vector<PointId>{2}), 0.25);
  EXPECT_THROW(hausdorff(line, std::vector<PointId>{}, std::vector<PointId>{2}), DomainError);
}

TEST(Hausdorff, SymmetricAndZeroIffEqual) {
  const Space grid(GridSpace::unit(2, 4));
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.3);
  for (int it = 0; it < 300; ++it) {
    std::vector<PointId> a, b;
    for (PointId p = 0; p < grid.size(); ++p) {
      if (coin(rng)) a.push_back(p);
      if (coin(rng)) b.push_back(p);
    }
    if (a.empty() || b.empty()) continue;
    const double d = hausdorff(grid, a, b);
    EXPECT_EQ(d, hausdorff(grid, b, a));
    EXPECT_EQ(d == 0.0, a == b);
  }
}

// For A, B in X x Y with the same Y-projection, d_H(A,B) <= diam X under the
// sup metric on the product.
TEST(Hausdorff, ProductProjectionBound) {
  const GridSpace x = GridSpace::unit(1, 9);
  const Space y(TableSpace({{0, 2, 5}, {2, 0, 4}, {5, 4, 0}}));
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<PointId> px(0, x.size() - 1), py(0, 2);
  using P = std::pair<PointId, PointId>;
  auto d = [&](const P& a, const P& b) {
    return std::max(x.distance(a.first, b.first), y.distance(a.second, b.second));
  };
  std::size_t violations = 0;
  for (int it = 0; it < 1000; ++it) {
    std::set<PointId> ys;
    std::uniform_int_distribution<int> k(1, 3);
    for (int i = k(rng); i > 0; --i) ys.insert(py(rng));
    std::vector<P> a, b;
    for (PointId v : ys) {
      std::uniform_int_distribution<int> c(1, 4);
      for (int i = c(rng); i > 0; --i) a.push_back({px(rng), v});
      for (int i = c(rng); i > 0; --i) b.push_back({px(rng), v});
    }
    if (hausdorff<P>(a, b, d) > x.diameter()) ++violations;
  }
  EXPECT_EQ(violations, 0u);
}
