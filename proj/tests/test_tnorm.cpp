#include <gtest/gtest.h>

#include <vector>

#include "starfix/tnorm.hpp"

using namespace starfix;

namespace {

const TNorm kAll[] = {TNorm::product(), TNorm::minimum(), TNorm::lukasiewicz()};

}  // namespace

TEST(TNorm, ClosedForms) {
  EXPECT_DOUBLE_EQ(eval(TNorm::product(), 0.5, 0.4), 0.2);
  EXPECT_NEAR(eval(TNorm::lukasiewicz(), 0.7, 0.5), 0.2, 1e-15);
  EXPECT_EQ(eval(TNorm::minimum(), 0.3, 0.9), 0.3);
  for (auto t : kAll) {
    for (double a : {0.0, 0.13, 0.5, 0.999, 1.0}) EXPECT_EQ(eval(t, a, 1.0), a) << t.name();
  }
}

TEST(TNorm, RejectsOutOfRange) {
  for (auto t : kAll) {
    EXPECT_THROW(eval(t, -0.1, 0.5), DomainError);
    EXPECT_THROW(eval(t, 0.5, 1.5), DomainError);
  }
}

TEST(TNorm, Names) {
  EXPECT_EQ(TNorm::from_name("product"), TNorm::product());
  EXPECT_EQ(TNorm::from_name("min"), TNorm::minimum());
  EXPECT_EQ(TNorm::from_name("lukasiewicz"), TNorm::lukasiewicz());
  EXPECT_THROW(TNorm::from_name("drastic"), DomainError);
  for (auto t : kAll) EXPECT_EQ(TNorm::from_name(t.name()), t);
}

TEST(TNorm, Fold) {
  const std::vector<double> a = {0.9, 0.4, 0.7};
  EXPECT_EQ(fold(TNorm::minimum(), a), 0.4);
  const std::vector<double> b = {0.5, 0.5, 0.5};
  EXPECT_EQ(fold(TNorm::product(), b), 0.125);
  const std::vector<double> c = {0.7, 0.7, 0.7};
  // (0.7*0.7) = 0.4, then 0.4*0.7 = 0.1
  EXPECT_NEAR(fold(TNorm::lukasiewicz(), c), 0.1, 1e-12);
  EXPECT_THROW(fold(TNorm::minimum(), std::vector<double>{}), DomainError);
  EXPECT_THROW(fold(TNorm::lukasiewicz(), std::vector<double>{0.5, 1.2}), DomainError);
}

TEST(TNorm, FoldOrderIndependentOnLattice) {
  // All orderings of a 4-element list of 1/16 levels agree.
  for (auto t : {TNorm::minimum(), TNorm::lukasiewicz()}) {
    std::vector<double> v = {13 / 16.0, 15 / 16.0, 14 / 16.0, 1.0};
    std::sort(v.begin(), v.end());
    const double ref = fold(t, v);
    do {
      EXPECT_EQ(fold(t, v), ref);
    } while (std::next_permutation(v.begin(), v.end()));
  }
}

TEST(TNorm, VerifyAxioms) {
  const auto mn = verify_axioms(TNorm::minimum(), 1000, 7);
  EXPECT_EQ(mn.samples, 1000u);
  EXPECT_EQ(mn.worst(), 0.0);
  const auto pr = verify_axioms(TNorm::product(), 1000, 7);
  EXPECT_LE(pr.associativity, 1e-12);
  EXPECT_EQ(pr.commutativity, 0.0);
  EXPECT_EQ(pr.unit, 0.0);
  EXPECT_EQ(pr.monotonicity, 0.0);
  EXPECT_EQ(verify_axioms(TNorm::lukasiewicz(), 1000, 7).worst(), 0.0);
  EXPECT_THROW(verify_axioms(TNorm::minimum(), 0, 7), DomainError);
}

TEST(TNorm, VerifyAxiomsDeterministic) {
  const auto a = verify_axioms(TNorm::product(), 500, 42);
  const auto b = verify_axioms(TNorm::product(), 500, 42);
  EXPECT_EQ(a.associativity, b.associativity);
}

TEST(TNorm, ExhaustiveOn64Lattice) {
  for (auto t : kAll) {
    for (int i = 0; i <= 64; ++i) {
      const double a = i / 64.0;
      EXPECT_EQ(t.apply(a, 1.0), a);
      for (int j = 0; j <= 64; ++j) {
        const double b = j / 64.0;
        ASSERT_EQ(t.apply(a, b), t.apply(b, a));
        if (j > 0) ASSERT_LE(t.apply(a, (j - 1) / 64.0), t.apply(a, b));
        for (int k = 0; k <= 64; ++k) {
          const double c = k / 64.0;
          const double l = t.apply(t.apply(a, b), c), r = t.apply(a, t.apply(b, c));
          if (t.kind() == TNormKind::product) {
            ASSERT_NEAR(l, r, 1e-12);
          } else {
            ASSERT_EQ(l, r);
          }
        }
      }
    }
  }
}

TEST(TNorm, LatticeClosure) {
  // min and Lukasiewicz keep L_q = {0, 1/q, ..., 1} closed; product does not.
  for (int q : {1, 2, 3, 4, 16, 256}) {
    for (auto t : {TNorm::minimum(), TNorm::lukasiewicz()}) {
      for (int i = 0; i <= q; ++i) {
        for (int j = 0; j <= q; ++j) {
          const double r = t.apply(double(i) / q, double(j) / q) * q;
          EXPECT_NEAR(r, std::round(r), 1e-9);
        }
      }
    }
  }
  const double r = TNorm::product().apply(0.5, 0.5) * 2;
  EXPECT_NE(r, std::round(r));
}
