#include "cdwsd/density.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

using namespace cdwsd;

namespace {

ConceptStats stats(std::uint32_t descendants, std::uint32_t height, double nhyp) {
  return ConceptStats{descendants, height, nhyp};
}

// Term-by-term evaluation at extended precision, the independent route for
// the agreement checks.
long double reference_density(const ConceptStats& s, std::uint32_t m, double alpha,
                              double beta) {
  long double sum = 0.0L;
  const long double base = static_cast<long double>(s.nhyp) + static_cast<long double>(beta);
  for (std::uint32_t i = 0; i < m; ++i) {
    if (i == 0) {
      sum += 1.0L;
    } else {
      sum += powl(base, powl(static_cast<long double>(i), static_cast<long double>(alpha)));
    }
  }
  return sum / static_cast<long double>(s.descendants);
}

}  // namespace

TEST(DensityBase, BinaryTreeHierarchies) {
  EXPECT_EQ(conceptual_density_base(stats(7, 3, 2.0), 3), 1.0);
  EXPECT_EQ(conceptual_density_base(stats(31, 5, 2.0), 5), 1.0);
}

TEST(DensityBase, LeafWithOneMark) {
  EXPECT_EQ(conceptual_density_base(stats(1, 1, 0.0), 1), 1.0);
}

TEST(DensityBase, ZeroMarksIsACallerBug) {
  EXPECT_THROW(conceptual_density_base(stats(7, 3, 2.0), 0), std::invalid_argument);
  EXPECT_THROW(conceptual_density(stats(7, 3, 2.0), 0), std::invalid_argument);
}

TEST(DensityBase, OrdersAroundHeightOnRegularTrees) {
  // Fewer marks than levels dilute the subhierarchy, more than fill it.
  const ConceptStats s{31, 5, 2.0};
  for (std::uint32_t m = 1; m < 5; ++m) EXPECT_LT(conceptual_density_base(s, m), 1.0);
  EXPECT_EQ(conceptual_density_base(s, 5), 1.0);
  for (std::uint32_t m = 6; m < 10; ++m) EXPECT_GT(conceptual_density_base(s, m), 1.0);
}

TEST(DensityBase, EqualsOneWhenMarksEqualHeightOnRegularTrees) {
  for (std::uint32_t k = 2; k <= 6; ++k) {
    for (std::uint32_t h = 2; h <= 6; ++h) {
      std::uint32_t descendants = 0, term = 1;
      for (std::uint32_t i = 0; i < h; ++i) {
        descendants += term;
        term *= k;
      }
      EXPECT_EQ(conceptual_density_base(stats(descendants, h, double(k)), h), 1.0)
          << "k=" << k << " h=" << h;
    }
  }
}

TEST(DensityParameterized, AlphaOneReducesToBase) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t h = 1 + rng() % 8;
    std::uint32_t d = h + rng() % 500;
    if (h == 1) d = 1;
    const ConceptStats s = stats(d, h, solve_nhyp(d, h));
    const std::uint32_t m = 1 + rng() % 12;
    const double base = conceptual_density_base(s, m);
    const double parameterized = conceptual_density(s, m, {1.0, 0.0});
    EXPECT_NEAR(parameterized, base, 1e-12 * std::max(1.0, base));
  }
}

TEST(DensityParameterized, WorkedExample) {
  // (1 + 2 + 2^(2^0.2)) / 7 on the 7-node binary-tree stats.
  const double got = conceptual_density(stats(7, 3, 2.0), 3, {0.20, 0.0});
  EXPECT_NEAR(got, 0.7453053814111115, 1e-12);
}

TEST(DensityParameterized, SingleMarkIsInverseDescendants) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const std::uint32_t h = 1 + rng() % 6;
    std::uint32_t d = h + rng() % 100;
    if (h == 1) d = 1;
    const ConceptStats s = stats(d, h, solve_nhyp(d, h));
    const DensityParams p{0.01 * (rng() % 300), 0.01 * (rng() % 100)};
    EXPECT_EQ(conceptual_density(s, 1, p), 1.0 / d);
  }
}

TEST(DensityParameterized, RejectsNegativeBaseAndAlpha) {
  EXPECT_THROW(conceptual_density(stats(7, 3, 2.0), 2, {0.2, -3.0}), std::invalid_argument);
  EXPECT_THROW(conceptual_density(stats(7, 3, 2.0), 2, {-0.1, 0.0}), std::invalid_argument);
}

TEST(DensityProperties, StrictlyMonotoneInMarks) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    // Bounded so base^(m^alpha) stays finite in a double over the m range.
    const std::uint32_t h = 3 + rng() % 7;
    const std::uint32_t d = h + rng() % 900;
    const ConceptStats s = stats(d, h, solve_nhyp(d, h));
    const DensityParams p{0.05 + 0.01 * (rng() % 145), 0.01 * (rng() % 150)};
    ASSERT_GT(s.nhyp + p.beta, 0.0);
    double prev = conceptual_density(s, 1, p);
    for (std::uint32_t m = 2; m <= 16; ++m) {
      const double next = conceptual_density(s, m, p);
      ASSERT_GT(next, prev) << "d=" << d << " h=" << h << " m=" << m;
      prev = next;
    }
  }
}

TEST(DensityProperties, BetaVariesValuesContinuouslyKeepingMonotonicity) {
  const ConceptStats s = stats(96, 6, solve_nhyp(96, 6));
  double prev_at_m3 = -1.0;
  for (double beta = 0.0; beta <= 2.0; beta += 0.125) {
    const DensityParams p{0.20, beta};
    double prev = conceptual_density(s, 1, p);
    for (std::uint32_t m = 2; m <= 8; ++m) {
      const double next = conceptual_density(s, m, p);
      ASSERT_GT(next, prev);
      prev = next;
    }
    const double at_m3 = conceptual_density(s, 3, p);
    if (prev_at_m3 >= 0.0) EXPECT_NEAR(at_m3, prev_at_m3, 0.05);  // small beta step, small move
    prev_at_m3 = at_m3;
    // local continuity at this beta
    EXPECT_NEAR(conceptual_density(s, 3, {0.20, beta + 1e-9}), at_m3, 1e-7);
  }
}

TEST(DensityProperties, AgreesWithExtendedPrecisionReference) {
  std::mt19937_64 rng(14);
  int kept = 0;
  for (int i = 0; i < 2500; ++i) {
    const std::uint32_t h = 2 + rng() % 15;
    const std::uint32_t d = h + rng() % 1000000;
    const ConceptStats s = stats(d, h, solve_nhyp(d, h));
    const std::uint32_t m = 1 + rng() % 64;
    const double alpha = 0.01 * (rng() % 120);
    const double beta = 0.01 * (rng() % 200);
    const long double want = reference_density(s, m, alpha, beta);
    if (want > 1e300L) continue;  // outside double range, nothing to compare
    ++kept;
    const double got = conceptual_density(s, m, {alpha, beta});
    const double rel = std::abs(static_cast<double>((got - want) / (want == 0.0L ? 1.0L : want)));
    ASSERT_LE(rel, 1e-12) << "d=" << d << " h=" << h << " m=" << m << " a=" << alpha
                          << " b=" << beta;
  }
  EXPECT_GE(kept, 2000);
}
