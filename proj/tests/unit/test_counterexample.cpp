#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dzak/appendix.hpp"
#include "dzak/bumps.hpp"
#include "dzak/error.hpp"
#include "dzak/geometry.hpp"
#include "dzak/rng.hpp"

using namespace dzak;

namespace {

constexpr double kPi = std::numbers::pi;

int code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.exit_code();
  }
  return 0;
}

// Uniform point in the radius-r ball of R^n around c, by rejection from the cube.
Point ball_point(Rng& rng, const Point& c, double r) {
  Point z(c.size());
  for (;;) {
    double q = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      z[k] = rng.uniform(-1.0, 1.0);
      q += z[k] * z[k];
    }
    if (q <= 1.0) break;
  }
  for (std::size_t k = 0; k < c.size(); ++k) z[k] = c[k] + r * z[k];
  return z;
}

}  // namespace

TEST(Lens, FullOverlapAndDisjoint) {
  EXPECT_NEAR(lens_volume(4, 0.0), kPi * kPi / 2.0, 1e-12);
  EXPECT_EQ(lens_volume(4, 2.0), 0.0);
  EXPECT_EQ(lens_volume(4, 3.5), 0.0);
  EXPECT_NEAR(ball_volume(3), 4.0 * kPi / 3.0, 1e-12);
  EXPECT_NEAR(ball_volume(5, 0.5), 8.0 * kPi * kPi / 15.0 / 32.0, 1e-12);
}

TEST(Lens, LowDimensionalClosedForms) {
  for (double D : {0.0, 0.3, 1.0, 1.7}) {
    EXPECT_NEAR(lens_volume(1, D), 2.0 - D, 1e-13);
    EXPECT_NEAR(lens_volume(3, D), kPi * (4.0 + D) * (2.0 - D) * (2.0 - D) / 12.0, 1e-12);
  }
}

TEST(Lens, MatchesMonteCarloAtUnitDistance) {
  Rng rng(7);
  const Point o(4, 0.0);
  const std::size_t n = 1000000;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Point z = ball_point(rng, o, 1.0);
    z[0] -= 1.0;
    double q = 0.0;
    for (double x : z) q += x * x;
    hit += q <= 1.0;
  }
  const double mc = ball_volume(4) * static_cast<double>(hit) / n;
  EXPECT_NEAR(lens_volume(4, 1.0) / mc, 1.0, 0.01);
}

TEST(Lens, DependsOnlyOnDistanceAndIsMonotone) {
  const Point a = appendix_center(3, 32, 1);
  Point z1 = a, z2 = a;
  z1[0] += 0.6;
  z2[3] -= 0.6;
  EXPECT_NEAR(lens_convolution(z1, a), lens_convolution(z2, a), 1e-13);
  double prev = lens_volume(4, 0.0);
  for (double D = 0.05; D <= 2.0; D += 0.05) {
    const double v = lens_volume(4, D);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
  EXPECT_NE(code_of([] { lens_convolution(Point(4, 0.0), Point(3, 0.0)); }), 0);
}

TEST(Geometry, CenterSitsOnTheCharacteristicSurface) {
  for (int sg : {1, -1}) {
    const Point a = appendix_center(4, 64, sg);
    ASSERT_EQ(a.size(), 5u);
    EXPECT_EQ(a[0], -sg * 64.0);
    EXPECT_EQ(a[1], 64.0);
    EXPECT_EQ(a[4], -4096.0 + sg * 64.0);
    EXPECT_EQ(modulation_e(a), 0.0);
  }
}

TEST(SlabMeasure, RegressionBracketAtN64) {
  const McEstimate m = slab_ball_measure(3, 64, 1, 0.5, 1);
  EXPECT_LE(m.rel_error(), 0.05);
  const double ratio = m.value / (1.0 / 64.0);
  EXPECT_GE(ratio, 0.50);
  EXPECT_LE(ratio, 0.555);
}

TEST(SlabMeasure, DoublingLDoublesMeasure) {
  for (double L = 1; L <= 8; L *= 2) {
    const double a = slab_ball_measure(3, 128, L, 0.5, -1).value;
    const double b = slab_ball_measure(3, 128, 2 * L, 0.5, -1).value;
    EXPECT_NEAR(b / a, 2.0, 0.2) << "L=" << L;
  }
}

TEST(SlabMeasure, AgreesWithRejectionSampling) {
  // Independent oracle: uniform points in B_1(a), slab test on the full coordinates.
  const double N = 64;
  const Point a = appendix_center(3, N, 1);
  Rng rng(11);
  const std::size_t n = 400000;
  std::size_t in16 = 0, in_union = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point z = ball_point(rng, a, 1.0);
    const double m = std::abs(modulation_e(z));
    in16 += m >= 16.0 && m <= 32.0;
    in_union += m >= 1.0 && m <= N / 2.0;
  }
  const double V = ball_volume(4);
  const double oracle16 = V * static_cast<double>(in16) / n;
  const double oracle_union = V * static_cast<double>(in_union) / n;
  EXPECT_NEAR(slab_ball_measure(3, N, 16, 1.0, 1).value / oracle16, 1.0, 0.03);
  double sum = 0.0;
  for (double L = 1; L <= N / 4; L *= 2) sum += slab_ball_measure(3, N, L, 1.0, 1).value;
  EXPECT_NEAR(sum / oracle_union, 1.0, 0.02);
}

TEST(SlabMeasure, RejectsDegenerateSlabs) {
  EXPECT_EQ(code_of([] { slab_ball_measure(3, 64, 128, 1.0, 1); }), 53);
  EXPECT_EQ(code_of([] { slab_ball_measure(3, 64, 32, 0.5, 1); }), 53);
  EXPECT_EQ(code_of([] { slab_ball_measure(3, 64, 1, 0.5, 0); }), 50);
  EXPECT_EQ(code_of([] { slab_ball_measure(3, 64, 0.5, 0.5, 1); }), 50);
}

TEST(CrossConvolution, AllSlabsAndCoreGiveTheLens) {
  const double N = 64;
  const Point a = appendix_center(3, N, 1);
  SlabWeights all;
  all.lmin = 1;
  all.lmax = 8 * N;
  all.core = true;
  Point z = a;
  z[0] += 0.2;
  z[1] -= 0.15;
  z[3] += 0.25;
  const McEstimate e = cross_convolution(3, N, 1, z, all, 5, 200000);
  const double lens = lens_convolution(z, a);
  EXPECT_NEAR(e.value, lens, std::max(4.0 * e.std_error, 0.01 * lens));
}

TEST(CrossConvolution, SingleSlabAtCenterIsTheSlabMeasure) {
  const double N = 128;
  const Point a = appendix_center(3, N, -1);
  SlabWeights one;
  one.lmin = one.lmax = 8;
  const McEstimate e = cross_convolution(3, N, -1, a, one, 3, 400000);
  const McEstimate m = slab_ball_measure(3, N, 8, 1.0, -1);
  EXPECT_NEAR(e.value / m.value, 1.0, 0.03);
  EXPECT_NEAR(e.value / (8.0 / N), ball_volume(3), 0.1 * ball_volume(3));
}

TEST(AppendixNorm, UMatchesDirectQuadrature) {
  // Oracle: rejection sampling in B_1(0), dyadic weights evaluated pointwise.
  AppendixParams p;
  p.b1 = 0.5;
  Rng rng(21);
  const std::size_t n = 400000;
  double acc[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const Point z = ball_point(rng, Point(4, 0.0), 1.0);
    const double m = modulation_e(z);
    for (int k = 0; k < 3; ++k) {
      const double e = eta_n(std::exp2(k), m);
      acc[k] += e * e;
    }
  }
  double sq = 0.0;
  for (int k = 0; k < 3; ++k) sq += std::exp2(k) * ball_volume(4) * acc[k] / n;
  const NormEstimate u = appendix_norm(AppendixDatum::U, 64, p);
  EXPECT_NEAR(u.report.total / std::sqrt(sq), 1.0, 0.02);
  EXPECT_NEAR(u.report.total, u.report.reaggregate(), 1e-10 * u.report.total);
}

TEST(AppendixNorm, InputNormsOfOrderOne) {
  for (double b : {0.0, 0.5, 1.0})
    for (double q : {1.0, 2.0, double(INFINITY)}) {
      AppendixParams p;
      p.b1 = p.b2 = b;
      p.p1 = p.p2 = q;
      for (double N : {16.0, 256.0}) {
        const double u = appendix_norm(AppendixDatum::U, N, p).report.total;
        const double v = appendix_norm(AppendixDatum::V, N, p).report.total;
        EXPECT_GE(u, 1.0 / 3.0);
        EXPECT_LE(u, 3.0);
        EXPECT_GE(v, 1.0 / 3.0);
        EXPECT_LE(v, 3.0);
      }
    }
}

TEST(AppendixNorm, VIsSignSymmetricAndFlatInN) {
  AppendixParams p;
  const double v16 = appendix_norm(AppendixDatum::V, 16, p).report.total;
  const double v1024 = appendix_norm(AppendixDatum::V, 1024, p).report.total;
  p.sign = -1;
  const double m16 = appendix_norm(AppendixDatum::V, 16, p).report.total;
  EXPECT_NEAR(v1024 / v16, 1.0, 0.05);
  EXPECT_NEAR(m16 / v16, 1.0, 0.05);
}

TEST(AppendixNorm, WIsFlatInN) {
  AppendixParams p;
  const double w16 = appendix_norm(AppendixDatum::W, 16, p).report.total;
  const double w1024 = appendix_norm(AppendixDatum::W, 1024, p).report.total;
  EXPECT_NEAR(w1024 / w16, 1.0, 0.05);
}

TEST(LogGrowthFit, SyntheticModels) {
  std::vector<std::pair<double, double>> exact, flat, lin;
  for (double N = 16; N <= 1024; N *= 2) {
    exact.push_back({N, std::sqrt(std::log(N))});
    flat.push_back({N, 2.5});
    lin.push_back({N, 3.0 * (std::log2(N) - 1.0) + 1.0});
  }
  const LogGrowthFit a = loggrowth_fit(exact, LogGrowthModel::PowerOfLog);
  EXPECT_NEAR(a.slope, 0.5, 1e-6);
  EXPECT_NEAR(a.r2, 1.0, 1e-12);
  EXPECT_NEAR(loggrowth_fit(flat, LogGrowthModel::PowerOfLog).slope, 0.0, 1e-12);
  const LogGrowthFit c = loggrowth_fit(lin, LogGrowthModel::LinearInLog, LogScale::DyadicCount);
  EXPECT_NEAR(c.slope, 3.0, 1e-12);
  EXPECT_NEAR(c.intercept, 1.0, 1e-12);
  exact.resize(3);
  EXPECT_EQ(code_of([&] { loggrowth_fit(exact, LogGrowthModel::PowerOfLog); }), 50);
}

TEST(Part1, LhsSquaredLinearInLog) {
  AppendixParams p;
  std::vector<std::pair<double, double>> sq, raw;
  for (double N = 16; N <= 256; N *= 2) {
    const Part1Result r = appendix_part1(N, p);
    for (const auto& c : r.cells) EXPECT_LE(c.value.rel_error(), 0.05);
    sq.push_back({N, r.lhs * r.lhs});
    raw.push_back({N, r.lhs});
  }
  const LogGrowthFit f = loggrowth_fit(sq, LogGrowthModel::LinearInLog, LogScale::DyadicCount);
  EXPECT_GT(f.slope, 0.0);
  EXPECT_GT(f.r2, 0.99);
  EXPECT_NEAR(loggrowth_fit(raw, LogGrowthModel::PowerOfLog, LogScale::DyadicCount).slope, 0.5, 0.1);
}

TEST(Part1, SupremumCaseStaysBounded) {
  AppendixParams p;
  p.p1 = INFINITY;
  const double a = appendix_part1(16, p).lhs;
  const double b = appendix_part1(512, p).lhs;
  EXPECT_NEAR(b / a, 1.0, 0.2);
}

TEST(Part2, ExponentTrendsToZeroAsP1Decreases) {
  auto exponent = [](double p1) {
    AppendixParams p;
    p.p1 = p1;
    std::vector<std::pair<double, double>> pts;
    for (double N = 16; N <= 1024; N *= 4) pts.push_back({N, appendix_part2(N, p).lhs});
    pts.push_back({128, appendix_part2(128, p).lhs});
    return loggrowth_fit(pts, LogGrowthModel::PowerOfLog, LogScale::DyadicCount).slope;
  };
  const double e2 = exponent(2.0), e125 = exponent(1.25), e11 = exponent(1.1);
  EXPECT_NEAR(e2, 0.5, 0.1);
  EXPECT_LT(e125, e2);
  EXPECT_LT(e11, e125);
  EXPECT_LT(e11, 0.2);
}

TEST(Part2, RejectsEndpointExponents) {
  AppendixParams p;
  p.p1 = 1.0;
  EXPECT_EQ(code_of([&] { appendix_part2(64, p); }), 50);
  p.p1 = INFINITY;
  EXPECT_EQ(code_of([&] { appendix_part2(64, p); }), 50);
}

TEST(Pipeline, RangeChecksAndDeterminism) {
  CounterexampleConfig cfg;
  cfg.Ns = {8, 16, 32, 64};
  EXPECT_EQ(code_of([&] { run_counterexample(cfg); }), 50);
  cfg.Ns = {16, 32, 64};
  EXPECT_EQ(code_of([&] { run_counterexample(cfg); }), 50);
  cfg.Ns = {16, 32, 64, 128};
  const std::string a = run_counterexample(cfg).to_csv();
  const std::string b = run_counterexample(cfg).to_csv();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("part,N,L,p1,s,sprime,cell_value,stderr\n", 0), 0u);
  EXPECT_NE(a.find("\nfit,model,scale,slope,intercept,r2\n"), std::string::npos);
}
