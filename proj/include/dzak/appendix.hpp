#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dzak/geometry.hpp"
#include "dzak/norm_report.hpp"

namespace dzak {

enum class LogGrowthModel {
  PowerOfLog,   // value = C (log N)^exponent, fitted in log-log
  LinearInLog,  // value = slope log N + intercept
};

enum class LogScale {
  Natural,      // ln N
  DyadicCount,  // log2 N - 1, the number of dyadic L with 1 <= L <= N/4
};

double log_variable(double N, LogScale scale);

struct LogGrowthFit {
  LogGrowthModel model = LogGrowthModel::PowerOfLog;
  LogScale scale = LogScale::Natural;
  double slope = 0.0;  // the exponent for PowerOfLog
  double intercept = 0.0;
  double r2 = 0.0;
};

LogGrowthFit loggrowth_fit(const std::vector<std::pair<double, double>>& points, LogGrowthModel model,
                           LogScale scale = LogScale::Natural);

enum class AppendixDatum {
  U,  // chi_{B_1(0)}
  V,  // N^{-s-2s'+1/2} chi_{B_1(a_N)}
  W,  // chi_{B_1(0)} + Lambda^{-1/p1} N^{-s-2s'+1/2} sum_L L^{-1} chi_{B_1(a_N) cap S_L}
};

struct AppendixParams {
  int d = 3;
  double s = 1.0;
  double sprime = 0.75;
  double p1 = 2.0;
  double b1 = 0.5;
  double b2 = 0.5;
  double p2 = 2.0;
  int sign = 1;
  std::uint64_t seed = 1;
  McBudget budget;
};

struct NormEstimate {
  NormReport report;  // report.total is the norm
  double std_error = 0.0;
};

/// U in X_E^{s,s',b1,p1}, V in X_{W+-}^{s-1/2,s',b2,p2}, W in X_E^{s,s',1/2,p1}.
NormEstimate appendix_norm(AppendixDatum datum, double N, const AppendixParams& p);

struct SlabCell {
  double L = 0.0;
  McEstimate value;  // integral of the squared lens over B_{1/2}(a_N) cut with S_L
};

struct Part1Result {
  double N = 0.0;
  NormEstimate norm_u, norm_v;
  std::vector<SlabCell> cells;
  double lhs = 0.0;
  double lhs_std_error = 0.0;
};

Part1Result appendix_part1(double N, const AppendixParams& p);

struct Part2Result {
  double N = 0.0;
  NormEstimate norm_w;
  McEstimate l2_square;  // squared L^2(B_{1/2}(a_N)) norm of sum_L L^{-1} chi_{B_1(0)} * chi_{B_1(a_N) cap S_L}
  double lhs = 0.0;
  double lhs_std_error = 0.0;
};

Part2Result appendix_part2(double N, const AppendixParams& p);

struct SlabLawRow {
  double N = 0.0, L = 0.0, r = 0.0;
  McEstimate measure;
  double ratio = 0.0;  // measure / (L/N)
};

struct CounterexampleConfig {
  AppendixParams params;
  std::vector<double> Ns{16, 32, 64, 128, 256, 512, 1024};
  bool part1 = true;
  bool part2 = true;
  bool slab_law = true;  // at the largest N, radii 1 and 1/2
};

struct CounterexampleReport {
  CounterexampleConfig cfg;
  std::vector<Part1Result> part1;
  std::vector<Part2Result> part2;
  std::vector<SlabLawRow> slab_law;
  LogGrowthFit part1_linear;   // lhs^p1 (lhs for p1 = inf) against the dyadic count
  LogGrowthFit part1_power;    // lhs against the dyadic count
  LogGrowthFit part2_power;    // lhs against the dyadic count
  LogGrowthFit part2_natural;  // lhs against ln N
  double slab_spread_r1 = 0.0;     // max/min of measure/(L/N) at radius 1
  double slab_spread_half = 0.0;   // same at radius 1/2

  /// part,N,L,p1,s,sprime,cell_value,stderr, then a fit table.
  std::string to_csv() const;
};

CounterexampleReport run_counterexample(const CounterexampleConfig& cfg);

}  // namespace dzak
