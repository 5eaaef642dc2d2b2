#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dzak/field.hpp"
#include "dzak/fit.hpp"

namespace dzak {

enum class Estimate { LocalSmoothing, MaximalFn, Strichartz, InhomG_to_F };

const char* estimate_name(Estimate e);

/// Sweep over dyadic N. Every N runs on the same lattice with the geometry rescaled
/// parabolically: spacing, window and horizon are given at N = 1 and scale like
/// 1/N, 1/N and 1/N^2.
struct SweepConfig {
  Estimate estimate = Estimate::LocalSmoothing;
  int d = 4;
  std::vector<double> Ns{4, 8, 16, 32, 64};
  int trials = 10;
  std::uint64_t seed = 1;
  std::size_t direction = 0;  // e = e_j, 0-based transverse index
  bool presets = true;
  std::size_t n = 64;            // lattice points per transverse axis
  double spacing_ref = 1.0471975511965976;  // pi/3
  double window_ref = 4.0;       // Gaussian localization width
  double horizon_ref = 5.0;      // t in [-T, T] (InhomG_to_F: [0, T])
  std::size_t nt = 128;
};

struct SweepRow {
  double N = 0;
  std::string trial;
  double lhs = 0;
  double rhs_weight = 0;
  double ratio = 0;
};

struct SweepResult {
  Estimate estimate = Estimate::LocalSmoothing;
  int d = 4;
  std::vector<SweepRow> rows;  // ordered by (N, trial)
  std::vector<double> Ns;
  std::vector<double> worst_lhs;    // per N, over trials and presets
  std::vector<double> worst_ratio;  // per N
  LinearFit raw_fit;    // log(worst lhs) against log N
  LinearFit ratio_fit;  // log(worst ratio) against log N
  double ratio_spread = 0;  // max/min of worst ratio over N

  std::string to_csv() const;
};

/// The weight multiplying ||f|| on the right-hand side of the estimate at frequency N.
double rhs_weight(Estimate e, int d, double N);

/// Left-hand side of a homogeneous estimate for exp(it Lap') f over cfg.nt samples on
/// [-T, T], evaluated one time slice at a time.
double flow_norm(const SweepConfig& cfg, const Field& f, double T);

SweepResult run_sweep(const SweepConfig& cfg);

}  // namespace dzak
