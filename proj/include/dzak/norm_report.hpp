#pragma once

#include <string>
#include <vector>

namespace dzak {

/// How a report's block contributions combine into its total.
enum class Aggregation {
  Sum,       // total = sum of contributions
  L2,        // total = (sum of squares)^{1/2}
  Min,       // total = smallest candidate (infimum surrogates)
  L2OverLp,  // l^p over L inside each (N, M), then l^2 over (N, M)
};

struct NormBlock {
  std::string kind;
  double N = 0.0;
  double M = 0.0;
  double L = 0.0;
  double contribution = 0.0;
};

struct NormReport {
  std::string name;
  double total = 0.0;
  Aggregation aggregation = Aggregation::Sum;
  double p = 2.0;  // inner exponent for L2OverLp
  std::vector<NormBlock> blocks;
  // For infimum-type norms: description of the splitting that attains total.
  std::string witness;

  /// Recomputes the total from the blocks.
  double reaggregate() const;
  /// CSV with header kind,N,M,L,contribution,total.
  std::string to_csv(bool header = true) const;
};

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

}  // namespace dzak
