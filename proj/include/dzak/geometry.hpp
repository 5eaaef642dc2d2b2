#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dzak {

/// Point of (tau, xi_1..xi_{d-1}, xi_d)-space, so size d + 1.
using Point = std::vector<double>;

/// Volume of the radius-r ball in R^n (n >= 0).
double ball_volume(int n, double r = 1.0);

/// Volume of the intersection of two unit balls in R^n whose centers are dist apart.
double lens_volume(int n, double dist);

/// (chi_{B_1(0)} * chi_{B_1(a)})(z).
double lens_convolution(const Point& z, const Point& a);

/// a_N^{+-} = (-+N, N, 0, ..., 0, -N^2 +- N) in dimension d (sign is +1 or -1).
Point appendix_center(int d, double N, int sign);

/// tau + |xi|^2 + xi_d.
double modulation_e(const Point& p);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  double rel_error() const { return value != 0.0 ? std_error / std::abs(value) : 0.0; }
};

/// Sample budget of the batch-means Monte Carlo: batches of `start` samples, grown 4x
/// until the relative standard error is at most rel_tol, failing past max_per_batch.
struct McBudget {
  std::size_t batches = 32;
  std::size_t start = 256;
  std::size_t max_per_batch = 1 << 16;
  double rel_tol = 0.02;
};

/// Measure of B_r(a_N^{+-}) cut with S_L = {L <= |tau + |xi|^2 + xi_d| <= 2L}.
McEstimate slab_ball_measure(int d, double N, double L, double r, int sign, std::uint64_t seed = 1,
                             const McBudget& budget = {});

/// Integral of lens_convolution(z, a)^2 over B_r(a) cut with S_L, a = a_N^{+-}.
McEstimate slab_lens_square(int d, double N, double L, double r, int sign, std::uint64_t seed = 1,
                            const McBudget& budget = {});

/// Dyadic slab selection with optional 1/L weights; core adds |modulation| < 1.
struct SlabWeights {
  double lmin = 1.0;
  double lmax = 1.0;
  bool inverse_l = false;
  bool core = false;
};

/// Weighted volume of B_1(z) cut with B_1(a_N^{+-}) and the selected slabs, by plain
/// Monte Carlo with a fixed sample count.
McEstimate cross_convolution(int d, double N, int sign, const Point& z, const SlabWeights& w, std::uint64_t seed,
                             std::size_t samples);

}  // namespace dzak
