#pragma once

// Monte Carlo machinery shared by the geometry and appendix code. Integrals over a
// ball around a_N are split into the tau-chord, integrated exactly or by Gauss-Legendre,
// and the spatial offsets (delta_1, delta_2..delta_{d-1}, delta_d), sampled with an
// adjustable density in delta_1 and uniformly in the remaining (d-1)-ball.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dzak/geometry.hpp"
#include "dzak/rng.hpp"

namespace dzak::mc {

struct Delta1 {
  enum Kind { Uniform, Band, Mixture };
  Kind kind = Uniform;
  double r = 1.0;   // support [-r, r]
  double lo = 0.0;  // Band: |x| in [lo, hi]; Mixture: log-uniform part on [lo, hi]
  double hi = 1.0;

  // u in [0, 1) carries the stratum; rng only breaks the mixture tie.
  double draw(double u, Rng& rng) const;
  double density(double x) const;
};

/// Band of delta_1 that contains every point of B_r(a_N) whose modulation has
/// |m| in [mlo, mhi]; empty (lo >= hi) if there is none.
Delta1 slab_band(double N, double mlo, double mhi, double r);

/// Defensive mixture: half uniform on [-r, r], half log-uniform in |x| on [lo, hi].
Delta1 mixture(double lo, double hi, double r);

class BallSampler {
 public:
  BallSampler(int d, double r, Delta1 prop) : d_(d), r_(r), prop_(prop) {}

  /// Fills the spatial offsets s (size d, s[0] = delta_1, s[d-1] = delta_d) and the
  /// tau-chord half length h (0 outside the ball); returns the importance weight.
  double draw(double u, Rng& rng, std::vector<double>& s, double& h) const;

 private:
  int d_;
  double r_;
  Delta1 prop_;
};

/// 2N delta_1 + |delta_xi|^2 + delta_d: the modulation tau + |xi|^2 + xi_d at
/// a_N + (0, s) (the a_N terms cancel).
inline double modulation_offset(double N, const std::vector<double>& s) {
  double q = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) q += s[k] * s[k];
  return 2.0 * N * s[0] + q + s.back();
}

/// Integral over [lo, hi] by 16-point Gauss-Legendre.
double gauss_legendre(const std::function<double(double)>& f, double lo, double hi);

/// The pieces of [-h, h] where mlo <= |t + c| <= mhi.
std::vector<std::pair<double, double>> slab_pieces(double c, double h, double mlo, double mhi);

/// Batch-means estimate of E[sample(u, rng)] with u stratified inside each batch.
McEstimate batch_means(const std::function<double(double, Rng&)>& sample, std::uint64_t seed,
                       const McBudget& budget);

}  // namespace dzak::mc
