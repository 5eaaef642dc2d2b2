#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace dzak {

/// psi(x) = exp(-1/x) for x > 0, else 0.
inline double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// Smooth step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = psi(x), b = psi(1.0 - x);
  return a / (a + b);
}

/// Base bump: even, exactly 1 on [-1,1], exactly 0 outside (-2,2).
inline double eta(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double p = psi(2.0 - a), q = psi(a - 1.0);
  return p / (p + q);
}

/// Dyadic annulus piece: eta(|x|/N) - eta(2|x|/N) for N > 1, eta(|x|) for N = 1.
inline double eta_n(double N, double r) {
  const double a = std::abs(r);
  if (N <= 1.0) return eta(a);
  return eta(a / N) - eta(2.0 * a / N);
}

/// Directional profile in dimension d: 0 for |r| <= a/2 or |r| >= 4, 1 on [a, 2],
/// with a = 1/(2 sqrt(d-1)).
inline double phi(int d, double r) {
  const double a = 0.5 / std::sqrt(static_cast<double>(d - 1));
  const double x = std::abs(r);
  if (x <= 0.5 * a || x >= 4.0) return 0.0;
  if (x < a) return smooth_step((x - 0.5 * a) / (0.5 * a));
  if (x <= 2.0) return 1.0;
  return 1.0 - smooth_step((x - 2.0) / 2.0);
}

inline double phi_n(int d, double N, double r) { return phi(d, r / N); }

/// The dyadic pieces with eta_K(x) > 0 (at most two) as (K, eta_K(x)) pairs.
struct DyadicPieces {
  int count = 0;
  std::array<std::pair<double, double>, 2> piece{};
};

inline DyadicPieces dyadic_pieces(double x) {
  DyadicPieces out;
  const double a = std::abs(x);
  auto push = [&](double K) {
    const double v = eta_n(K, a);
    if (v > 0.0 && out.count < 2) out.piece[out.count++] = {K, v};
  };
  if (a < 2.0) push(1.0);
  if (a > 1.0) {
    // eta_K is supported on (K/2, 2K): candidates K = 2^floor(log2 a) and twice that.
    double K = std::exp2(std::floor(std::log2(a)));
    if (K < 2.0) K = 2.0;
    if (K / 2.0 < a && a < 2.0 * K && K > 1.0) push(K);
    if (K < a && a < 4.0 * K) push(2.0 * K);
  }
  return out;
}

}  // namespace dzak
