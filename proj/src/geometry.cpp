#include "dzak/geometry.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "ball_sampler.hpp"
#include "dzak/error.hpp"

namespace dzak {

double ball_volume(int n, double r) {
  require(n >= 0, ErrorDomain::Counterexample, errc::precondition, "ball volume: negative dimension");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0) * std::pow(r, n);
}

double lens_volume(int n, double dist) {
  require(n >= 1, ErrorDomain::Counterexample, errc::precondition, "lens volume: dimension < 1");
  const double D = std::abs(dist);
  if (D >= 2.0) return 0.0;
  // Two caps at height a = D/2: 2 V_{n-1} J_{n-1}(a), J_k(a) = int_a^1 (1-x^2)^{k/2} dx.
  const double a = 0.5 * D, w = 1.0 - a * a;
  const int k = n - 1;
  double Jm2 = 1.0 - a;                                                        // J_0
  double Jm1 = 0.5 * (0.5 * std::numbers::pi - a * std::sqrt(w) - std::asin(a));  // J_1
  double J = k == 0 ? Jm2 : Jm1;
  for (int j = 2; j <= k; ++j) {
    J = (-a * std::pow(w, 0.5 * j) + j * Jm2) / (j + 1);
    Jm2 = Jm1;
    Jm1 = J;
  }
  return 2.0 * ball_volume(n - 1) * J;
}

double lens_convolution(const Point& z, const Point& a) {
  require(z.size() == a.size() && !z.empty(), ErrorDomain::Counterexample, errc::precondition,
          "lens convolution: points differ in dimension");
  double q = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) q += (z[k] - a[k]) * (z[k] - a[k]);
  return lens_volume(static_cast<int>(z.size()), std::sqrt(q));
}

Point appendix_center(int d, double N, int sign) {
  require(d >= 2, ErrorDomain::Counterexample, errc::precondition, "appendix center: d < 2");
  require(sign == 1 || sign == -1, ErrorDomain::Counterexample, errc::precondition, "sign must be +1 or -1");
  Point a(d + 1, 0.0);
  a[0] = -sign * N;
  a[1] = N;
  a[d] = -N * N + sign * N;
  return a;
}

double modulation_e(const Point& p) {
  double q = 0.0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) q += p[k] * p[k];
  return p.front() + q + p.back();
}

namespace mc {

double Delta1::draw(double u, Rng& rng) const {
  switch (kind) {
    case Uniform: return -r + 2.0 * r * u;
    case Band: {
      if (lo <= 0.0) return -hi + 2.0 * hi * u;
      const double w = hi - lo;
      return u < 0.5 ? -(lo + w * 2.0 * u) : lo + w * (2.0 * u - 1.0);
    }
    case Mixture: {
      if (rng.uniform() < 0.5) return -r + 2.0 * r * u;
      const double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return sgn * lo * std::pow(hi / lo, u);
    }
  }
  return 0.0;
}

double Delta1::density(double x) const {
  const double a = std::abs(x);
  switch (kind) {
    case Uniform: return a <= r ? 0.5 / r : 0.0;
    case Band:
      if (a > hi || a < lo) return 0.0;
      return 0.5 / (hi - lo);
    case Mixture: {
      double p = a <= r ? 0.25 / r : 0.0;
      if (a >= lo && a <= hi) p += 0.25 / (a * std::log(hi / lo));
      return p;
    }
  }
  return 0.0;
}

Delta1 slab_band(double N, double mlo, double mhi, double r) {
  // |delta_tau| <= r and |delta_xi|^2 + delta_d in [-r, r + r^2].
  const double e = 2.0 * r + r * r;
  Delta1 b;
  b.kind = Delta1::Band;
  b.r = r;
  b.lo = std::max(0.0, mlo - e) / (2.0 * N);
  b.hi = std::min(r, (mhi + e) / (2.0 * N));
  return b;
}

Delta1 mixture(double lo, double hi, double r) {
  Delta1 m;
  m.kind = Delta1::Mixture;
  m.r = r;
  m.lo = lo;
  m.hi = std::min(hi, r);
  return m;
}

double BallSampler::draw(double u, Rng& rng, std::vector<double>& s, double& h) const {
  s.assign(d_, 0.0);
  s[0] = prop_.draw(u, rng);
  const int k = d_ - 1;
  double nn = 0.0;
  for (int j = 1; j <= k; ++j) {
    s[j] = rng.normal();
    nn += s[j] * s[j];
  }
  const double rad = r_ * std::pow(rng.uniform(), 1.0 / k) / std::sqrt(nn);
  double q = s[0] * s[0];
  for (int j = 1; j <= k; ++j) {
    s[j] *= rad;
    q += s[j] * s[j];
  }
  h = q < r_ * r_ ? std::sqrt(r_ * r_ - q) : 0.0;
  const double dens = prop_.density(s[0]);
  return dens > 0.0 ? ball_volume(k, r_) / dens : 0.0;
}

double gauss_legendre(const std::function<double(double)>& f, double lo, double hi) {
  static const std::array<std::pair<double, double>, 16> nodes = [] {
    std::array<std::pair<double, double>, 16> out{};
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return out;
  }();
  if (hi <= lo) return 0.0;
  const double m = 0.5 * (lo + hi), w = 0.5 * (hi - lo);
  double acc = 0.0;
  for (const auto& [x, wt] : nodes) acc += wt * f(m + w * x);
  return acc * w;
}

std::vector<std::pair<double, double>> slab_pieces(double c, double h, double mlo, double mhi) {
  std::vector<std::pair<double, double>> out;
  auto add = [&](double a, double b) {
    a = std::max(a, -h);
    b = std::min(b, h);
    if (b > a) out.push_back({a, b});
  };
  add(-mhi - c, -mlo - c);
  add(mlo - c, mhi - c);
  return out;
}

McEstimate batch_means(const std::function<double(double, Rng&)>& sample, std::uint64_t seed,
                       const McBudget& budget) {
  require(budget.batches >= 2 && budget.start >= 1, ErrorDomain::Counterexample, errc::precondition,
          "Monte Carlo budget needs at least two batches");
  const double B = static_cast<double>(budget.batches);
  for (std::size_t S = budget.start, attempt = 0;; S *= 4, ++attempt) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t j = 0; j < budget.batches; ++j) {
      Rng rng(derive_seed(seed, attempt, j));
      double acc = 0.0;
      for (std::size_t i = 0; i < S; ++i) acc += sample((static_cast<double>(i) + rng.uniform()) / S, rng);
      const double m = acc / static_cast<double>(S);
      sum += m;
      sum2 += m * m;
    }
    McEstimate e;
    e.value = sum / B;
    e.std_error = std::sqrt(std::max(0.0, sum2 / B - e.value * e.value) / (B - 1.0));
    e.samples = S * budget.batches;
    require(std::isfinite(e.value), ErrorDomain::Counterexample, errc::numerical, "Monte Carlo estimate not finite");
    if (e.rel_error() <= budget.rel_tol) return e;
    if (S * 4 > budget.max_per_batch)
      fail(ErrorDomain::Counterexample, errc::precision,
           "Monte Carlo relative standard error " + std::to_string(e.rel_error()) + " above tolerance after " +
               std::to_string(e.samples) + " samples");
  }
}

}  // namespace mc

namespace {

void check_slab(double N, double L, double r) {
  require(N >= 2.0 && L >= 1.0, ErrorDomain::Counterexample, errc::precondition, "slab needs N >= 2 and L >= 1");
  require(r > 0.0 && r <= 1.0, ErrorDomain::Counterexample, errc::precondition, "slab ball radius must lie in (0, 1]");
  require(L <= N / 4.0, ErrorDomain::Counterexample, errc::support,
          "slab L = " + std::to_string(L) + " exceeds N/4: the intersection with the ball is degenerate");
}

}  // namespace

McEstimate slab_ball_measure(int d, double N, double L, double r, int sign, std::uint64_t seed,
                             const McBudget& budget) {
  appendix_center(d, N, sign);
  check_slab(N, L, r);
  const mc::BallSampler sampler(d, r, mc::slab_band(N, L, 2.0 * L, r));
  std::vector<double> s;
  return mc::batch_means(
      [&](double u, Rng& rng) {
        double h = 0.0;
        const double w = sampler.draw(u, rng, s, h);
        if (h <= 0.0) return 0.0;
        double len = 0.0;
        for (auto [a, b] : mc::slab_pieces(mc::modulation_offset(N, s), h, L, 2.0 * L)) len += b - a;
        return w * len;
      },
      derive_seed(seed, 0x51ab, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(L * 4 + r * 2)), budget);
}

McEstimate slab_lens_square(int d, double N, double L, double r, int sign, std::uint64_t seed,
                            const McBudget& budget) {
  appendix_center(d, N, sign);
  check_slab(N, L, r);
  const mc::BallSampler sampler(d, r, mc::slab_band(N, L, 2.0 * L, r));
  std::vector<double> s;
  const int n = d + 1;
  return mc::batch_means(
      [&](double u, Rng& rng) {
        double h = 0.0;
        const double w = sampler.draw(u, rng, s, h);
        if (h <= 0.0) return 0.0;
        double rho2 = 0.0;
        for (double x : s) rho2 += x * x;
        double acc = 0.0;
        for (auto [a, b] : mc::slab_pieces(mc::modulation_offset(N, s), h, L, 2.0 * L))
          acc += mc::gauss_legendre(
              [&](double t) {
                const double v = lens_volume(n, std::sqrt(t * t + rho2));
                return v * v;
              },
              a, b);
        return w * acc;
      },
      derive_seed(seed, 0x1e25, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(L * 4 + r * 2)), budget);
}

namespace {

// Antiderivative of the slab weight in the modulation, odd, zero at 0.
double slab_weight_integral(double m, const SlabWeights& w) {
  const double x = std::abs(m);
  double g = w.core ? std::min(x, 1.0) : 0.0;
  for (double L = w.lmin; L <= w.lmax && L < x; L *= 2.0)
    g += (w.inverse_l ? 1.0 / L : 1.0) * (std::min(x, 2.0 * L) - L);
  return m < 0.0 ? -g : g;
}

}  // namespace

McEstimate cross_convolution(int d, double N, int sign, const Point& z, const SlabWeights& w, std::uint64_t seed,
                             std::size_t samples) {
  const Point a = appendix_center(d, N, sign);
  require(z.size() == a.size(), ErrorDomain::Counterexample, errc::precondition, "cross convolution: z has wrong dimension");
  require(w.lmin >= 1.0 && w.lmax >= w.lmin && samples >= 2, ErrorDomain::Counterexample, errc::precondition,
          "cross convolution: bad slab range or sample count");
  const double zt = z[0] - a[0];
  std::vector<double> zs(d);
  for (int k = 0; k < d; ++k) zs[k] = z[k + 1] - a[k + 1];
  const mc::BallSampler sampler(d, 1.0, mc::mixture(1.0 / (8.0 * N), (2.0 * w.lmax + 3.0) / (2.0 * N), 1.0));
  Rng rng(seed);
  std::vector<double> s;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double h = 0.0;
    const double wt = sampler.draw((static_cast<double>(i) + rng.uniform()) / samples, rng, s, h);
    double v = 0.0;
    if (h > 0.0) {
      double q = 0.0;
      for (int k = 0; k < d; ++k) q += (s[k] - zs[k]) * (s[k] - zs[k]);
      if (q < 1.0) {
        const double hz = std::sqrt(1.0 - q);
        const double lo = std::max(-h, zt - hz), hi = std::min(h, zt + hz);
        if (hi > lo) {
          const double c = mc::modulation_offset(N, s);
          v = wt * (slab_weight_integral(c + hi, w) - slab_weight_integral(c + lo, w));
        }
      }
    }
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples);
  McEstimate e;
  e.value = sum / n;
  e.std_error = std::sqrt(std::max(0.0, sum2 / n - e.value * e.value) / (n - 1.0));
  e.samples = samples;
  return e;
}

}  // namespace dzak
