#include "dzak/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "ball_sampler.hpp"
#include "dzak/bumps.hpp"
#include "dzak/error.hpp"
#include "dzak/fit.hpp"
#include "dzak/norms.hpp"
#include "dzak/parallel.hpp"
#include "dzak/projections.hpp"

namespace dzak {

double log_variable(double N, LogScale scale) {
  require(N > 1.0, ErrorDomain::Counterexample, errc::precondition, "log variable needs N > 1");
  return scale == LogScale::Natural ? std::log(N) : std::log2(N) - 1.0;
}

LogGrowthFit loggrowth_fit(const std::vector<std::pair<double, double>>& points, LogGrowthModel model,
                           LogScale scale) {
  require(points.size() >= 4, ErrorDomain::Counterexample, errc::precondition,
          "log-growth fit needs at least 4 points, got " + std::to_string(points.size()));
  std::vector<double> x, y;
  for (auto [N, v] : points) {
    const double X = log_variable(N, scale);
    if (model == LogGrowthModel::PowerOfLog) {
      require(X > 0.0 && v > 0.0, ErrorDomain::Counterexample, errc::precondition,
              "power-of-log fit needs positive values and log variable");
      x.push_back(std::log(X));
      y.push_back(std::log(v));
    } else {
      x.push_back(X);
      y.push_back(v);
    }
  }
  const LinearFit f = least_squares(x, y);
  LogGrowthFit out;
  out.model = model;
  out.scale = scale;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.r2 = f.r2;
  return out;
}

namespace {

void check_params(double N, const AppendixParams& p) {
  require(is_dyadic(N) && N >= 16.0 && N <= 1024.0, ErrorDomain::Counterexample, errc::precondition,
          "appendix N must be a power of two in [2^4, 2^10]");
  require(p.d >= 2, ErrorDomain::Counterexample, errc::precondition, "appendix needs d >= 2");
  require(p.sign == 1 || p.sign == -1, ErrorDomain::Counterexample, errc::precondition, "sign must be +1 or -1");
  require(p.p1 >= 1.0 && p.p2 >= 1.0, ErrorDomain::Counterexample, errc::precondition, "exponents p1, p2 must be >= 1");
}

double dyadic_count(double N) { return std::log2(N) - 1.0; }

using BlockKey = std::tuple<double, double, double>;
using BlockMap = std::map<BlockKey, double>;

// One ball of a datum: amplitude * profile(m_E) * chi_{B_1(center)}, with blocks cut by
// the family's modulation.
struct BallPart {
  double Nc = 0.0;  // 0 for the ball at the origin, N for the ball at a_N
  double N = 0.0;
  int sign = 1;
  double amplitude = 1.0;
  bool slab_profile = false;  // sum_{1 <= L <= N/4} L^{-1} chi_{S_L}
  RestrictionFamily family = RestrictionFamily::E;
};

double slab_profile(double m, double N) {
  const double x = std::abs(m);
  if (x < 1.0 || x > N / 2.0) return 0.0;
  const double L = std::exp2(std::floor(std::log2(x)));
  return 1.0 / std::min(L, N / 4.0);
}

// Adds the dyadic breakpoints |t + c| = 2^k, k >= 0, inside [lo, hi].
void add_breaks(std::vector<double>& out, double c, double lo, double hi) {
  const double top = std::max(std::abs(lo + c), std::abs(hi + c));
  for (double P = 1.0; P <= 2.0 * top; P *= 2.0)
    for (double t : {P - c, -P - c})
      if (t > lo && t < hi) out.push_back(t);
}

struct SmallAcc {
  std::vector<std::pair<double, double>> v;
  void add(double L, double x) {
    for (auto& e : v)
      if (e.first == L) {
        e.second += x;
        return;
      }
    v.push_back({L, x});
  }
};

// Adds the sample's contribution to sum_{N,M,L} ||eta_N eta_M eta_L f||^2 into acc.
void accumulate_part(const BallPart& part, int d, double u, Rng& rng, const mc::BallSampler& sampler,
                     std::vector<double>& s, BlockMap& acc) {
  double h = 0.0;
  const double w = sampler.draw(u, rng, s, h);
  if (h <= 0.0 || w == 0.0) return;
  double xi2 = (part.Nc + s[0]) * (part.Nc + s[0]);
  for (int j = 1; j + 1 < d; ++j) xi2 += s[j] * s[j];
  const double r = std::sqrt(xi2);
  const double tau0 = part.Nc > 0.0 ? -part.sign * part.Nc : 0.0;
  const double xid = (part.Nc > 0.0 ? -part.Nc * part.Nc + part.sign * part.Nc : 0.0) + s[d - 1];
  const double cE = mc::modulation_offset(part.Nc, s);
  double cB = cE;
  if (part.family == RestrictionFamily::WPlus) cB = tau0 + r;
  if (part.family == RestrictionFamily::WMinus) cB = tau0 - r;

  std::vector<double> cuts{-h, h};
  add_breaks(cuts, cB, -h, h);
  if (part.slab_profile) add_breaks(cuts, cE, -h, h);
  std::sort(cuts.begin(), cuts.end());

  SmallAcc accL;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] <= cuts[k]) continue;
    // Gauss-Legendre per L: integrate each dyadic piece separately on this interval.
    std::vector<double> Ls;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]) + cB;
    const auto pm = dyadic_pieces(mid);
    for (int i = 0; i < pm.count; ++i) Ls.push_back(pm.piece[i].first);
    // Neighbours can be active at the interval ends.
    for (std::size_t i = 0, n0 = Ls.size(); i < n0; ++i)
      for (double L2 : {Ls[i] / 2.0, Ls[i] * 2.0})
        if (L2 >= 1.0 && std::find(Ls.begin(), Ls.end(), L2) == Ls.end()) Ls.push_back(L2);
    for (double L : Ls) {
      const double val = mc::gauss_legendre(
          [&](double t) {
            const double e = eta_n(L, t + cB);
            if (e == 0.0) return 0.0;
            const double a = part.slab_profile ? slab_profile(t + cE, part.N) : 1.0;
            return e * e * a * a;
          },
          cuts[k], cuts[k + 1]);
      if (val > 0.0) accL.add(L, val);
    }
  }
  if (accL.v.empty()) return;
  const auto pn = dyadic_pieces(r), pd = dyadic_pieces(xid);
  const double amp2 = part.amplitude * part.amplitude * w;
  for (int i = 0; i < pn.count; ++i)
    for (int j = 0; j < pd.count; ++j) {
      const double e = pn.piece[i].second * pd.piece[j].second;
      for (auto [L, v] : accL.v) acc[{pn.piece[i].first, pd.piece[j].first, L}] += amp2 * e * e * v;
    }
}

NormReport blocks_to_report(const BlockMap& blocks, RestrictionFamily family, double s, double sprime, double b,
                            double p) {
  NormReport rep;
  rep.name = family == RestrictionFamily::E ? "XE" : (family == RestrictionFamily::WPlus ? "XW+" : "XW-");
  rep.aggregation = Aggregation::L2OverLp;
  rep.p = p;
  for (const auto& [key, v] : blocks) {
    const auto [N, M, L] = key;
    rep.blocks.push_back({rep.name, N, M, L, std::pow(N, s) * std::pow(M, sprime) * std::pow(L, b) * std::sqrt(v)});
  }
  rep.total = rep.reaggregate();
  return rep;
}

}  // namespace

NormEstimate appendix_norm(AppendixDatum datum, double N, const AppendixParams& p) {
  check_params(N, p);
  const double amp = std::pow(N, -p.s - 2.0 * p.sprime + 0.5);
  std::vector<BallPart> parts;
  RestrictionFamily family = RestrictionFamily::E;
  double s = p.s, b = p.b1, q = p.p1;
  switch (datum) {
    case AppendixDatum::U: parts.push_back({0.0, N, p.sign, 1.0, false, family}); break;
    case AppendixDatum::V:
      family = p.sign > 0 ? RestrictionFamily::WPlus : RestrictionFamily::WMinus;
      s = p.s - 0.5, b = p.b2, q = p.p2;
      parts.push_back({N, N, p.sign, amp, false, family});
      break;
    case AppendixDatum::W:
      b = 0.5;
      parts.push_back({0.0, N, p.sign, 1.0, false, family});
      parts.push_back({N, N, p.sign, std::pow(dyadic_count(N), -1.0 / p.p1) * amp, true, family});
      break;
  }
  std::vector<mc::BallSampler> samplers;
  for (const auto& part : parts)
    samplers.emplace_back(p.d, 1.0,
                          part.slab_profile ? mc::mixture(1.0 / (8.0 * N), (N / 2.0 + 3.0) / (2.0 * N), 1.0)
                                            : mc::Delta1{});

  const McBudget& bud = p.budget;
  const std::uint64_t base = derive_seed(p.seed, 0x7a0 + static_cast<int>(datum), static_cast<std::uint64_t>(N));
  std::vector<double> sv;
  for (std::size_t S = bud.start, attempt = 0;; S *= 4, ++attempt) {
    BlockMap pooled;
    std::vector<double> batch_norms;
    for (std::size_t j = 0; j < bud.batches; ++j) {
      BlockMap acc;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        Rng rng(derive_seed(base, attempt, j, k));
        for (std::size_t i = 0; i < S; ++i)
          accumulate_part(parts[k], p.d, (static_cast<double>(i) + rng.uniform()) / S, rng, samplers[k], sv, acc);
      }
      for (auto& [key, v] : acc) {
        v /= static_cast<double>(S);
        pooled[key] += v / static_cast<double>(bud.batches);
      }
      batch_norms.push_back(blocks_to_report(acc, family, s, p.sprime, b, q).total);
    }
    NormEstimate out;
    out.report = blocks_to_report(pooled, family, s, p.sprime, b, q);
    double m = 0.0, m2 = 0.0;
    for (double x : batch_norms) m += x, m2 += x * x;
    const double B = static_cast<double>(bud.batches);
    m /= B;
    out.std_error = std::sqrt(std::max(0.0, m2 / B - m * m) / (B - 1.0));
    require(std::isfinite(out.report.total), ErrorDomain::Counterexample, errc::numerical, "appendix norm not finite");
    if (out.std_error <= bud.rel_tol * out.report.total) return out;
    if (S * 4 > bud.max_per_batch)
      fail(ErrorDomain::Counterexample, errc::precision, "appendix norm did not reach the Monte Carlo tolerance");
  }
}

Part1Result appendix_part1(double N, const AppendixParams& p) {
  check_params(N, p);
  Part1Result r;
  r.N = N;
  r.norm_u = appendix_norm(AppendixDatum::U, N, p);
  r.norm_v = appendix_norm(AppendixDatum::V, N, p);
  const double amp = std::pow(N, -p.s - 2.0 * p.sprime + 0.5);
  // Terms L^{-p1/2} ||u^ * v^||^{p1}_{L^2(B_{1/2}(a) cap S_L)}.
  std::vector<double> terms, rel;
  for (double L = 1.0; L <= N / 4.0; L *= 2.0) {
    SlabCell c;
    c.L = L;
    c.value = slab_lens_square(p.d, N, L, 0.5, p.sign, p.seed, p.budget);
    r.cells.push_back(c);
    const double norm = amp * std::sqrt(c.value.value);
    terms.push_back(std::isinf(p.p1) ? norm / std::sqrt(L) : std::pow(L, -0.5 * p.p1) * std::pow(norm, p.p1));
    rel.push_back(0.5 * c.value.rel_error());
  }
  const double pre = std::pow(N, p.s + 2.0 * p.sprime);
  if (std::isinf(p.p1)) {
    const auto it = std::max_element(terms.begin(), terms.end());
    r.lhs = pre * *it;
    r.lhs_std_error = r.lhs * rel[it - terms.begin()];
  } else {
    double sum = 0.0;
    for (double t : terms) sum += t;
    r.lhs = pre * std::pow(sum, 1.0 / p.p1);
    // Delta method: d(lhs)/lhs = sum_k (t_k / sum) (p1/2) (d cell_k / cell_k) / p1.
    double var = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) var += std::pow(terms[k] / sum * rel[k], 2);
    r.lhs_std_error = r.lhs * std::sqrt(var);
  }
  return r;
}

Part2Result appendix_part2(double N, const AppendixParams& p) {
  check_params(N, p);
  require(p.p1 > 1.0 && std::isfinite(p.p1), ErrorDomain::Counterexample, errc::precondition,
          "appendix part 2 needs 1 < p1 < inf");
  Part2Result r;
  r.N = N;
  r.norm_w = appendix_norm(AppendixDatum::W, N, p);
  const Point a = appendix_center(p.d, N, p.sign);
  const int n = p.d + 1;
  const double vol = ball_volume(n, 0.5);
  SlabWeights sw;
  sw.lmin = 1.0;
  sw.lmax = N / 4.0;
  sw.inverse_l = true;
  const std::size_t inner = 128;
  McBudget bud = p.budget;
  bud.start = std::max<std::size_t>(1, bud.start / 16);
  bud.rel_tol = 2.0 * p.budget.rel_tol;
  Point z(n);
  r.l2_square = mc::batch_means(
      [&](double u, Rng& rng) {
        double nn = 0.0;
        for (int k = 0; k < n; ++k) {
          z[k] = rng.normal();
          nn += z[k] * z[k];
        }
        const double rad = 0.5 * std::pow(u, 1.0 / n) / std::sqrt(nn);
        for (int k = 0; k < n; ++k) z[k] = a[k] + rad * z[k];
        const double f1 = cross_convolution(p.d, N, p.sign, z, sw, rng.next_u64(), inner).value;
        const double f2 = cross_convolution(p.d, N, p.sign, z, sw, rng.next_u64(), inner).value;
        return vol * f1 * f2;
      },
      derive_seed(p.seed, 0x9a27, static_cast<std::uint64_t>(N)), bud);
  r.lhs = std::pow(dyadic_count(N), -1.0 / p.p1) * N * std::sqrt(std::max(0.0, r.l2_square.value));
  r.lhs_std_error = 0.5 * r.lhs * r.l2_square.rel_error();
  return r;
}

CounterexampleReport run_counterexample(const CounterexampleConfig& cfg) {
  require(cfg.Ns.size() >= 4, ErrorDomain::Counterexample, errc::precondition,
          "counterexample needs at least 4 values of N for the fits");
  for (double N : cfg.Ns) check_params(N, cfg.params);
  CounterexampleReport rep;
  rep.cfg = cfg;
  const auto& p = cfg.params;
  if (cfg.part1) {
    rep.part1.resize(cfg.Ns.size());
    parallel_for(cfg.Ns.size(), [&](std::size_t i) { rep.part1[i] = appendix_part1(cfg.Ns[i], p); });
    std::vector<std::pair<double, double>> lin, pw;
    for (const auto& r : rep.part1) {
      lin.push_back({r.N, std::isinf(p.p1) ? r.lhs : std::pow(r.lhs, p.p1)});
      pw.push_back({r.N, r.lhs});
    }
    rep.part1_linear = loggrowth_fit(lin, LogGrowthModel::LinearInLog, LogScale::DyadicCount);
    rep.part1_power = loggrowth_fit(pw, LogGrowthModel::PowerOfLog, LogScale::DyadicCount);
  }
  if (cfg.part2) {
    rep.part2.resize(cfg.Ns.size());
    parallel_for(cfg.Ns.size(), [&](std::size_t i) { rep.part2[i] = appendix_part2(cfg.Ns[i], p); });
    std::vector<std::pair<double, double>> pw;
    for (const auto& r : rep.part2) pw.push_back({r.N, r.lhs});
    rep.part2_power = loggrowth_fit(pw, LogGrowthModel::PowerOfLog, LogScale::DyadicCount);
    rep.part2_natural = loggrowth_fit(pw, LogGrowthModel::PowerOfLog, LogScale::Natural);
  }
  if (cfg.slab_law) {
    const double N = *std::max_element(cfg.Ns.begin(), cfg.Ns.end());
    for (double r : {1.0, 0.5}) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (double L = 1.0; L <= N / 4.0; L *= 2.0) {
        SlabLawRow row;
        row.N = N, row.L = L, row.r = r;
        row.measure = slab_ball_measure(p.d, N, L, r, p.sign, p.seed, p.budget);
        row.ratio = row.measure.value / (L / N);
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
        rep.slab_law.push_back(row);
      }
      (r == 1.0 ? rep.slab_spread_r1 : rep.slab_spread_half) = hi / lo;
    }
  }
  return rep;
}

namespace {

const char* model_name(LogGrowthModel m) { return m == LogGrowthModel::PowerOfLog ? "power-of-log" : "linear-in-log"; }
const char* scale_name(LogScale s) { return s == LogScale::Natural ? "ln" : "dyadic-count"; }

}  // namespace

std::string CounterexampleReport::to_csv() const {
  const auto& p = cfg.params;
  const std::string tail = "," + format_double(p.p1) + "," + format_double(p.s) + "," + format_double(p.sprime) + ",";
  auto row = [&](const std::string& part, double N, const std::string& L, double v, double se) {
    return part + "," + format_double(N) + "," + L + tail + format_double(v) + "," + format_double(se) + "\n";
  };
  std::string out = "part,N,L,p1,s,sprime,cell_value,stderr\n";
  for (const auto& r : part1) {
    for (const auto& c : r.cells)
      out += row("part1-cell", r.N, format_double(c.L), c.value.value, c.value.std_error);
    out += row("part1-norm-u", r.N, "", r.norm_u.report.total, r.norm_u.std_error);
    out += row("part1-norm-v", r.N, "", r.norm_v.report.total, r.norm_v.std_error);
    out += row("part1-lhs", r.N, "", r.lhs, r.lhs_std_error);
  }
  for (const auto& r : part2) {
    out += row("part2-l2sq", r.N, "", r.l2_square.value, r.l2_square.std_error);
    out += row("part2-norm-w", r.N, "", r.norm_w.report.total, r.norm_w.std_error);
    out += row("part2-lhs", r.N, "", r.lhs, r.lhs_std_error);
  }
  for (const auto& r : slab_law)
    out += row(r.r == 1.0 ? "slab-ratio-r1" : "slab-ratio-r0.5", r.N, format_double(r.L), r.ratio,
               r.measure.std_error / (r.L / r.N));
  out += "\nfit,model,scale,slope,intercept,r2\n";
  auto fit = [&](const std::string& name, const LogGrowthFit& f) {
    out += name + "," + model_name(f.model) + "," + scale_name(f.scale) + "," + format_double(f.slope) + "," +
           format_double(f.intercept) + "," + format_double(f.r2) + "\n";
  };
  if (!part1.empty()) {
    fit("part1-lhs-pow-p1", part1_linear);
    fit("part1-lhs", part1_power);
  }
  if (!part2.empty()) {
    fit("part2-lhs", part2_power);
    fit("part2-lhs", part2_natural);
  }
  if (!slab_law.empty()) {
    out += "slab-spread-r1,max-over-min,,," + format_double(slab_spread_r1) + ",\n";
    out += "slab-spread-r0.5,max-over-min,,," + format_double(slab_spread_half) + ",\n";
  }
  return out;
}

}  // namespace dzak
