#include "dzak/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dzak/bumps.hpp"
#include "dzak/error.hpp"
#include "dzak/flows.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/norm_report.hpp"
#include "dzak/norms.hpp"
#include "dzak/parallel.hpp"
#include "dzak/presets.hpp"
#include "dzak/projections.hpp"
#include "dzak/rng.hpp"
#include "dzak/transform.hpp"

namespace dzak {

const char* estimate_name(Estimate e) {
  switch (e) {
    case Estimate::LocalSmoothing: return "LocalSmoothing";
    case Estimate::MaximalFn: return "MaximalFn";
    case Estimate::Strichartz: return "Strichartz";
    case Estimate::InhomG_to_F: return "InhomG_to_F";
  }
  return "?";
}

double rhs_weight(Estimate e, int d, double N) {
  switch (e) {
    case Estimate::LocalSmoothing: return 1.0 / std::sqrt(N);
    case Estimate::MaximalFn:
      if (d == 3) return (1.0 + std::log(N)) * std::sqrt(N);
      return std::pow(N, 0.5 * (d - 2));
    default: return 1.0;
  }
}

namespace {

struct Cell {
  double N;
  std::string trial;
  std::uint64_t seed;  // 0 for presets
};

Field lattice_field(const SweepConfig& cfg, double N) {
  std::vector<Axis> axes;
  const double box = cfg.spacing_ref * static_cast<double>(cfg.n) / N;
  for (int k = 0; k < cfg.d - 1; ++k) axes.push_back({AxisRole::Transverse, cfg.n, box});
  return Field(axes);
}

void normalize(Field& f) {
  const double nrm = l2_norm(f);
  require(nrm > 0.0, ErrorDomain::Verification, errc::numerical, "sweep data vanished after projection");
  for (auto& v : f.data()) v /= nrm;
}

// Localizes to the window and re-projects onto the annulus.
Field localize(const Field& f, double N, double window) {
  Field w = sample_function(f, preset::Gaussian{window, 1.0, {}});
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= w[i];
  g = apply_projection({ProjKind::Annulus, N}, g);
  normalize(g);
  return g;
}

Field trial_data(const SweepConfig& cfg, const Cell& c) {
  const double N = c.N;
  const double window = cfg.window_ref / N;
  const Field tmpl = lattice_field(cfg, N);
  const std::size_t m = tmpl.transverse_count();
  if (c.trial == "packet-slow" || c.trial == "packet-fast") {
    std::vector<double> k(m, 0.0);
    if (c.trial == "packet-fast" || m == 1) {
      k[cfg.direction] = N;
    } else {
      const double a = 0.5 / std::sqrt(static_cast<double>(cfg.d - 1));
      k[cfg.direction] = a * N;
      k[(cfg.direction + 1) % m] = std::sqrt(1.0 - a * a) * N;
    }
    return localize(sample_function(tmpl, preset::WavePacket{k, window, 1.0, {}}), N, window);
  }
  if (c.trial == "focus") {
    // All annulus coefficients in phase: the data concentrates at the origin.
    Field f = tmpl;
    for (auto a : f.spatial_axes()) f.set_spectral(a, true);
    const auto xi2 = transverse_freq_sq(f);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = eta_n(N, std::sqrt(xi2[i]));
    transform_inplace(f, f.spatial_axes(), Direction::Inverse);
    normalize(f);
    return f;
  }
  return localize(sample_function(tmpl, preset::BandLimitedRandom{N, c.seed, 1.0}), N, window);
}

// Time-constant-in-profile sources: a stationary part with a smooth time profile plus a
// resonant free solution.
TimeSlab inhom_source(const SweepConfig& cfg, const Cell& c, double T) {
  const double N = c.N;
  const double window = cfg.window_ref / N;
  const Field tmpl = lattice_field(cfg, N);
  const double dt = T / static_cast<double>(cfg.nt - 1);
  double a = 1.0, b = 1.0;
  if (c.trial == "stationary") b = 0.0;
  if (c.trial == "resonant") a = 0.0;
  const std::uint64_t s = c.seed ? c.seed : derive_seed(cfg.seed, 991, static_cast<std::uint64_t>(N));
  const Field f1 = localize(sample_function(tmpl, preset::BandLimitedRandom{N, derive_seed(s, 1), 1.0}), N, window);
  const Field f2 = localize(sample_function(tmpl, preset::BandLimitedRandom{N, derive_seed(s, 2), 1.0}), N, window);
  TimeSlab u = evolve_slab(FlowKind::SchrodingerTransverse, f2, cfg.nt, 0.0, dt);
  for (std::size_t k = 0; k < cfg.nt; ++k) {
    const double t = k * dt;
    const double prof = std::cos(std::numbers::pi * t / T);
    Field sl = slice(u, k);
    for (std::size_t i = 0; i < sl.size(); ++i) sl[i] = a * prof * f1[i] + b * sl[i];
    set_slice(u, k, sl);
  }
  return u;
}

}  // namespace

double flow_norm(const SweepConfig& cfg, const Field& f, double T) {
  const Estimate est = cfg.estimate;
  require(est != Estimate::InhomG_to_F, ErrorDomain::Verification, errc::precondition,
          "flow_norm covers the homogeneous estimates");
  const std::size_t nt = cfg.nt;
  const double dt = 2.0 * T / static_cast<double>(nt - 1);
  const std::size_t j = cfg.direction;
  Field F = transform(f, f.spatial_axes(), Direction::Forward);
  const auto w = flow_rate(FlowKind::SchrodingerTransverse, F);
  const std::size_t nr = f.extent(j);
  const std::size_t stride = f.stride(j);
  const double dr = f.spacing(j);
  const double dv = f.cell_volume() / dr;
  const double p = strichartz_exponent(cfg.d - 1);
  std::vector<double> acc(nr, 0.0);
  double total = 0.0;
  // Phases advance by a fixed factor per step; resynchronized every 16 steps.
  std::vector<cplx> step(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) step[i] = std::polar(1.0, dt * w[i]);
  Field g = F;
  Field u = F;
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = -T + static_cast<double>(k) * dt;
    if (k % 16 == 0) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = F[i] * std::polar(1.0, t * w[i]);
    } else {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= step[i];
    }
    u.data() = g.data();
    for (auto a : u.spatial_axes()) u.set_spectral(a, true);
    transform_inplace(u, u.spatial_axes(), Direction::Inverse);
    const double cut = (est == Estimate::MaximalFn && cfg.d == 3) ? eta(t) : 1.0;
    const double c2 = cut * cut;
    const cplx* up = u.data().data();
    if (est == Estimate::Strichartz) {
      for (std::size_t i = 0; i < u.size(); ++i) total += std::pow(std::norm(up[i]), 0.5 * p);
      continue;
    }
    const std::size_t outer = u.size() / (nr * stride);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t r = 0; r < nr; ++r) {
        const cplx* row = up + (o * nr + r) * stride;
        double s = 0.0, m = 0.0;
        for (std::size_t q = 0; q < stride; ++q) {
          const double a2 = std::norm(row[q]);
          s += a2;
          m = std::max(m, a2);
        }
        if (est == Estimate::LocalSmoothing)
          acc[r] += s * dv * dt;
        else
          acc[r] = std::max(acc[r], m * c2);
      }
  }
  switch (est) {
    case Estimate::LocalSmoothing: return std::sqrt(*std::max_element(acc.begin(), acc.end()));
    case Estimate::MaximalFn: {
      double s = 0.0;
      for (double v : acc) s += v * dr;
      return std::sqrt(s);
    }
    default: return std::pow(total * dv * dr * dt, 1.0 / p);
  }
}

SweepResult run_sweep(const SweepConfig& cfg) {
  require(cfg.d >= 2, ErrorDomain::Verification, errc::precondition, "sweep dimension must be >= 2");
  require(!cfg.Ns.empty() && cfg.trials >= 0, ErrorDomain::Verification, errc::precondition,
          "sweep needs a non-empty N range");
  require(cfg.direction < static_cast<std::size_t>(cfg.d - 1), ErrorDomain::Verification, errc::precondition,
          "direction index out of range");
  require(is_power_of_two(cfg.n) && cfg.n >= 8, ErrorDomain::Verification, errc::precondition,
          "lattice size must be a power of two >= 8");
  require(cfg.nt >= 3, ErrorDomain::Verification, errc::precondition, "sweep needs at least 3 time samples");
  // Nyquist at N is pi N / spacing_ref; the annulus reaches 2N.
  require(std::numbers::pi / cfg.spacing_ref >= 2.0, ErrorDomain::Verification, errc::bandwidth,
          "N range exceeds half the Nyquist frequency");
  for (double N : cfg.Ns)
    require(is_dyadic(N), ErrorDomain::Verification, errc::precondition, "sweep N values must be dyadic");

  std::vector<Cell> cells;
  for (std::size_t ni = 0; ni < cfg.Ns.size(); ++ni) {
    const double N = cfg.Ns[ni];
    for (int t = 0; t < cfg.trials; ++t)
      cells.push_back({N, std::to_string(t),
                       derive_seed(cfg.seed, static_cast<std::uint64_t>(cfg.estimate), static_cast<std::uint64_t>(N),
                                   static_cast<std::uint64_t>(t) + 1)});
    if (cfg.presets) {
      if (cfg.estimate == Estimate::InhomG_to_F) {
        cells.push_back({N, "stationary", 0});
        cells.push_back({N, "resonant", 0});
      } else {
        cells.push_back({N, "packet-slow", 0});
        cells.push_back({N, "packet-fast", 0});
        cells.push_back({N, "focus", 0});
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& c = cells[i];
    const double T = cfg.horizon_ref / (c.N * c.N);
    SweepRow row;
    row.N = c.N;
    row.trial = c.trial;
    row.rhs_weight = rhs_weight(cfg.estimate, cfg.d, c.N);
    if (cfg.estimate == Estimate::InhomG_to_F) {
      const TimeSlab u = inhom_source(cfg, c, T);
      BlockNormOptions fo;
      fo.check_support = false;
      GnOptions go;
      go.check_support = false;
      row.lhs = fn_norm(duhamel(u, FlowKind::SchrodingerTransverse), c.N, fo).total;
      row.ratio = row.lhs / gn_norm(u, c.N, go).total;
    } else {
      Field f = trial_data(cfg, c);
      if (cfg.estimate == Estimate::LocalSmoothing)
        f = apply_projection({ProjKind::Directional, c.N, 1.0, 1.0, cfg.direction}, f);
      row.lhs = flow_norm(cfg, f, T);
      row.ratio = row.lhs / row.rhs_weight;  // ||f|| = 1
    }
    rows[i] = std::move(row);
  });

  SweepResult res;
  res.estimate = cfg.estimate;
  res.d = cfg.d;
  res.rows = std::move(rows);
  res.Ns = cfg.Ns;
  std::vector<double> lx, ly, lr;
  for (double N : cfg.Ns) {
    double wl = 0.0, wr = 0.0;
    for (const auto& r : res.rows)
      if (r.N == N) {
        wl = std::max(wl, r.lhs);
        wr = std::max(wr, r.ratio);
      }
    res.worst_lhs.push_back(wl);
    res.worst_ratio.push_back(wr);
    lx.push_back(std::log(N));
    ly.push_back(std::log(wl));
    lr.push_back(std::log(wr));
  }
  if (cfg.Ns.size() >= 2) {
    res.raw_fit = least_squares(lx, ly);
    res.ratio_fit = least_squares(lx, lr);
  }
  const auto [mn, mx] = std::minmax_element(res.worst_ratio.begin(), res.worst_ratio.end());
  res.ratio_spread = *mn > 0.0 ? *mx / *mn : 0.0;
  return res;
}

std::string SweepResult::to_csv() const {
  std::string out = "estimate,d,N,trial,lhs,rhs_weight,ratio\n";
  const std::string head = std::string(estimate_name(estimate)) + "," + std::to_string(d) + ",";
  for (const auto& r : rows)
    out += head + format_double(r.N) + "," + r.trial + "," + format_double(r.lhs) + "," +
           format_double(r.rhs_weight) + "," + format_double(r.ratio) + "\n";
  // Fit rows: lhs = slope, rhs_weight = intercept, ratio = R^2.
  out += head + "fit,raw," + format_double(raw_fit.slope) + "," + format_double(raw_fit.intercept) + "," +
         format_double(raw_fit.r2) + "\n";
  out += head + "fit,ratio," + format_double(ratio_fit.slope) + "," + format_double(ratio_fit.intercept) + "," +
         format_double(ratio_fit.r2) + "\n";
  out += head + "fit,spread,0,0," + format_double(ratio_spread) + "\n";
  return out;
}

}  // namespace dzak
