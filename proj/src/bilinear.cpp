#include "dzak/bilinear.hpp"

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

const char* which_name(BilinearWhich w) { return w == BilinearWhich::A1 ? "a1" : "b1"; }

const char* regime_name(BilinearRegime r) {
  switch (r) {
    case BilinearRegime::LowOut: return "LowOut";
    case BilinearRegime::LowSecond: return "LowSecond";
    case BilinearRegime::HighPair: return "HighPair";
  }
  return "?";
}

namespace {

bool comparable(double a, double b) {
  const double r = a / b;
  return r == 0.5 || r == 1.0 || r == 2.0;
}

std::size_t auto_lattice(const BilinearCase& c) {
  // Products reach 2(N1 + N2); aliases stay clear of the output annulus |xi| < 2N.
  const double k = 2.0 * std::numbers::pi / c.box;
  const double need = std::max(2.0 * (c.N + c.N1 + c.N2), 4.0 * std::max(c.N1, c.N2) + 1.0) / k;
  std::size_t n = 8;
  while (static_cast<double>(n) < need) n *= 2;
  return n;
}

enum class Profile { Random, Packet, Flat };
enum class Motion { Free, FreeConj, Stationary, Wave };

// Spatial data with coefficients supported where eta_N(|xi|) > 0, unit L^2. Random data
// is localized by a Gaussian window and projected back onto the annulus.
Field annulus_data(const Field& tmpl, double N, Profile p, std::uint64_t seed, double window = 0.0) {
  Field f = tmpl;
  for (auto a : f.spatial_axes()) f.set_spectral(a, true);
  const auto xi2 = transverse_freq_sq(f);
  const auto xi1 = axis_freq(f, f.transverse_axes()[0]);
  const double width = std::max(1.0, 0.25 * N);
  Rng rng(seed);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = eta_n(N, std::sqrt(xi2[i]));
    switch (p) {
      case Profile::Random: {
        const double re = rng.normal(), im = rng.normal();
        f[i] = w * cplx(re, im);
        break;
      }
      case Profile::Packet: {
        const double off = xi2[i] - xi1[i] * xi1[i] + (xi1[i] - N) * (xi1[i] - N);
        f[i] = w * std::exp(-0.5 * off / (width * width));
        break;
      }
      case Profile::Flat: f[i] = w; break;
    }
  }
  transform_inplace(f, f.spatial_axes(), Direction::Inverse);
  if (p == Profile::Random && window > 0.0) {
    const Field w = sample_function(f, preset::Gaussian{window, 1.0, {}});
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= w[i];
    f = apply_projection({ProjKind::Annulus, N}, f);
  }
  const double nrm = l2_norm(f);
  require(nrm > 0.0, ErrorDomain::Verification, errc::numerical, "empty annulus on this lattice");
  for (auto& v : f.data()) v /= nrm;
  return f;
}

TimeSlab in_time(const Field& phi, Motion m, const BilinearCase& c) {
  const double dt = 2.0 * c.T / static_cast<double>(c.nt);
  switch (m) {
    case Motion::Free: return evolve_slab(FlowKind::SchrodingerTransverse, phi, c.nt, -c.T, dt);
    case Motion::FreeConj: {
      TimeSlab s = evolve_slab(FlowKind::SchrodingerTransverse, phi, c.nt, -c.T, dt);
      for (auto& v : s.data()) v = std::conj(v);
      return s;
    }
    case Motion::Wave: return evolve_slab(FlowKind::HalfWave, phi, c.nt, -c.T, dt);
    case Motion::Stationary: {
      TimeSlab s = make_slab(phi, c.nt, -c.T, dt);
      for (std::size_t k = 0; k < c.nt; ++k) set_slice(s, k, phi);
      return s;
    }
  }
  return {};
}

Field lattice(const BilinearCase& c) {
  const std::size_t n = c.n ? c.n : auto_lattice(c);
  std::vector<Axis> axes;
  for (int k = 0; k < c.d - 1; ++k) axes.push_back({AxisRole::Transverse, n, c.box});
  return Field(axes);
}

Field product(const TimeSlab& a, const TimeSlab& b) {
  Field p = a;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = a[i] * b[i];
  return p;
}

double linf_l2(const TimeSlab& f) {
  std::vector<std::size_t> sp = f.spatial_axes();
  return lp_norm(f, {{sp, 2.0}, {{0}, kInf}});
}

struct Pair {
  std::string name;
  TimeSlab f1, f2;
};

std::vector<Pair> pairs(const BilinearCase& c) {
  const Field tmpl = lattice(c);
  std::vector<Pair> out;
  const Motion a1_second[] = {Motion::Free, Motion::Stationary, Motion::Wave};
  const Motion b1_second[] = {Motion::Free, Motion::FreeConj};
  for (int t = 0; t < c.trials; ++t) {
    const std::uint64_t s = derive_seed(c.seed, static_cast<std::uint64_t>(c.regime) + 17 * (c.which == BilinearWhich::B1),
                                        static_cast<std::uint64_t>(c.N1 * 1024 + c.N2), static_cast<std::uint64_t>(t));
    const Field p1 = annulus_data(tmpl, c.N1, Profile::Random, derive_seed(s, 1), c.window);
    const Field p2 = annulus_data(tmpl, c.N2, Profile::Random, derive_seed(s, 2), c.window);
    const Motion m2 = c.which == BilinearWhich::A1 ? a1_second[t % 3] : b1_second[t % 2];
    out.push_back({std::to_string(t), in_time(p1, Motion::Free, c), in_time(p2, m2, c)});
  }
  if (c.presets) {
    const Motion m2 = c.which == BilinearWhich::A1 ? Motion::Stationary : Motion::FreeConj;
    for (Profile p : {Profile::Packet, Profile::Flat}) {
      const Field p1 = annulus_data(tmpl, c.N1, p, 0);
      const Field p2 = annulus_data(tmpl, c.N2, p, 0);
      const std::string name = p == Profile::Packet ? "packets" : "flat";
      out.push_back({name, in_time(p1, Motion::Free, c), in_time(p2, Motion::Free, c)});
      out.push_back({name + "-" + (c.which == BilinearWhich::A1 ? "stationary" : "conj"), in_time(p1, Motion::Free, c),
                     in_time(p2, m2, c)});
    }
  }
  return out;
}

BilinearReport run_case(const BilinearCase& c) {
  validate_case(c);
  const std::vector<Pair> ps = pairs(c);
  const int d = c.d;
  const double nmin = std::min(c.N1, c.N2), nmax = std::max(c.N1, c.N2);
  BlockNormOptions fo;
  fo.check_support = false;
  GnOptions go;
  go.check_support = false;
  BilinearReport rep;
  rep.c = c;
  rep.rows.resize(ps.size());
  parallel_for(ps.size(), [&](std::size_t i) {
    const Pair& p = ps[i];
    const Field out = apply_projection({ProjKind::Annulus, c.N}, product(p.f1, p.f2));
    BilinearRow row;
    row.trial = p.name;
    if (c.which == BilinearWhich::A1) {
      const NormReport g = gn_norm(out, c.N, go);
      row.lhs = g.total;
      row.witness = g.witness;
      row.rhs = std::sqrt(c.T) / std::sqrt(c.N2) * std::pow(nmin, 0.5 * (d - 2)) * fn_norm(p.f1, c.N1, fo).total *
                linf_l2(p.f2);
    } else {
      row.lhs = l2_norm(out);
      row.rhs = std::pow(nmin, 0.5 * (d - 2)) / std::sqrt(nmax) * fn_norm(p.f1, c.N1, fo).total *
                fn_norm(p.f2, c.N2, fo).total;
    }
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    rep.rows[i] = std::move(row);
  });
  for (const auto& r : rep.rows) rep.worst_ratio = std::max(rep.worst_ratio, r.ratio);
  return rep;
}

}  // namespace

void validate_case(const BilinearCase& c) {
  auto check = [](bool ok, const std::string& what) {
    require(ok, ErrorDomain::Verification, errc::precondition, what);
  };
  check(c.d >= 3, "bilinear cases need d >= 3");
  check(is_dyadic(c.N) && is_dyadic(c.N1) && is_dyadic(c.N2), "N, N1, N2 must be dyadic");
  check(c.T > 0.0 && c.T <= 1.0, "T must lie in (0, 1]");
  check(c.nt >= 4 && c.trials >= 0 && c.box > 0.0, "bad sampling parameters");
  switch (c.regime) {
    case BilinearRegime::LowOut:
      check(comparable(c.N1, c.N2) && std::min(c.N1, c.N2) >= 4.0 * c.N, "LowOut needs N << N1 ~ N2");
      break;
    case BilinearRegime::LowSecond:
      check(comparable(c.N, c.N1) && std::min(c.N, c.N1) >= 4.0 * c.N2, "LowSecond needs N2 << N ~ N1");
      break;
    case BilinearRegime::HighPair:
      check(comparable(c.N, c.N2) && c.N1 <= 2.0 * c.N, "HighPair needs N1 <~ N ~ N2");
      break;
  }
  if (c.n) {
    const double nyq = std::numbers::pi * static_cast<double>(c.n) / c.box;
    require(nyq > 2.0 * std::max(c.N1, c.N2) && nyq >= c.N + c.N1 + c.N2, ErrorDomain::Verification, errc::bandwidth,
            "lattice too coarse for the triple");
  }
}

BilinearReport verify_a1(const BilinearCase& c) {
  BilinearCase k = c;
  k.which = BilinearWhich::A1;
  return run_case(k);
}

BilinearReport verify_b1(const BilinearCase& c) {
  BilinearCase k = c;
  k.which = BilinearWhich::B1;
  return run_case(k);
}

OctaveResult run_octave(const OctaveSweep& cfg) {
  OctaveResult res;
  for (BilinearRegime r : {BilinearRegime::LowOut, BilinearRegime::LowSecond, BilinearRegime::HighPair}) {
    double w[2];
    for (int o = 0; o < 2; ++o) {
      const double K = cfg.K * (o ? 2.0 : 1.0);
      BilinearCase c;
      c.which = cfg.which;
      c.regime = r;
      c.d = cfg.d;
      c.trials = cfg.trials;
      c.seed = cfg.seed;
      c.T = cfg.T;
      c.nt = cfg.nt;
      c.window = cfg.window;
      c.presets = cfg.presets;
      switch (r) {
        case BilinearRegime::LowOut: c.N = cfg.low, c.N1 = K, c.N2 = K; break;
        case BilinearRegime::LowSecond: c.N = K, c.N1 = K, c.N2 = cfg.low; break;
        case BilinearRegime::HighPair: c.N = K, c.N1 = cfg.low, c.N2 = K; break;
      }
      res.reports.push_back(run_case(c));
      w[o] = res.reports.back().worst_ratio;
    }
    res.worst_K = std::max(res.worst_K, w[0]);
    res.worst_2K = std::max(res.worst_2K, w[1]);
    res.regime_slopes.push_back(std::log2(w[1] / w[0]));
  }
  res.slope = std::log2(res.worst_2K / res.worst_K);
  return res;
}

THalfCheck t_half_check(const BilinearCase& c0) {
  BilinearCase c = c0;
  c.which = BilinearWhich::A1;
  validate_case(c);
  require(c.N > 1.0, ErrorDomain::Verification, errc::precondition, "the T^{1/2} check needs N > 1");
  require(2.0 * c.T <= 1.0, ErrorDomain::Verification, errc::precondition, "the T^{1/2} check needs 2T <= 1");
  const Field tmpl = lattice(c);
  const Field p1 = annulus_data(tmpl, c.N1, Profile::Random, derive_seed(c.seed, 5));
  const Field p2 = annulus_data(tmpl, c.N2, Profile::Random, derive_seed(c.seed, 6));
  GnOptions go;
  go.check_support = false;
  go.strategy = GnStrategy::Pure2;
  double lhs[2], l2[2];
  for (int k = 0; k < 2; ++k) {
    BilinearCase ck = c;
    ck.T = c.T * (k ? 2.0 : 1.0);
    const TimeSlab f1 = in_time(p1, Motion::Stationary, ck);
    const TimeSlab f2 = in_time(p2, Motion::Stationary, ck);
    lhs[k] = gn_norm(apply_projection({ProjKind::Annulus, c.N}, product(f1, f2)), c.N, go).total;
    l2[k] = l2_norm(f2);
  }
  THalfCheck r;
  r.lhs_ratio = lhs[1] / lhs[0];
  r.l2_ratio = l2[1] / l2[0];
  r.rel_err = std::max(std::abs(r.lhs_ratio / std::sqrt(2.0) - 1.0), std::abs(r.l2_ratio / std::sqrt(2.0) - 1.0));
  return r;
}

namespace {

// Blocks at transverse frequencies K and 2K with a narrow Gaussian x_d profile.
TimeSlab full_component(const FullData& d, int dim, FlowKind flow, std::uint64_t seed) {
  std::vector<Axis> axes;
  for (int k = 0; k < dim - 1; ++k) axes.push_back({AxisRole::Transverse, d.n, d.box});
  axes.push_back({AxisRole::Distinguished, d.nd, d.box});
  Field f(axes);
  for (auto a : f.spatial_axes()) f.set_spectral(a, true);
  const auto xi2 = transverse_freq_sq(f);
  const auto xid = distinguished_freq(f);
  Rng rng(seed);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = std::sqrt(xi2[i]);
    const double w = (eta_n(d.K, r) + 0.5 * eta_n(2.0 * d.K, r)) * std::exp(-2.0 * xid[i] * xid[i]);
    const double re = rng.normal(), im = rng.normal();
    f[i] = d.amplitude * w * cplx(re, im);
  }
  transform_inplace(f, f.spatial_axes(), Direction::Inverse);
  return evolve_slab(flow, f, d.nt, -d.T, 2.0 * d.T / static_cast<double>(d.nt));
}

}  // namespace

FullReport verify_full(double s, double sprime, int d, const FullData& data) {
  require(d >= 3, ErrorDomain::Verification, errc::precondition, "full estimates need d >= 3");
  require(s > 0.5 * (d - 2) && sprime > 0.5, ErrorDomain::Verification, errc::precondition,
          "full estimates need s > (d-2)/2 and s' > 1/2");
  require(data.T > 0.0 && data.T <= 1.0, ErrorDomain::Verification, errc::precondition, "T must lie in (0, 1]");
  // Blocks reach 4K, products 8K; the aggregate norms need that below half the Nyquist value.
  require(8.0 * data.K <= 0.5 * std::numbers::pi * static_cast<double>(data.n) / data.box, ErrorDomain::Verification,
          errc::bandwidth, "transverse lattice too coarse for products of the K and 2K blocks");
  const TimeSlab u = full_component(data, d, FlowKind::TransportedSchrodinger, derive_seed(data.seed, 1));
  const TimeSlab v = full_component(data, d, FlowKind::HalfWave, derive_seed(data.seed, 2));
  const TimeSlab u2 = full_component(data, d, FlowKind::TransportedSchrodinger, derive_seed(data.seed, 3));
  TimeSlab u2c = u2;
  for (auto& z : u2c.data()) z = std::conj(z);

  FullReport r;
  if (data.amplitude == 0.0) return r;
  const double rt = std::sqrt(data.T);
  const double Fu = aggregate_sobolev(u, BlockFunctional::FN, s, sprime).total;
  const double Wv = aggregate_sobolev(v, BlockFunctional::LtInfLx2, s - 0.5, sprime).total;
  r.lhs_a = aggregate_sobolev(product(u, v), BlockFunctional::GN, s, sprime).total;
  r.rhs_a = rt * Fu * Wv;
  // |grad'|(u u2bar), the shape of the density forcing.
  Field g = product(u, u2c);
  transform_inplace(g, g.transverse_axes(), Direction::Forward);
  const auto xi2 = transverse_freq_sq(g);
  const std::size_t S = g.spatial_size();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= std::sqrt(xi2[i % S]);
  transform_inplace(g, g.transverse_axes(), Direction::Inverse);
  r.lhs_b = aggregate_sobolev(g, BlockFunctional::Lt1Lx2, s - 0.5, sprime).total;
  r.rhs_b = rt * Fu * aggregate_sobolev(u2, BlockFunctional::FN, s, sprime).total;
  r.ratio_a = r.rhs_a > 0.0 ? r.lhs_a / r.rhs_a : 0.0;
  r.ratio_b = r.rhs_b > 0.0 ? r.lhs_b / r.rhs_b : 0.0;
  return r;
}

std::string bilinear_csv(const std::vector<BilinearReport>& reports, const std::vector<std::string>& fit_rows) {
  std::string out = "which,case,d,N,N1,N2,trial,lhs,rhs,ratio\n";
  for (const auto& rep : reports) {
    const auto& c = rep.c;
    const std::string head = std::string(which_name(c.which)) + "," + regime_name(c.regime) + "," +
                             std::to_string(c.d) + "," + format_double(c.N) + "," + format_double(c.N1) + "," +
                             format_double(c.N2) + ",";
    for (const auto& r : rep.rows)
      out += head + r.trial + "," + format_double(r.lhs) + "," + format_double(r.rhs) + "," + format_double(r.ratio) +
             "\n";
  }
  for (const auto& f : fit_rows) out += f + "\n";
  return out;
}

}  // namespace dzak
