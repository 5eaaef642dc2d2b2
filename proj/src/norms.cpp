#include "dzak/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "dzak/bumps.hpp"
#include "dzak/error.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/projections.hpp"
#include "dzak/transform.hpp"

namespace dzak {
namespace {

void require_physical(const Field& f, const char* what) {
  for (std::size_t k = 0; k < f.rank(); ++k)
    require(!f.spectral(k), ErrorDomain::Spectral, errc::representation,
            std::string(what) + ": field must be in physical representation");
}

std::vector<std::size_t> without(const std::vector<std::size_t>& all, std::size_t a) {
  std::vector<std::size_t> out;
  for (auto k : all)
    if (k != a) out.push_back(k);
  return out;
}

// Spatial-then-time iterated norm L^pt_t L^px_x.
double lt_lx(const Field& f, double pt, double px) {
  if (!f.has_time()) return lp_norm(f, px);
  return lp_norm(f, {{f.spatial_axes(), px}, {{0}, pt}});
}

double log_weight(int d, double N) {
  if (d >= 4) return std::pow(N, -(d - 2) / 2.0);
  return 1.0 / (std::log(N) * std::sqrt(N));
}

}  // namespace

double mixed_directional_norm(const TimeSlab& u, std::size_t j, double p, double q) {
  require(p >= 1.0 && q >= 1.0, ErrorDomain::Spectral, errc::precondition, "L_e^{p,q}: exponents must be >= 1");
  require(!u.has_distinguished(), ErrorDomain::Spectral, errc::representation,
          "L_e^{p,q}: field must live on (time, transverse axes)");
  require_physical(u, "L_e^{p,q}");
  const auto tr = u.transverse_axes();
  require(j < tr.size(), ErrorDomain::Spectral, errc::precondition, "L_e^{p,q}: direction out of range");
  const std::size_t a = tr[j];
  return lp_norm(u, {{without(u.all_axes(), a), q}, {{a}, p}});
}

double mixed_directional_norm(const TimeSlab& u, const std::vector<double>& e, double p, double q) {
  const auto tr = u.transverse_axes();
  require(e.size() == tr.size(), ErrorDomain::Spectral, errc::precondition, "L_e^{p,q}: direction has wrong dimension");
  double n2 = 0.0;
  for (double v : e) n2 += v * v;
  require(std::abs(n2 - 1.0) <= 1e-12, ErrorDomain::Spectral, errc::precondition, "L_e^{p,q}: direction is not a unit vector");
  for (std::size_t j = 0; j < e.size(); ++j)
    if (std::abs(std::abs(e[j]) - 1.0) <= 1e-15) return mixed_directional_norm(u, j, p, q);
  require(p >= 1.0 && q >= 1.0, ErrorDomain::Spectral, errc::precondition, "L_e^{p,q}: exponents must be >= 1");
  require(!u.has_distinguished(), ErrorDomain::Spectral, errc::representation,
          "L_e^{p,q}: field must live on (time, transverse axes)");
  require_physical(u, "L_e^{p,q}");

  const std::size_t m = tr.size();
  // Orthonormal frame: e first, then Gram-Schmidt over the standard basis.
  std::vector<std::vector<double>> frame{e};
  for (std::size_t c = 0; c < m && frame.size() < m; ++c) {
    std::vector<double> v(m, 0.0);
    v[c] = 1.0;
    for (const auto& b : frame) {
      double dot = 0.0;
      for (std::size_t k = 0; k < m; ++k) dot += v[k] * b[k];
      for (std::size_t k = 0; k < m; ++k) v[k] -= dot * b[k];
    }
    double nv = 0.0;
    for (double x : v) nv += x * x;
    if (nv < 1e-6) continue;
    for (double& x : v) x /= std::sqrt(nv);
    frame.push_back(v);
  }
  double h = kInf, R2 = 0.0;
  for (auto a : tr) {
    h = std::min(h, u.spacing(a));
    R2 += 0.25 * u.axes()[a].length * u.axes()[a].length;
  }
  const std::size_t K = static_cast<std::size_t>(std::ceil(std::sqrt(R2) / h));
  const std::size_t n = 2 * K + 1;

  std::vector<Axis> ax;
  if (u.has_time()) ax.push_back(u.axes()[0]);
  for (std::size_t k = 0; k < m; ++k) ax.push_back({AxisRole::Transverse, n, static_cast<double>(n) * h});
  Field r(std::move(ax), u.t0());
  const std::size_t S = r.spatial_size(), Su = u.spatial_size();

  std::vector<std::size_t> idx(m, 0);
  std::vector<double> y(m), frac(m);
  std::vector<long> base(m);
  for (std::size_t i = 0; i < S; ++i) {
    bool inside = true;
    for (std::size_t k = 0; k < m; ++k) {
      y[k] = 0.0;
      for (std::size_t c = 0; c < m; ++c)
        y[k] += (static_cast<double>(idx[c]) - static_cast<double>(K)) * h * frame[c][k];
      const double Lk = u.axes()[tr[k]].length;
      if (y[k] < -0.5 * Lk || y[k] >= 0.5 * Lk) inside = false;
      const double s = y[k] / u.spacing(tr[k]);
      const double fl = std::floor(s);
      base[k] = static_cast<long>(fl);
      frac[k] = s - fl;
    }
    if (inside) {
      for (std::size_t corner = 0; corner < (1u << m); ++corner) {
        double w = 1.0;
        std::size_t off = 0;
        for (std::size_t k = 0; k < m; ++k) {
          const bool up = (corner >> k) & 1u;
          w *= up ? frac[k] : 1.0 - frac[k];
          const long nk = static_cast<long>(u.extent(tr[k]));
          const long jk = ((base[k] + (up ? 1 : 0)) % nk + nk) % nk;
          off += static_cast<std::size_t>(jk) * u.stride(tr[k]);
        }
        if (w == 0.0) continue;
        for (std::size_t t = 0; t < r.time_count(); ++t) r[t * S + i] += w * u[t * Su + off];
      }
    }
    for (std::size_t k = m; k-- > 0;) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
  }
  const std::size_t ra = r.transverse_axes()[0];
  return lp_norm(r, {{without(r.all_axes(), ra), q}, {{ra}, p}});
}

double annulus_leakage(const Field& f, double N) {
  std::vector<std::size_t> fwd;
  for (auto a : f.transverse_axes())
    if (!f.spectral(a)) fwd.push_back(a);
  const Field F = transform(f, fwd, Direction::Forward);
  const auto xi2 = transverse_freq_sq(F);
  const std::size_t S = F.spatial_size();
  double out = 0.0, all = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double w = std::norm(F[i]);
    all += w;
    if (eta_n(N, std::sqrt(xi2[i % S])) == 0.0) out += w;
  }
  return all > 0.0 ? out / all : 0.0;
}

namespace {
void check_support(const Field& f, double N, const BlockNormOptions& opt, const char* what) {
  if (!opt.check_support) return;
  const double leak = annulus_leakage(f, N);
  require(leak <= opt.support_tol, ErrorDomain::Spectral, errc::support,
          std::string(what) + ": data not supported in the annulus N=" + format_double(N) +
              " (leakage " + format_double(leak) + ")");
}
}  // namespace

NormReport fn_norm(const TimeSlab& f, double N, const BlockNormOptions& opt) {
  require(is_dyadic(N), ErrorDomain::Spectral, errc::precondition, "F_N: N must be dyadic");
  require(!f.has_distinguished(), ErrorDomain::Spectral, errc::representation,
          "F_N: field must live on (time, transverse axes)");
  require_physical(f, "F_N");
  const auto tr = f.transverse_axes();
  const int d = static_cast<int>(tr.size()) + 1;
  require(d >= 3, ErrorDomain::Spectral, errc::precondition, "F_N is defined for d >= 3");
  check_support(f, N, opt, "F_N");

  NormReport rep;
  rep.name = "FN";
  rep.aggregation = Aggregation::Sum;
  auto add = [&](const std::string& kind, double L, double v) { rep.blocks.push_back({kind, N, 0.0, L, v}); };
  add("FN:linf_l2", 0.0, lt_lx(f, kInf, 2.0));
  add("FN:strichartz", 0.0, lp_norm(f, strichartz_exponent(d - 1)));
  const double wmax = N > 1.0 ? log_weight(d, N) : 1.0;
  for (std::size_t j = 0; j < tr.size(); ++j)
    add("FN:maximal", static_cast<double>(j + 1), wmax * mixed_directional_norm(f, j, 2.0, kInf));
  if (N > 1.0) {
    for (std::size_t j = 0; j < tr.size(); ++j) {
      const Field pj = apply_projection({ProjKind::Directional, N, 1, 1, j}, f);
      add("FN:smoothing", static_cast<double>(j + 1), std::sqrt(N) * mixed_directional_norm(pj, j, kInf, 2.0));
    }
  }
  rep.total = rep.reaggregate();
  return rep;
}

NormReport gn_norm(const TimeSlab& g, double N, const GnOptions& opt) {
  require(is_dyadic(N), ErrorDomain::Spectral, errc::precondition, "G_N: N must be dyadic");
  require(!g.has_distinguished(), ErrorDomain::Spectral, errc::representation,
          "G_N: field must live on (time, transverse axes)");
  require_physical(g, "G_N");
  const auto tr = g.transverse_axes();
  const int d = static_cast<int>(tr.size()) + 1;
  require(d >= 3, ErrorDomain::Spectral, errc::precondition, "G_N is defined for d >= 3");
  check_support(g, N, opt, "G_N");
  const double pd = strichartz_exponent(d - 1);
  const double pdual = pd / (pd - 1.0);

  NormReport rep;
  rep.name = "GN";
  rep.aggregation = Aggregation::Min;
  if (N == 1.0) {
    rep.blocks.push_back({"GN:flat", N, 0.0, 0.0, lp_norm(g, pdual)});
    rep.total = rep.blocks[0].contribution;
    rep.witness = "flat";
    return rep;
  }
  auto term1 = [&](const Field& x) { return lp_norm(x, pdual); };
  auto term2 = [&](const Field& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < tr.size(); ++j) s += mixed_directional_norm(x, j, 1.0, 2.0);
    return s / std::sqrt(N);
  };
  std::string best_witness;
  double best = kInf;
  auto candidate = [&](const std::string& kind, double lambda, double t1, double t2) {
    const double v = t1 + t2;
    rep.blocks.push_back({kind, N, 0.0, lambda, v});
    if (v < best) {
      best = v;
      best_witness = kind + ";lambda=" + format_double(lambda) + ";term1=" + format_double(t1) +
                     ";term2=" + format_double(t2);
    }
  };
  const bool family = opt.strategy == GnStrategy::BestOfFamily;
  if (opt.strategy == GnStrategy::Pure1 || family) candidate("GN:pure1", 0.0, term1(g), 0.0);
  if (opt.strategy == GnStrategy::Pure2 || family) candidate("GN:pure2", 0.0, 0.0, term2(g));
  if ((opt.strategy == GnStrategy::ModulationSplit || family) && g.has_time()) {
    const Field G = transform(g, g.all_axes(), Direction::Forward);
    const auto xi2 = transverse_freq_sq(G);
    const std::size_t S = G.spatial_size();
    double max_mod = 0.0;
    for (std::size_t t = 0; t < G.time_count(); ++t)
      for (std::size_t i = 0; i < S; ++i)
        max_mod = std::max(max_mod, std::abs(G.freq(0, t) + xi2[i] + opt.modulation_offset));
    std::vector<double> lambdas;
    if (family) {
      for (double lam = 0.25; lam < 2.0 * max_mod; lam *= 2.0) lambdas.push_back(lam);
    } else {
      lambdas.push_back(opt.lambda);
    }
    for (double lam : lambdas) {
      Field low = G;
      for (std::size_t t = 0; t < G.time_count(); ++t) {
        const double tau = G.freq(0, t);
        for (std::size_t i = 0; i < S; ++i) low[t * S + i] *= eta((tau + xi2[i] + opt.modulation_offset) / lam);
      }
      transform_inplace(low, low.all_axes(), Direction::Inverse);
      const Field high = g - low;
      candidate("GN:split-high", lam, term1(high), term2(low));
      if (family) candidate("GN:split-low", lam, term1(low), term2(high));
    }
  }
  rep.total = best;
  rep.witness = best_witness;
  return rep;
}

double hss_norm(const Field& f, double s, double sprime) {
  require(!f.has_time(), ErrorDomain::Spectral, errc::representation, "H^{s,s'}: spatial field expected");
  std::vector<std::size_t> fwd;
  for (auto a : f.spatial_axes())
    if (!f.spectral(a)) fwd.push_back(a);
  const Field F = transform(f, fwd, Direction::Forward);
  const auto xi2 = transverse_freq_sq(F);
  const auto xid = distinguished_freq(F);
  double acc = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double w = std::pow(1.0 + xi2[i], s) * std::pow(1.0 + xid[i] * xid[i], sprime);
    acc += w * std::norm(F[i]);
  }
  return std::sqrt(acc * F.cell_volume());
}

NormReport aggregate_sobolev(const TimeSlab& u, BlockFunctional block, double s, double sprime,
                             const AggregateOptions& opt) {
  require(u.has_time() && u.has_distinguished(), ErrorDomain::Spectral, errc::representation,
          "aggregate norm: field must live on (time, transverse axes, x_d)");
  require_physical(u, "aggregate norm");
  const auto tr = u.transverse_axes();
  const std::size_t dax = u.distinguished_axis();

  // Unresolved tail check on the spatial spectrum.
  const Field full = transform(u, u.spatial_axes(), Direction::Forward);
  {
    const auto sp = full.spatial_axes();
    std::vector<std::size_t> idx(sp.size(), 0);
    const std::size_t S = full.spatial_size();
    std::vector<bool> tail(S, false);
    for (std::size_t i = 0; i < S; ++i) {
      for (std::size_t a = 0; a < sp.size(); ++a) {
        const long m = signed_index(idx[a], full.extent(sp[a]));
        if (std::abs(m) > static_cast<long>(full.extent(sp[a]) / 4)) tail[i] = true;
      }
      for (std::size_t a = sp.size(); a-- > 0;) {
        if (++idx[a] < full.extent(sp[a])) break;
        idx[a] = 0;
      }
    }
    double hi = 0.0, all = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
      const double w = std::norm(full[i]);
      all += w;
      if (tail[i % S]) hi += w;
    }
    require(all == 0.0 || hi / all <= opt.tail_tol, ErrorDomain::Spectral, errc::support,
            "aggregate norm: unresolved mass above half the Nyquist frequency");
  }

  const Field U = transform(u, {dax}, Direction::Forward);
  const std::size_t nd = U.extent(dax);
  // Layout of one x_d-frequency slice: (time, transverse).
  std::vector<Axis> sax(U.axes().begin(), U.axes().end() - 1);
  Field slab_tmpl(sax, U.t0());
  const std::size_t slab_size = slab_tmpl.size();
  const auto xi2 = transverse_freq_sq(slab_tmpl);
  double max_xi = 0.0;
  for (double v : xi2) max_xi = std::max(max_xi, std::sqrt(v));
  double max_xd = 0.0;
  for (std::size_t k = 0; k < nd; ++k) max_xd = std::max(max_xd, std::abs(U.freq(dax, k)));
  std::vector<double> Ns, Ms;
  for (double N = 1.0; N / 2.0 < max_xi || N == 1.0; N *= 2.0) Ns.push_back(N);
  for (double M = 1.0; M / 2.0 < max_xd || M == 1.0; M *= 2.0) Ms.push_back(M);

  // b[n][k]: block functional of P_N (F_{x_d} u)(xi_d = bin k).
  std::vector<std::vector<double>> b(Ns.size(), std::vector<double>(nd, 0.0));
  const std::size_t S = slab_tmpl.spatial_size();
  for (std::size_t k = 0; k < nd; ++k) {
    Field g = slab_tmpl;
    double e = 0.0;
    for (std::size_t i = 0; i < slab_size; ++i) {
      g[i] = U[i * nd + k];
      e += std::norm(g[i]);
    }
    if (e == 0.0) continue;
    const Field G = transform(g, tr, Direction::Forward);
    for (std::size_t n = 0; n < Ns.size(); ++n) {
      Field h = G;
      double he = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] *= eta_n(Ns[n], std::sqrt(xi2[i % S]));
        he += std::norm(h[i]);
      }
      if (he == 0.0) continue;
      transform_inplace(h, tr, Direction::Inverse);
      BlockNormOptions bo;
      bo.check_support = false;
      switch (block) {
        case BlockFunctional::FN:
          b[n][k] = fn_norm(h, Ns[n], bo).total;
          break;
        case BlockFunctional::LtInfLx2:
          b[n][k] = lt_lx(h, kInf, 2.0);
          break;
        case BlockFunctional::Lt1Lx2:
          b[n][k] = lt_lx(h, 1.0, 2.0);
          break;
        case BlockFunctional::GN: {
          GnOptions go;
          go.check_support = false;
          go.strategy = opt.gn_strategy;
          go.modulation_offset = U.freq(dax, k);
          b[n][k] = gn_norm(h, Ns[n], go).total;
          break;
        }
      }
    }
  }

  static const char* names[] = {"agg:FN", "agg:LtInfLx2", "agg:GN", "agg:Lt1Lx2"};
  NormReport rep;
  rep.name = names[static_cast<int>(block)];
  rep.aggregation = Aggregation::L2;
  const double dxd = U.spacing(dax);
  for (std::size_t n = 0; n < Ns.size(); ++n) {
    for (double M : Ms) {
      double acc = 0.0;
      for (std::size_t k = 0; k < nd; ++k) {
        const double w = eta_n(M, U.freq(dax, k)) * b[n][k];
        acc += w * w;
      }
      const double c = std::pow(Ns[n], s) * std::pow(M, sprime) * std::sqrt(acc * dxd);
      if (c > 0.0) rep.blocks.push_back({rep.name, Ns[n], M, 0.0, c});
    }
  }
  rep.total = rep.reaggregate();
  return rep;
}

NormReport restriction_norm(const Field& u, RestrictionFamily family, double s, double sprime, double b, double p,
                            bool from_one) {
  require(p >= 1.0, ErrorDomain::Spectral, errc::precondition, "restriction norm: p < 1");
  require(u.size() > 0, ErrorDomain::Spectral, errc::precondition, "restriction norm: empty lattice");
  require(u.has_time() && u.has_distinguished() && u.repr() == Repr::FrequencyFull, ErrorDomain::Spectral,
          errc::representation, "restriction norm: expects space-time frequency samples on (tau, xi, xi_d)");
  const auto xi2 = transverse_freq_sq(u);
  const auto xid = distinguished_freq(u);
  const std::size_t S = u.spatial_size();
  std::map<std::tuple<double, double, double>, double> acc;
  for (std::size_t t = 0; t < u.time_count(); ++t) {
    const double tau = u.freq(0, t);
    for (std::size_t i = 0; i < S; ++i) {
      const double w = std::norm(u[t * S + i]);
      if (w == 0.0) continue;
      const double r = std::sqrt(xi2[i]);
      double mod = 0.0;
      switch (family) {
        case RestrictionFamily::E: mod = tau + xi2[i] + xid[i]; break;
        case RestrictionFamily::WPlus: mod = tau + r; break;
        case RestrictionFamily::WMinus: mod = tau - r; break;
      }
      const auto pn = dyadic_pieces(r), pm = dyadic_pieces(xid[i]), pl = dyadic_pieces(mod);
      for (int a = 0; a < pn.count; ++a)
        for (int c = 0; c < pm.count; ++c)
          for (int e = 0; e < pl.count; ++e) {
            const double m = pn.piece[a].second * pm.piece[c].second * pl.piece[e].second;
            acc[{pn.piece[a].first, pm.piece[c].first, pl.piece[e].first}] += m * m * w;
          }
    }
  }
  NormReport rep;
  rep.name = family == RestrictionFamily::E ? "XE" : (family == RestrictionFamily::WPlus ? "XW+" : "XW-");
  rep.aggregation = Aggregation::L2OverLp;
  rep.p = p;
  const double cell = u.cell_volume();
  for (const auto& [key, v] : acc) {
    const auto [N, M, L] = key;
    if (!from_one && (N == 1.0 || M == 1.0 || L == 1.0)) continue;
    const double c = std::pow(N, s) * std::pow(M, sprime) * std::pow(L, b) * std::sqrt(v * cell);
    rep.blocks.push_back({rep.name, N, M, L, c});
  }
  rep.total = rep.reaggregate();
  return rep;
}

}  // namespace dzak
