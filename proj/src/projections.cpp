#include "dzak/projections.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dzak/bumps.hpp"
#include "dzak/error.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/presets.hpp"
#include "dzak/transform.hpp"

namespace dzak {

bool is_dyadic(double v) {
  if (!(v >= 1.0) || !std::isfinite(v)) return false;
  int e = 0;
  return std::frexp(v, &e) == 0.5;
}

double projection_symbol(const ProjectionSpec& spec, int d, const double* xi, std::size_t nxi, double xi_d,
                         double tau) {
  double r2 = 0.0;
  for (std::size_t a = 0; a < nxi; ++a) r2 += xi[a] * xi[a];
  const double r = std::sqrt(r2);
  switch (spec.kind) {
    case ProjKind::Annulus:
      return eta_n(spec.N, r);
    case ProjKind::Directional:
      return phi_n(d, spec.N, xi[spec.j]);
    case ProjKind::AnnulusXd:
      return eta_n(spec.N, r) * eta_n(spec.M, xi_d);
    case ProjKind::ModulationE:
      return eta_n(spec.L, tau + r2 + xi_d);
    case ProjKind::ModulationW:
      return eta_n(spec.L, tau + spec.sign * r);
  }
  return 0.0;
}

Field apply_projection(const ProjectionSpec& spec, const Field& f) {
  const auto bad = [](const std::string& m) { fail(ErrorDomain::Spectral, errc::representation, m); };
  const double dy[] = {spec.N, spec.M, spec.L};
  for (double v : dy)
    require(is_dyadic(v), ErrorDomain::Spectral, errc::precondition, "dyadic parameters must be powers of two");
  const auto tr = f.transverse_axes();
  if (tr.empty()) bad("projection needs transverse axes");
  if (spec.kind == ProjKind::Directional && spec.j >= tr.size()) bad("direction index out of range");
  if (spec.kind == ProjKind::AnnulusXd && !f.has_distinguished()) bad("P_{N,M} needs the x_d axis");
  const bool modulation = spec.kind == ProjKind::ModulationE || spec.kind == ProjKind::ModulationW;
  if (modulation && !f.has_time()) bad("modulation projections need a time axis");

  std::vector<std::size_t> axes = modulation ? f.all_axes() : f.spatial_axes();
  std::vector<std::size_t> to_fwd;
  for (auto a : axes)
    if (!f.spectral(a)) to_fwd.push_back(a);
  Field g = transform(f, to_fwd, Direction::Forward);

  const int d = static_cast<int>(tr.size()) + 1;
  const std::size_t S = g.spatial_size();
  // Per-sample transverse frequency vectors of one slice.
  std::vector<std::vector<double>> xi(tr.size());
  for (std::size_t a = 0; a < tr.size(); ++a) xi[a] = axis_freq(g, tr[a]);
  const auto xid = distinguished_freq(g);
  std::vector<double> sym(S);
  std::vector<double> buf(tr.size());
  for (std::size_t t = 0; t < g.time_count(); ++t) {
    const double tau = g.has_time() ? g.freq(0, t) : 0.0;
    if (t == 0 || modulation) {
      for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t a = 0; a < tr.size(); ++a) buf[a] = xi[a][i];
        sym[i] = projection_symbol(spec, d, buf.data(), buf.size(), xid[i], tau);
      }
    }
    for (std::size_t i = 0; i < S; ++i) g[t * S + i] *= sym[i];
  }
  transform_inplace(g, to_fwd, Direction::Inverse);
  return g;
}

namespace {
// Calls fn(xi vector) for every transverse lattice point of g.
template <class Fn>
void for_each_transverse_point(const GridSpec& g, Fn&& fn) {
  const std::size_t m = g.transverse_count();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> xi(m);
  std::size_t total = 1;
  for (std::size_t a = 0; a < m; ++a) total *= g.n[a];
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t a = 0; a < m; ++a) xi[a] = g.freq[a][idx[a]];
    fn(xi);
    for (std::size_t a = m; a-- > 0;) {
      if (++idx[a] < g.n[a]) break;
      idx[a] = 0;
    }
  }
}
}  // namespace

double verify_partition(const GridSpec& g) {
  double ny = kInf;
  for (std::size_t a = 0; a < g.transverse_count(); ++a)
    ny = std::min(ny, std::numbers::pi * static_cast<double>(g.n[a]) / g.box_len[a]);
  double nmax = 1.0;
  while (nmax < ny) nmax *= 2.0;
  double dev = 0.0;
  for_each_transverse_point(g, [&](const std::vector<double>& xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    const double r = std::sqrt(r2);
    if (r >= 0.5 * ny) return;
    double s = 0.0;
    for (double N = 1.0; N <= nmax; N *= 2.0) s += eta_n(N, r);
    dev = std::max(dev, std::abs(s - 1.0));
  });
  return dev;
}

double verify_decomposition_identity(double N, int d, const GridSpec& g) {
  require(is_dyadic(N) && N >= 2.0, ErrorDomain::Spectral, errc::precondition,
          "decomposition identity needs dyadic N >= 2");
  require(g.d == d, ErrorDomain::Spectral, errc::precondition, "grid dimension does not match d");
  double worst = 0.0;
  for_each_transverse_point(g, [&](const std::vector<double>& xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    if (eta_n(N, std::sqrt(r2)) <= 0.0) return;
    double prod = 1.0;
    for (double v : xi) prod *= 1.0 - phi_n(d, N, v);
    worst = std::max(worst, std::abs(prod));
  });
  return worst;
}

std::vector<Field> directional_decompose(const Field& f, double N) {
  require(is_dyadic(N) && N >= 2.0, ErrorDomain::Spectral, errc::precondition,
          "directional decomposition needs dyadic N >= 2");
  const auto tr = f.transverse_axes();
  require(!tr.empty(), ErrorDomain::Spectral, errc::representation, "field has no transverse axes");
  std::vector<std::size_t> to_fwd;
  for (auto a : f.spatial_axes())
    if (!f.spectral(a)) to_fwd.push_back(a);
  const Field base = transform(f, to_fwd, Direction::Forward);
  const int d = static_cast<int>(tr.size()) + 1;
  const std::size_t S = base.spatial_size();
  std::vector<std::vector<double>> xi(tr.size());
  for (std::size_t a = 0; a < tr.size(); ++a) xi[a] = axis_freq(base, tr[a]);
  const auto xi2 = transverse_freq_sq(base);

  std::vector<Field> out;
  std::vector<double> remaining(S);
  for (std::size_t i = 0; i < S; ++i) remaining[i] = eta_n(N, std::sqrt(xi2[i]));
  for (std::size_t j = 0; j < tr.size(); ++j) {
    Field part = base;
    for (std::size_t i = 0; i < S; ++i) {
      const double ph = phi_n(d, N, xi[j][i]);
      const double m = ph * remaining[i];
      for (std::size_t t = 0; t < part.time_count(); ++t) part[t * S + i] *= m;
      remaining[i] *= 1.0 - ph;
    }
    transform_inplace(part, to_fwd, Direction::Inverse);
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace dzak
