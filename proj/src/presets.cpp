#include "dzak/presets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dzak/bumps.hpp"
#include "dzak/error.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/rng.hpp"
#include "dzak/transform.hpp"

namespace dzak {

double transverse_nyquist(const Field& f) {
  double ny = kInf;
  for (auto a : f.transverse_axes())
    ny = std::min(ny, std::numbers::pi * static_cast<double>(f.extent(a)) / f.axes()[a].length);
  return ny;
}

namespace {

template <class Fn>
void fill_physical(Field& out, Fn&& value_at) {
  const auto sp = out.spatial_axes();
  std::vector<std::size_t> idx(sp.size(), 0);
  std::vector<double> x(sp.size());
  const std::size_t S = out.spatial_size();
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t a = 0; a < sp.size(); ++a) x[a] = out.coord(sp[a], idx[a]);
    const cplx v = value_at(x);
    for (std::size_t t = 0; t < out.time_count(); ++t) out[t * S + i] = v;
    for (std::size_t a = sp.size(); a-- > 0;) {
      if (++idx[a] < out.extent(sp[a])) break;
      idx[a] = 0;
    }
  }
}

double dist2(const std::vector<double>& x, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double d = x[a] - (c.empty() ? 0.0 : c[a]);
    s += d * d;
  }
  return s;
}

void check_center(const std::vector<double>& c, std::size_t dims) {
  require(c.empty() || c.size() == dims, ErrorDomain::Spectral, errc::precondition,
          "preset center has wrong dimension");
}

}  // namespace

Field sample_function(const Field& tmpl, const Descriptor& desc) {
  Field out(tmpl.axes(), tmpl.t0());
  const std::size_t dims = out.spatial_axes().size();

  if (const auto* g = std::get_if<preset::Gaussian>(&desc)) {
    check_center(g->center, dims);
    require(g->sigma > 0.0, ErrorDomain::Spectral, errc::precondition, "Gaussian sigma must be positive");
    const double inv = 1.0 / (2.0 * g->sigma * g->sigma);
    fill_physical(out, [&](const std::vector<double>& x) { return cplx(g->amplitude * std::exp(-dist2(x, g->center) * inv)); });
    return out;
  }

  if (const auto* w = std::get_if<preset::WavePacket>(&desc)) {
    check_center(w->center, dims);
    require(w->k.size() == dims && w->sigma > 0.0, ErrorDomain::Spectral, errc::precondition,
            "wave packet needs one wave number per spatial axis and sigma > 0");
    const auto sp = out.spatial_axes();
    for (std::size_t a = 0; a < dims; ++a) {
      const double ny = std::numbers::pi * static_cast<double>(out.extent(sp[a])) / out.axes()[sp[a]].length;
      require(std::abs(w->k[a]) + 4.0 / w->sigma < ny, ErrorDomain::Spectral, errc::bandwidth,
              "wave packet bandwidth exceeds Nyquist on axis " + std::to_string(a));
    }
    const double inv = 1.0 / (2.0 * w->sigma * w->sigma);
    fill_physical(out, [&](const std::vector<double>& x) {
      double ph = 0.0;
      for (std::size_t a = 0; a < dims; ++a) ph += w->k[a] * (x[a] - (w->center.empty() ? 0.0 : w->center[a]));
      return w->amplitude * std::exp(-dist2(x, w->center) * inv) * cplx(std::cos(ph), std::sin(ph));
    });
    return out;
  }

  const auto& b = std::get<preset::BandLimitedRandom>(desc);
  require(b.N >= 1.0, ErrorDomain::Spectral, errc::precondition, "annulus index must be >= 1");
  require(2.0 * b.N < transverse_nyquist(out), ErrorDomain::Spectral, errc::bandwidth,
          "annulus N=" + std::to_string(b.N) + " exceeds Nyquist");
  require(!out.has_time(), ErrorDomain::Spectral, errc::precondition, "random preset is spatial only");
  for (auto a : out.spatial_axes()) out.set_spectral(a, true);
  const auto xi2 = transverse_freq_sq(out);
  const auto xid = distinguished_freq(out);
  Rng rng(b.seed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double re = rng.normal(), im = rng.normal();
    double w = eta_n(b.N, std::sqrt(xi2[i]));
    if (out.has_distinguished()) w *= std::exp(-0.5 * xid[i] * xid[i] * b.xd_width * b.xd_width);
    out[i] = w * cplx(re, im);
  }
  transform_inplace(out, out.spatial_axes(), Direction::Inverse);
  const double nrm = l2_norm(out);
  if (nrm > 0.0)
    for (auto& v : out.data()) v /= nrm;
  return out;
}

}  // namespace dzak
