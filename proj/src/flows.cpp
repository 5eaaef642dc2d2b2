#include "dzak/flows.hpp"

#include <cmath>

#include "dzak/error.hpp"
#include "dzak/transform.hpp"

namespace dzak {

std::vector<double> flow_rate(FlowKind kind, const Field& f) {
  auto w = transverse_freq_sq(f);
  switch (kind) {
    case FlowKind::SchrodingerTransverse:
      for (auto& v : w) v = -v;
      break;
    case FlowKind::TransportedSchrodinger: {
      const auto xd = distinguished_freq(f);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = -(w[i] + xd[i]);
      break;
    }
    case FlowKind::HalfWave:
      for (auto& v : w) v = std::sqrt(v);
      break;
    case FlowKind::HalfWaveConjugate:
      for (auto& v : w) v = -std::sqrt(v);
      break;
  }
  return w;
}

namespace {
std::vector<std::size_t> physical_spatial(const Field& f) {
  std::vector<std::size_t> out;
  for (auto a : f.spatial_axes())
    if (!f.spectral(a)) out.push_back(a);
  return out;
}

void check_input(FlowKind kind, const Field& f) {
  require(!f.has_time(), ErrorDomain::Verification, errc::representation, "flows act on spatial fields");
  require(!f.transverse_axes().empty(), ErrorDomain::Verification, errc::representation,
          "flows need transverse axes");
  if (kind == FlowKind::TransportedSchrodinger)
    require(f.has_distinguished(), ErrorDomain::Verification, errc::representation,
            "the transported flow needs the x_d axis");
}
}  // namespace

Field apply_flow(FlowKind kind, double t, const Field& f) {
  check_input(kind, f);
  const auto fwd = physical_spatial(f);
  Field g = transform(f, fwd, Direction::Forward);
  const auto w = flow_rate(kind, g);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= std::polar(1.0, t * w[i]);
  transform_inplace(g, fwd, Direction::Inverse);
  return g;
}

TimeSlab evolve_slab(FlowKind kind, const Field& f0, std::size_t nt, double t0, double dt) {
  check_input(kind, f0);
  const auto fwd = physical_spatial(f0);
  const Field F = transform(f0, fwd, Direction::Forward);
  const auto w = flow_rate(kind, F);
  TimeSlab out = make_slab(f0, nt, t0, dt);
  Field g = F;
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = out.time_at(k);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = F[i] * std::polar(1.0, t * w[i]);
    Field h = transform(g, fwd, Direction::Inverse);
    set_slice(out, k, h);
  }
  return out;
}

TimeSlab duhamel(const TimeSlab& source, FlowKind kind) {
  require(source.has_time() && source.time_count() >= 3, ErrorDomain::Verification, errc::precondition,
          "Duhamel integral needs a slab with at least 3 time samples");
  const double dt = source.dt();
  const double k0f = -source.t0() / dt;
  const long k0 = std::lround(k0f);
  require(std::abs(k0f - static_cast<double>(k0)) < 1e-9 && k0 >= 0 &&
              k0 < static_cast<long>(source.time_count()),
          ErrorDomain::Verification, errc::precondition, "Duhamel integral: t = 0 must be a sample time");
  const Field tmpl = slice(source, 0);
  check_input(kind, tmpl);
  const auto fwd = physical_spatial(tmpl);
  const auto w = flow_rate(kind, transform(tmpl, fwd, Direction::Forward));
  const std::size_t S = tmpl.size();
  const std::size_t nt = source.time_count();

  // Pulled-back source flow(-s) S_hat(s), sample by sample.
  auto pulled = [&](std::size_t k) {
    Field s = transform(slice(source, k), fwd, Direction::Forward);
    const double t = source.time_at(k);
    for (std::size_t i = 0; i < S; ++i) s[i] *= std::polar(1.0, -t * w[i]);
    return s;
  };
  TimeSlab out = make_slab(tmpl, nt, source.t0(), dt);
  auto emit = [&](std::size_t k, const Field& acc) {
    Field g = acc;
    const double t = source.time_at(k);
    for (std::size_t i = 0; i < S; ++i) g[i] *= std::polar(1.0, t * w[i]);
    transform_inplace(g, fwd, Direction::Inverse);
    set_slice(out, k, g);
  };
  const std::size_t z = static_cast<std::size_t>(k0);
  const Field p0 = pulled(z);
  Field acc = p0;
  for (auto& v : acc.data()) v = 0.0;
  emit(z, acc);
  Field prev = p0;
  for (std::size_t k = z + 1; k < nt; ++k) {
    Field cur = pulled(k);
    for (std::size_t i = 0; i < S; ++i) acc[i] += 0.5 * dt * (prev[i] + cur[i]);
    emit(k, acc);
    prev = std::move(cur);
  }
  for (auto& v : acc.data()) v = 0.0;
  prev = p0;
  for (std::size_t k = z; k-- > 0;) {
    Field cur = pulled(k);
    for (std::size_t i = 0; i < S; ++i) acc[i] -= 0.5 * dt * (prev[i] + cur[i]);
    emit(k, acc);
    prev = std::move(cur);
  }
  return out;
}

}  // namespace dzak
