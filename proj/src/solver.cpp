#include "dzak/solver.hpp"

#include <cmath>
#include <limits>

#include "dzak/error.hpp"
#include "dzak/flows.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/norm_report.hpp"
#include "dzak/norms.hpp"
#include "dzak/presets.hpp"
#include "dzak/transform.hpp"

namespace dzak {

namespace {

void require_spatial(const Field& f, const char* what) {
  require(!f.has_time() && f.has_distinguished() && f.transverse_count() >= 1, ErrorDomain::Solver,
          errc::representation, std::string(what) + ": expected a field on (transverse axes, x_d)");
  for (auto a : f.spatial_axes())
    require(!f.spectral(a), ErrorDomain::Solver, errc::representation, std::string(what) + ": expected physical data");
}

std::vector<double> grad_abs(const Field& f) {
  auto w = transverse_freq_sq(f);
  for (auto& v : w) v = std::sqrt(v);
  return w;
}

// 1 inside the 2/3-rule band on every spatial axis, 0 outside.
std::vector<double> dealias_mask(const Field& f) {
  const auto sp = f.spatial_axes();
  std::vector<double> m(f.spatial_size(), 1.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t a = sp.size(); a-- > 0;) {
      const std::size_t n = f.extent(sp[a]);
      const std::size_t j = rem % n;
      rem /= n;
      if (3 * static_cast<std::size_t>(std::abs(signed_index(j, n))) > n) m[i] = 0.0;
    }
  }
  return m;
}

bool all_finite(const Field& f) {
  for (const auto& v : f.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// Cached multipliers for stepping with a fixed dt.
class Stepper {
 public:
  Stepper(const Field& tmpl, double dt, const SolveConfig& cfg) : dt_(dt), cfg_(cfg) {
    Field F = transform(tmpl, tmpl.spatial_axes(), Direction::Forward);
    const auto wE = flow_rate(FlowKind::TransportedSchrodinger, F);
    const auto wN = flow_rate(FlowKind::HalfWave, F);
    half_E_.resize(F.size());
    half_N_.resize(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
      half_E_[i] = std::polar(1.0, 0.5 * dt * wE[i]);
      half_N_[i] = std::polar(1.0, 0.5 * dt * wN[i]);
    }
    force_ = grad_abs(F);
    if (cfg.dealias) {
      const auto m = dealias_mask(F);
      for (std::size_t i = 0; i < force_.size(); ++i) force_[i] *= m[i];
    }
  }

  void step(SystemState& st) const {
    linear(st);
    if (cfg_.coupling != 0.0) {
      if (cfg_.nonlinearity == Nonlinearity::RealPart) {
        // Re(Nd) and |E| are invariant under the nonlinear substep, which is therefore exact.
        Field forcing = density_forcing(st.E);
        const double c = cfg_.coupling;
        for (std::size_t i = 0; i < st.E.size(); ++i) st.E[i] *= std::polar(1.0, -dt_ * c * st.Nd[i].real());
        axpy(cplx(0.0, dt_ * c), forcing, st.Nd);
      } else {
        rotate_dropped(st, 0.5 * dt_);
        axpy(cplx(0.0, dt_ * cfg_.coupling), density_forcing(st.E), st.Nd);
        rotate_dropped(st, 0.5 * dt_);
      }
    }
    linear(st);
    st.time += dt_;
    require(all_finite(st.E) && all_finite(st.Nd), ErrorDomain::Solver, errc::numerical,
            "non-finite values at t=" + std::to_string(st.time));
  }

  // |grad'| (|E|^2), dealiased, in physical space.
  Field density_forcing(const Field& E) const {
    Field g = E;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::norm(E[i]);
    transform_inplace(g, g.spatial_axes(), Direction::Forward);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= force_[i];
    transform_inplace(g, g.spatial_axes(), Direction::Inverse);
    return g;
  }

 private:
  void linear(SystemState& st) const {
    const auto sp = st.E.spatial_axes();
    transform_inplace(st.E, sp, Direction::Forward);
    transform_inplace(st.Nd, sp, Direction::Forward);
    for (std::size_t i = 0; i < st.E.size(); ++i) {
      st.E[i] *= half_E_[i];
      st.Nd[i] *= half_N_[i];
    }
    transform_inplace(st.E, sp, Direction::Inverse);
    transform_inplace(st.Nd, sp, Direction::Inverse);
  }

  void rotate_dropped(SystemState& st, double tau) const {
    const cplx k(0.0, -tau * cfg_.coupling);
    for (std::size_t i = 0; i < st.E.size(); ++i) st.E[i] *= std::exp(k * st.Nd[i]);
  }

  double dt_;
  SolveConfig cfg_;
  std::vector<cplx> half_E_, half_N_;
  std::vector<double> force_;
};

void check_config(const SolveConfig& cfg) {
  require(cfg.dt > 0.0 && std::isfinite(cfg.dt), ErrorDomain::Solver, errc::precondition, "dt must be positive");
  require(cfg.t_horizon >= 0.0, ErrorDomain::Solver, errc::precondition, "time horizon must be non-negative");
  require(cfg.cadence >= 1, ErrorDomain::Solver, errc::precondition, "snapshot cadence must be >= 1");
}

std::size_t step_count(const SolveConfig& cfg) {
  const double r = cfg.t_horizon / cfg.dt;
  const auto n = static_cast<std::size_t>(std::llround(r));
  require(std::abs(r - static_cast<double>(n)) < 1e-9 * std::max(1.0, r), ErrorDomain::Solver, errc::precondition,
          "dt must divide the time horizon");
  require(n % cfg.cadence == 0, ErrorDomain::Solver, errc::precondition, "cadence must divide the step count");
  return n;
}

}  // namespace

SystemState init_state(const Field& E0, const Field& n0, const Field& n1, double s, double sprime) {
  require_spatial(E0, "E0");
  require_spatial(n0, "n0");
  require_spatial(n1, "n1");
  require(E0.same_shape(n0) && E0.same_shape(n1), ErrorDomain::Solver, errc::precondition,
          "E0, n0 and n1 must share the grid");
  Field N1 = transform(n1, n1.spatial_axes(), Direction::Forward);
  const auto g = grad_abs(N1);
  double zero_mass = 0.0, total = 0.0;
  for (std::size_t i = 0; i < N1.size(); ++i) {
    total += std::norm(N1[i]);
    if (g[i] == 0.0) zero_mass += std::norm(N1[i]);
  }
  require(zero_mass <= 1e-12 * total, ErrorDomain::Solver, errc::precondition,
          "n1 has mass on the transverse zero frequency, so |grad'|^{-1} n1 is undefined");
  Field Nd = transform(n0, n0.spatial_axes(), Direction::Forward);
  for (std::size_t i = 0; i < Nd.size(); ++i)
    if (g[i] > 0.0) Nd[i] -= cplx(0.0, 1.0) * N1[i] / g[i];
  transform_inplace(Nd, Nd.spatial_axes(), Direction::Inverse);
  SystemState st;
  st.E = E0;
  st.Nd = std::move(Nd);
  st.hss_E = hss_norm(st.E, s, sprime);
  st.hss_N = hss_norm(st.Nd, s - 0.5, sprime);
  return st;
}

void strang_step(SystemState& state, double dt, const SolveConfig& cfg) {
  require(dt > 0.0, ErrorDomain::Solver, errc::precondition, "dt must be positive");
  require_spatial(state.E, "E");
  require(state.E.same_shape(state.Nd), ErrorDomain::Solver, errc::precondition, "E and Nd must share the grid");
  Stepper(state.E, dt, cfg).step(state);
}

Trajectory evolve(const SystemState& state0, const SolveConfig& cfg) {
  check_config(cfg);
  require_spatial(state0.E, "E");
  require(state0.E.same_shape(state0.Nd), ErrorDomain::Solver, errc::precondition, "E and Nd must share the grid");
  const std::size_t steps = step_count(cfg);
  const std::size_t snaps = steps / cfg.cadence + 1;
  Trajectory tr;
  tr.E = make_slab(state0.E, snaps, state0.time, cfg.dt * static_cast<double>(cfg.cadence));
  tr.Nd = make_slab(state0.E, snaps, state0.time, cfg.dt * static_cast<double>(cfg.cadence));
  SystemState st = state0;
  const Stepper stepper(st.E, cfg.dt, cfg);
  auto record = [&](std::size_t k) {
    set_slice(tr.E, k, st.E);
    set_slice(tr.Nd, k, st.Nd);
    tr.diagnostics.push_back(
        {st.time, l2_norm(st.E), hss_norm(st.E, cfg.s, cfg.sprime), hss_norm(st.Nd, cfg.s - 0.5, cfg.sprime)});
  };
  record(0);
  for (std::size_t n = 1; n <= steps; ++n) {
    stepper.step(st);
    // Accumulated dt drifts; pin the clock to the lattice.
    st.time = state0.time + static_cast<double>(n) * cfg.dt;
    if (n % cfg.cadence == 0) record(n / cfg.cadence);
  }
  tr.final_state = std::move(st);
  return tr;
}

std::string Trajectory::diagnostics_csv() const {
  std::string out = "t,l2_E,hss_E,hss_N\n";
  for (const auto& r : diagnostics)
    out += format_double(r.t) + "," + format_double(r.l2_E) + "," + format_double(r.hss_E) + "," +
           format_double(r.hss_N) + "\n";
  return out;
}

std::pair<Field, Field> reconstruct_n(const SystemState& state) {
  require_spatial(state.Nd, "Nd");
  Field n = state.Nd;
  Field im = state.Nd;
  for (std::size_t i = 0; i < n.size(); ++i) {
    n[i] = state.Nd[i].real();
    im[i] = state.Nd[i].imag();
  }
  transform_inplace(im, im.spatial_axes(), Direction::Forward);
  const auto g = grad_abs(im);
  for (std::size_t i = 0; i < im.size(); ++i) im[i] *= -g[i];
  transform_inplace(im, im.spatial_axes(), Direction::Inverse);
  return {std::move(n), std::move(im)};
}

PicardResult picard_iterate(const Field& E0, const Field& N0, double T, const SolveConfig& cfg,
                            const PicardOptions& opt) {
  require_spatial(E0, "E0");
  require(E0.same_shape(N0), ErrorDomain::Solver, errc::precondition, "E0 and N0 must share the grid");
  require(T > 0.0 && T <= cfg.t_horizon, ErrorDomain::Solver, errc::precondition, "Picard: need 0 < T <= t_horizon");
  require(opt.iterations >= 2, ErrorDomain::Solver, errc::precondition, "Picard: at least 2 iterations");
  require(opt.steps >= 3, ErrorDomain::Solver, errc::precondition, "Picard: at least 3 quadrature samples");
  const std::size_t nt = opt.steps;
  const double dt = T / static_cast<double>(nt - 1);
  const TimeSlab freeE = evolve_slab(FlowKind::TransportedSchrodinger, E0, nt, 0.0, dt);
  const TimeSlab freeN = evolve_slab(FlowKind::HalfWave, N0, nt, 0.0, dt);
  const Stepper forcing(E0, cfg.dt, cfg);
  const double c = cfg.coupling;

  PicardResult res;
  res.E = freeE;
  res.N = freeN;
  auto sup_l2 = [&](const TimeSlab& a) {
    double m = 0.0;
    for (std::size_t k = 0; k < nt; ++k) m = std::max(m, l2_norm(slice(a, k)));
    return m;
  };
  for (std::size_t it = 0; it < opt.iterations; ++it) {
    TimeSlab srcE = res.E, srcN = res.N;
    for (std::size_t k = 0; k < nt; ++k) {
      const Field E = slice(res.E, k);
      const Field N = slice(res.N, k);
      Field se = E;
      for (std::size_t i = 0; i < se.size(); ++i)
        se[i] = (cfg.nonlinearity == Nonlinearity::RealPart ? cplx(N[i].real(), 0.0) : N[i]) * E[i];
      set_slice(srcE, k, se);
      set_slice(srcN, k, forcing.density_forcing(E));
    }
    TimeSlab nextE = freeE;
    TimeSlab nextN = freeN;
    axpy(cplx(0.0, -c), duhamel(srcE, FlowKind::TransportedSchrodinger), nextE);
    axpy(cplx(0.0, c), duhamel(srcN, FlowKind::HalfWave), nextN);
    const TimeSlab dE = nextE - res.E;
    const TimeSlab dN = nextN - res.N;
    res.diff_E.push_back(sup_l2(dE));
    res.diff_N.push_back(sup_l2(dN));
    double fF = std::numeric_limits<double>::quiet_NaN(), fW = fF;
    if (opt.block_norms) {
      try {
        fF = aggregate_sobolev(dE, BlockFunctional::FN, cfg.s, cfg.sprime).total;
        fW = aggregate_sobolev(dN, BlockFunctional::LtInfLx2, cfg.s - 0.5, cfg.sprime).total;
      } catch (const Error&) {
        // Unresolved differences: leave NaN.
      }
    }
    res.diff_F.push_back(fF);
    res.diff_W.push_back(fW);
    const std::size_t m = res.diff_E.size();
    if (m >= 2 && (res.diff_E[m - 1] > 10.0 * res.diff_E[m - 2] || res.diff_N[m - 1] > 10.0 * res.diff_N[m - 2]))
      res.diverged = true;
    res.E = std::move(nextE);
    res.N = std::move(nextN);
  }
  return res;
}

SystemState reference_state(const GridSpec& g, double amplitude, double s, double sprime) {
  const Field tmpl = spatial_field(g);
  const std::size_t axes = tmpl.spatial_axes().size();
  std::vector<double> k(axes, 0.5), shift(axes, 0.0);
  k[0] = 1.0;
  shift[0] = 1.0;
  const Field E0 = sample_function(tmpl, preset::WavePacket{k, 2.0, amplitude, {}});
  const Field n0 = sample_function(tmpl, preset::Gaussian{2.0, amplitude, shift});
  Field H = transform(sample_function(tmpl, preset::Gaussian{1.5, amplitude, {}}), tmpl.spatial_axes(),
                      Direction::Forward);
  const auto xi2 = transverse_freq_sq(H);
  for (std::size_t i = 0; i < H.size(); ++i) H[i] *= -xi2[i];
  return init_state(E0, n0, transform(H, H.spatial_axes(), Direction::Inverse), s, sprime);
}

}  // namespace dzak
