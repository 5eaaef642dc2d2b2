#include "dzak/run.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <json.hpp>

#include "dzak/appendix.hpp"
#include "dzak/bilinear.hpp"
#include "dzak/error.hpp"
#include "dzak/flows.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/norms.hpp"
#include "dzak/presets.hpp"
#include "dzak/projections.hpp"
#include "dzak/snapshot.hpp"
#include "dzak/solver.hpp"
#include "dzak/sweep.hpp"

#ifndef DZAK_VERSION
#define DZAK_VERSION "0.0.0"
#endif

namespace dzak {

namespace fs = std::filesystem;

const char* tool_version() { return DZAK_VERSION; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorDomain::Config, config_errc::io, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

struct Sink {
  fs::path dir;
  std::vector<Artifact> artifacts;

  void text(const std::string& name, const std::string& bytes) {
    std::ofstream f(dir / name, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(ErrorDomain::Config, config_errc::io, "cannot write " + (dir / name).string());
    artifacts.push_back({name, sha256_hex(bytes), bytes.size()});
  }

  // For files written by a module: hash what is on disk.
  void file(const std::string& name) {
    std::ifstream f(dir / name, std::ios::binary);
    if (!f) fail(ErrorDomain::Config, config_errc::io, "cannot read back " + (dir / name).string());
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    artifacts.push_back({name, sha256_hex(bytes), bytes.size()});
  }
};

using Checks = std::vector<CheckResult>;

void check_le(Checks& out, const std::string& name, double v, double bound) {
  out.push_back({name, v, "<= " + format_double(bound), v <= bound});
}

void check_ge(Checks& out, const std::string& name, double v, double bound) {
  out.push_back({name, v, ">= " + format_double(bound), v >= bound});
}

Nonlinearity nonlinearity_of(const RunConfig& c) {
  return c.get_enum("nonlinearity") == "dropped" ? Nonlinearity::Dropped : Nonlinearity::RealPart;
}

GridSpec grid_of(const RunConfig& c, double dt, double horizon) {
  const int d = static_cast<int>(c.get_int("d"));
  std::vector<std::size_t> n(static_cast<std::size_t>(d - 1), static_cast<std::size_t>(c.get_int("n")));
  std::vector<double> box(n.size(), c.get_double("box"));
  n.push_back(static_cast<std::size_t>(c.get_int("nd")));
  box.push_back(c.get_double("box_d"));
  return make_grid(d, n, box, dt, horizon);
}

double max_imag(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.data()) m = std::max(m, std::abs(v.imag()));
  return m;
}

ErrorDomain owning_domain(Command c) {
  switch (c) {
    case Command::Simulate:
    case Command::Picard: return ErrorDomain::Solver;
    case Command::VerifyLinear:
    case Command::VerifyBilinear: return ErrorDomain::Verification;
    case Command::Counterexample: return ErrorDomain::Counterexample;
    case Command::Norms: return ErrorDomain::Spectral;
  }
  return ErrorDomain::Config;
}

void run_simulate(const RunConfig& c, Sink& sink, Checks& checks) {
  const GridSpec g = grid_of(c, c.get_double("dt"), c.get_double("horizon"));
  const double s = c.get_double("s"), sp = c.get_double("sprime");
  SystemState st0;
  if (c.get_enum("data") == "zero") {
    const Field z = spatial_field(g);
    st0 = init_state(z, z, z, s, sp);
  } else {
    st0 = reference_state(g, c.get_double("amplitude"), s, sp);
  }
  SolveConfig cfg;
  cfg.dt = c.get_double("dt");
  cfg.t_horizon = c.get_double("horizon");
  cfg.cadence = static_cast<std::size_t>(c.get_int("cadence"));
  cfg.nonlinearity = nonlinearity_of(c);
  cfg.dealias = c.get_bool("dealias");
  cfg.coupling = c.get_double("coupling");
  cfg.s = s;
  cfg.sprime = sp;
  const Trajectory tr = evolve(st0, cfg);
  sink.text("diagnostics.csv", tr.diagnostics_csv());
  if (c.get_bool("snapshot")) {
    write_snapshot((sink.dir / "final_state.dzk").string(), tr.final_state);
    sink.file("final_state.dzk");
  }

  const double l0 = tr.diagnostics.front().l2_E;
  if (c.get_enum("data") == "zero") {
    double m = std::max(max_abs(tr.final_state.E), max_abs(tr.final_state.Nd));
    for (const auto& r : tr.diagnostics) m = std::max(m, r.l2_E);
    check_le(checks, "zero_trajectory", m, 0.0);
  } else if (cfg.nonlinearity == Nonlinearity::RealPart) {
    double drift = 0.0;
    for (const auto& r : tr.diagnostics) drift = std::max(drift, std::abs(r.l2_E - l0) / l0);
    check_le(checks, "l2_drift", drift, c.get_double("drift_tol"));
  }
  const auto [n, nt] = reconstruct_n(tr.final_state);
  check_le(checks, "n_imag", std::max(max_imag(n), max_imag(nt)), 1e-10);
}

void run_picard(const RunConfig& c, Sink& sink, Checks& checks) {
  const double T = c.get_double("horizon");
  const std::size_t strang_steps = static_cast<std::size_t>(c.get_int("strang_steps"));
  const GridSpec g = grid_of(c, T / static_cast<double>(strang_steps), T);
  const double s = c.get_double("s"), sp = c.get_double("sprime");
  const SystemState st0 = reference_state(g, c.get_double("amplitude"), s, sp);
  SolveConfig cfg;
  cfg.dt = T / static_cast<double>(strang_steps);
  cfg.t_horizon = T;
  cfg.cadence = strang_steps;
  cfg.nonlinearity = nonlinearity_of(c);
  cfg.dealias = c.get_bool("dealias");
  cfg.coupling = c.get_double("coupling");
  cfg.s = s;
  cfg.sprime = sp;
  PicardOptions po;
  po.iterations = static_cast<std::size_t>(c.get_int("iterations"));
  po.steps = static_cast<std::size_t>(c.get_int("steps"));
  po.block_norms = c.get_bool("block_norms");
  const PicardResult r = picard_iterate(st0.E, st0.Nd, T, cfg, po);

  std::string csv = "iteration,diff_E,diff_N,diff_F,diff_W\n";
  for (std::size_t m = 0; m < r.diff_E.size(); ++m)
    csv += std::to_string(m + 1) + "," + format_double(r.diff_E[m]) + "," + format_double(r.diff_N[m]) + "," +
           format_double(m < r.diff_F.size() ? r.diff_F[m] : NAN) + "," +
           format_double(m < r.diff_W.size() ? r.diff_W[m] : NAN) + "\n";

  // Strict decrease of max(diff_E, diff_N) from the first iteration on.
  std::size_t decreasing = 0;
  for (std::size_t m = 1; m < r.diff_E.size(); ++m) {
    if (std::max(r.diff_E[m], r.diff_N[m]) >= std::max(r.diff_E[m - 1], r.diff_N[m - 1])) break;
    ++decreasing;
  }
  check_ge(checks, "strict_decreases", static_cast<double>(decreasing), static_cast<double>(r.diff_E.size() - 1));
  check_le(checks, "diverged", r.diverged ? 1.0 : 0.0, 0.0);

  if (c.get_bool("compare_strang")) {
    const Trajectory tr = evolve(st0, cfg);
    const double dE = l2_norm(slice(r.E, po.steps - 1) - tr.final_state.E);
    const double dN = l2_norm(slice(r.N, po.steps - 1) - tr.final_state.Nd);
    csv += "\nstrang,dist_E,dist_N\n" + std::to_string(strang_steps) + "," + format_double(dE) + "," +
           format_double(dN) + "\n";
    check_le(checks, "strang_distance", std::max(dE, dN), c.get_double("strang_tol"));
  }
  sink.text("picard.csv", csv);
}

void run_verify_linear(const RunConfig& c, Sink& sink, Checks& checks) {
  SweepConfig cfg;
  const std::string& est = c.get_enum("estimate");
  cfg.estimate = est == "local-smoothing" ? Estimate::LocalSmoothing
                 : est == "maximal"       ? Estimate::MaximalFn
                 : est == "strichartz"    ? Estimate::Strichartz
                                          : Estimate::InhomG_to_F;
  cfg.d = static_cast<int>(c.get_int("d"));
  cfg.Ns = c.get_list("Ns");
  cfg.trials = static_cast<int>(c.get_int("trials"));
  cfg.seed = c.seed();
  cfg.direction = static_cast<std::size_t>(c.get_int("direction"));
  cfg.presets = c.get_bool("presets");
  cfg.n = static_cast<std::size_t>(c.get_int("n"));
  cfg.nt = static_cast<std::size_t>(c.get_int("nt"));
  cfg.spacing_ref = c.get_double("spacing_ref");
  cfg.window_ref = c.get_double("window_ref");
  cfg.horizon_ref = c.get_double("horizon_ref");
  const SweepResult r = run_sweep(cfg);
  sink.text("sweep.csv", r.to_csv());

  switch (cfg.estimate) {
    case Estimate::LocalSmoothing:
      check_le(checks, "raw_slope_deviation", std::abs(r.raw_fit.slope + 0.5), c.get_double("slope_tol"));
      break;
    case Estimate::MaximalFn:
      if (cfg.d == 3)
        check_le(checks, "ratio_spread", r.ratio_spread, c.get_double("spread_max"));
      else
        check_le(checks, "ratio_slope", r.ratio_fit.slope, c.get_double("fit_tol"));
      break;
    case Estimate::Strichartz:
    case Estimate::InhomG_to_F:
      check_le(checks, "ratio_spread", r.ratio_spread, c.get_double("spread_max"));
      break;
  }
}

void run_verify_bilinear(const RunConfig& c, Sink& sink, Checks& checks) {
  std::vector<BilinearWhich> which;
  if (c.get_enum("which") != "b1") which.push_back(BilinearWhich::A1);
  if (c.get_enum("which") != "a1") which.push_back(BilinearWhich::B1);
  std::vector<BilinearReport> reports;
  std::vector<std::string> rows;
  const int d = static_cast<int>(c.get_int("d"));
  for (BilinearWhich w : which) {
    OctaveSweep cfg;
    cfg.which = w;
    cfg.d = d;
    cfg.K = c.get_double("K");
    cfg.low = c.get_double("low");
    cfg.trials = static_cast<int>(c.get_int("trials"));
    cfg.seed = c.seed();
    cfg.T = c.get_double("T");
    cfg.nt = static_cast<std::size_t>(c.get_int("nt"));
    cfg.window = c.get_double("window");
    cfg.presets = c.get_bool("presets");
    const OctaveResult r = run_octave(cfg);
    reports.insert(reports.end(), r.reports.begin(), r.reports.end());
    const std::string name = which_name(w);
    rows.push_back(name + ",octave," + std::to_string(d) + "," + format_double(cfg.K) + ",,,slope," +
                   format_double(r.worst_K) + "," + format_double(r.worst_2K) + "," + format_double(r.slope));
    check_le(checks, name + "_octave_slope", std::abs(r.slope), c.get_double("slope_tol"));
  }
  if (c.get_bool("t_half")) {
    BilinearCase bc;
    bc.which = BilinearWhich::A1;
    bc.regime = BilinearRegime::LowSecond;
    bc.N = bc.N1 = c.get_double("K");
    bc.N2 = c.get_double("low");
    bc.d = d;
    bc.seed = c.seed();
    bc.T = c.get_double("t_half_T");
    bc.nt = static_cast<std::size_t>(c.get_int("nt"));
    bc.window = c.get_double("window");
    const THalfCheck t = t_half_check(bc);
    rows.push_back("a1,t_half," + std::to_string(d) + "," + format_double(bc.N) + "," + format_double(bc.N1) + "," +
                   format_double(bc.N2) + ",const," + format_double(t.lhs_ratio) + "," + format_double(t.l2_ratio) +
                   "," + format_double(t.rel_err));
    check_le(checks, "t_half_rel_err", t.rel_err, c.get_double("t_half_tol"));
  }
  sink.text("bilinear.csv", bilinear_csv(reports, rows));
}

void run_counterexample_cmd(const RunConfig& c, Sink& sink, Checks& checks) {
  const long long nmin = c.get_int("N_min"), nmax = c.get_int("N_max");
  require(nmin >= 16, ErrorDomain::Counterexample, errc::precondition,
          "insufficient points for fit: the N range must start at 2^4 (got N_min = " + std::to_string(nmin) + ")");
  CounterexampleConfig cfg;
  cfg.Ns.clear();
  for (long long N = nmin; N <= nmax; N *= 2) cfg.Ns.push_back(static_cast<double>(N));
  require(cfg.Ns.size() >= 4, ErrorDomain::Counterexample, errc::precondition,
          "insufficient points for fit: need at least 4 dyadic N, got " + std::to_string(cfg.Ns.size()));
  auto& p = cfg.params;
  p.d = static_cast<int>(c.get_int("d"));
  p.s = c.get_double("s");
  p.sprime = c.get_double("sprime");
  p.p1 = c.get_double("p1");
  p.b1 = c.get_double("b1");
  p.b2 = c.get_double("b2");
  p.p2 = c.get_double("p2");
  p.sign = static_cast<int>(c.get_int("sign"));
  p.seed = c.seed();
  p.budget.rel_tol = c.get_double("rel_tol");
  cfg.part1 = c.get_bool("part1");
  cfg.part2 = c.get_bool("part2");
  cfg.slab_law = c.get_bool("slab_law");
  const CounterexampleReport r = run_counterexample(cfg);
  sink.text("counterexample.csv", r.to_csv());

  const double lo = c.get_double("norm_lo"), hi = c.get_double("norm_hi");
  auto bracket = [&](const std::string& name, const std::vector<double>& v) {
    check_ge(checks, name + "_min", *std::min_element(v.begin(), v.end()), lo);
    check_le(checks, name + "_max", *std::max_element(v.begin(), v.end()), hi);
  };
  if (cfg.part1) {
    std::vector<double> nu, nv;
    double rel = 0.0;
    for (const auto& row : r.part1) {
      nu.push_back(row.norm_u.report.total);
      nv.push_back(row.norm_v.report.total);
      for (const auto& cell : row.cells) rel = std::max(rel, cell.value.rel_error());
    }
    check_ge(checks, "part1_r2", r.part1_linear.r2, c.get_double("r2_min"));
    check_ge(checks, "part1_slope", r.part1_linear.slope, 0.0);
    check_le(checks, "part1_cell_rel_error", rel, 0.05);
    bracket("norm_u", nu);
    bracket("norm_v", nv);
  }
  if (cfg.part2) {
    const double target = 1.0 - 1.0 / p.p1;
    check_le(checks, "part2_exponent_deviation", std::abs(r.part2_power.slope / target - 1.0),
             c.get_double("exponent_tol"));
    std::vector<double> nw;
    for (const auto& row : r.part2) nw.push_back(row.norm_w.report.total);
    bracket("norm_w", nw);
  }
  if (cfg.slab_law) check_le(checks, "slab_spread_r1", r.slab_spread_r1 - 1.0, c.get_double("slab_tol"));
}

void run_norms(const RunConfig& c, Sink& sink, Checks& checks) {
  const int d = static_cast<int>(c.get_int("d"));
  const std::size_t n = static_cast<std::size_t>(c.get_int("n"));
  const double N = c.get_double("N"), T = c.get_double("T");
  const GridSpec g = make_grid(d, std::vector<std::size_t>(static_cast<std::size_t>(d), n),
                               std::vector<double>(static_cast<std::size_t>(d), c.get_double("box")), 1e-3, T);
  const Field tmpl = transverse_field(g);
  Field f0;
  if (c.get_enum("data") == "random") {
    f0 = sample_function(tmpl, preset::BandLimitedRandom{N, c.seed(), 1.0});
  } else {
    std::vector<double> k(static_cast<std::size_t>(d - 1), 0.0);
    k[0] = N;
    f0 = apply_projection({ProjKind::Annulus, N}, sample_function(tmpl, preset::WavePacket{k, 2.0 / N, 1.0, {}}));
    const double nrm = l2_norm(f0);
    for (auto& v : f0.data()) v /= nrm;
  }
  const std::size_t nt = static_cast<std::size_t>(c.get_int("nt"));
  const TimeSlab u = evolve_slab(FlowKind::SchrodingerTransverse, f0, nt, -T, 2.0 * T / static_cast<double>(nt - 1));
  const NormReport fn = fn_norm(u, N);
  const NormReport gn = gn_norm(u, N);
  sink.text("norms.csv", fn.to_csv() + "\n" + gn.to_csv());
  for (const NormReport* rep : {&fn, &gn}) {
    const double dev = std::abs(rep->reaggregate() - rep->total) / std::max(rep->total, 1e-300);
    check_le(checks, rep->name + "_reaggregate", dev, 1e-12);
  }
  check_le(checks, "fn_total", fn.total, std::numeric_limits<double>::max());
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  Sink sink{fs::path(cfg.out_dir), {}};
  std::error_code ec;
  fs::create_directories(sink.dir, ec);
  if (ec) {
    out.exit_code = static_cast<int>(ErrorDomain::Config) + config_errc::io;
    out.error = "cannot create output directory " + cfg.out_dir + ": " + ec.message();
    return out;
  }
  const std::string effective = cfg.effective_text();
  try {
    sink.text("effective_config.ini", effective);
    switch (cfg.command) {
      case Command::Simulate: run_simulate(cfg, sink, out.checks); break;
      case Command::Picard: run_picard(cfg, sink, out.checks); break;
      case Command::VerifyLinear: run_verify_linear(cfg, sink, out.checks); break;
      case Command::VerifyBilinear: run_verify_bilinear(cfg, sink, out.checks); break;
      case Command::Counterexample: run_counterexample_cmd(cfg, sink, out.checks); break;
      case Command::Norms: run_norms(cfg, sink, out.checks); break;
    }
    const bool ok = std::all_of(out.checks.begin(), out.checks.end(), [](const CheckResult& c) { return c.pass; });
    out.exit_code = ok ? 0 : static_cast<int>(owning_domain(cfg.command)) + errc::check_failed;
  } catch (const Error& e) {
    out.exit_code = e.exit_code();
    out.error = e.what();
  }

  std::string csv = "check,value,bound,pass\n";
  for (const auto& c : out.checks)
    csv += c.name + "," + format_double(c.value) + "," + c.bound + "," + (c.pass ? "true" : "false") + "\n";
  try {
    sink.text("checks.csv", csv);
  } catch (const Error& e) {
    if (out.exit_code == 0) out.exit_code = e.exit_code(), out.error = e.what();
  }
  out.artifacts = sink.artifacts;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::ordered_json m;
  m["tool"] = "dzak";
  m["version"] = tool_version();
  m["command"] = command_name(cfg.command);
  m["config_sha256"] = sha256_hex(effective);
  m["seeds"] = {{"base", cfg.seed()}};
  m["wall_time_s"] = out.wall_seconds;
  m["exit_code"] = out.exit_code;
  if (!out.error.empty()) m["error"] = out.error;
  m["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : out.artifacts) m["artifacts"].push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  m["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : out.checks)
    m["checks"].push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  std::ofstream mf(sink.dir / "manifest.json", std::ios::binary);
  mf << m.dump(2) << "\n";
  if (!mf && out.exit_code == 0) {
    out.exit_code = static_cast<int>(ErrorDomain::Config) + config_errc::io;
    out.error = "cannot write manifest.json";
  }
  return out;
}

}  // namespace dzak
