#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dzak/field.hpp"
#include "dzak/grid.hpp"

namespace dzak {

enum class Nonlinearity {
  RealPart,  // Re(N) E
  Dropped,   // N E
};

struct SolveConfig {
  double dt = 1e-3;
  double t_horizon = 0.5;
  bool dealias = true;  // 2/3 rule on |E|^2
  Nonlinearity nonlinearity = Nonlinearity::RealPart;
  std::size_t cadence = 1;  // steps between snapshots
  double coupling = 1.0;    // scales both nonlinear terms; 0 decouples the system
  double s = 1.0;           // regularity used for the diagnostics
  double sprime = 0.75;
};

/// E and the first-order density variable Nd = n - i |grad'|^{-1} n_t, both physical
/// fields on (transverse axes, x_d).
struct SystemState {
  Field E;
  Field Nd;
  double time = 0.0;
  double hss_E = 0.0;  // H^{s,s'} of E at construction
  double hss_N = 0.0;  // H^{s-1/2,s'} of Nd at construction
};

/// Assembles Nd from (n0, n1). n1 must carry no mass on the transverse zero
/// frequency plane.
SystemState init_state(const Field& E0, const Field& n0, const Field& n1, double s = 1.0, double sprime = 0.75);

/// Smooth reference data on the grid g: E0 a wave packet with wave vector (1, 1/2, ...),
/// n0 a shifted Gaussian and n1 the transverse Laplacian of a Gaussian (no mass on the
/// zero transverse frequency plane), all scaled by amplitude.
SystemState reference_state(const GridSpec& g, double amplitude, double s = 1.0, double sprime = 0.75);

/// One A(dt/2) B(dt) A(dt/2) step in place.
void strang_step(SystemState& state, double dt, const SolveConfig& cfg);

struct DiagnosticsRow {
  double t = 0;
  double l2_E = 0;
  double hss_E = 0;
  double hss_N = 0;
};

struct Trajectory {
  TimeSlab E;   // snapshots every cfg.cadence steps, including t = 0
  TimeSlab Nd;
  std::vector<DiagnosticsRow> diagnostics;
  SystemState final_state;

  std::string diagnostics_csv() const;
};

Trajectory evolve(const SystemState& state0, const SolveConfig& cfg);

/// n = Re(Nd) and n_t = -|grad'| Im(Nd), returned as complex fields whose imaginary
/// parts are round-off.
std::pair<Field, Field> reconstruct_n(const SystemState& state);

struct PicardOptions {
  std::size_t iterations = 4;  // number of applications of the map
  std::size_t steps = 65;      // quadrature samples on [0, T]
  bool block_norms = false;    // also report F / W differences of the iterates
};

struct PicardResult {
  TimeSlab E;  // last iterate
  TimeSlab N;
  // Per iteration m >= 1: sup_t ||X^m(t) - X^{m-1}(t)||_{L^2}.
  std::vector<double> diff_E;
  std::vector<double> diff_N;
  // F^{s,s'}(T) of the E differences and W^{s-1/2,s'}(T) of the N differences (NaN when
  // not requested or not resolvable).
  std::vector<double> diff_F;
  std::vector<double> diff_W;
  bool diverged = false;  // some difference grew more than tenfold
};

/// Fixed-point iteration of the Duhamel map on [0, T], starting from the free flows.
PicardResult picard_iterate(const Field& E0, const Field& N0, double T, const SolveConfig& cfg,
                            const PicardOptions& opt = {});

}  // namespace dzak
