#pragma once

#include <cstddef>
#include <vector>

#include "dzak/field.hpp"

namespace dzak {

enum class FlowKind {
  SchrodingerTransverse,   // exp(it Lap')
  TransportedSchrodinger,  // exp(it Lap' - t d_{x_d})
  HalfWave,                // exp(it |grad'|)
  HalfWaveConjugate,       // exp(-it |grad'|)
};

/// Phase rate omega(xi) per spatial sample of f: the flow multiplies by exp(i t omega).
std::vector<double> flow_rate(FlowKind kind, const Field& f);

/// Applies the flow at time t; the result keeps the input's representation.
Field apply_flow(FlowKind kind, double t, const Field& f);

/// u(t_k) = flow(t_k) f0 at t_k = t0 + k dt.
TimeSlab evolve_slab(FlowKind kind, const Field& f0, std::size_t nt, double t0, double dt);

/// integral_0^t flow(t - s) source(s) ds by the trapezoidal rule over the stored samples.
/// t = 0 must be one of the sample times.
TimeSlab duhamel(const TimeSlab& source, FlowKind kind);

}  // namespace dzak
