#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dzak/field.hpp"

namespace dzak {

namespace preset {

/// amplitude * exp(-|x - center|^2 / (2 sigma^2)) over the field's spatial axes.
struct Gaussian {
  double sigma = 1.0;
  double amplitude = 1.0;
  std::vector<double> center;  // empty = origin
};

/// Gaussian envelope times exp(i k.x).
struct WavePacket {
  std::vector<double> k;  // one entry per spatial axis
  double sigma = 1.0;
  double amplitude = 1.0;
  std::vector<double> center;
};

/// Complex Gaussian coefficients shaped by eta_N(|xi|) over the transverse
/// frequencies, normalized to unit L^2. Along x_d (if present) the coefficients
/// carry a Gaussian profile of width xd_width.
struct BandLimitedRandom {
  double N = 8.0;
  std::uint64_t seed = 1;
  double xd_width = 1.0;
};

}  // namespace preset

using Descriptor = std::variant<preset::Gaussian, preset::WavePacket, preset::BandLimitedRandom>;

/// Samples a closed-form descriptor onto a physical field with the layout of tmpl.
Field sample_function(const Field& tmpl, const Descriptor& desc);

/// Largest resolvable angular frequency over the transverse axes (the Nyquist value).
double transverse_nyquist(const Field& f);

}  // namespace dzak
