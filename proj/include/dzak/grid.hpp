#pragma once

#include <cstddef>
#include <vector>

namespace dzak {

/// Discretization of the space-time box. Spatial axes are ordered x_1..x_{d-1}, x_d;
/// the last one is the distinguished (propagation) direction.
struct GridSpec {
  int d = 3;
  std::vector<std::size_t> n;
  std::vector<double> box_len;
  double dt = 1e-3;
  double t_horizon = 0.5;
  // freq[k][j]: angular frequency of bin j on axis k, 2*pi*m/box_len[k].
  std::vector<std::vector<double>> freq;

  std::size_t transverse_count() const { return static_cast<std::size_t>(d - 1); }
  std::size_t distinguished_axis() const { return static_cast<std::size_t>(d - 1); }
  double spacing(std::size_t k) const { return box_len[k] / static_cast<double>(n[k]); }
  std::size_t steps() const;
};

GridSpec make_grid(int d, std::vector<std::size_t> n_axis, std::vector<double> box_len, double dt,
                   double t_horizon);

bool is_power_of_two(std::size_t v);

// Signed lattice index for bin j of an n-point axis: j for j < n/2, j - n otherwise.
inline long signed_index(std::size_t j, std::size_t n) {
  return j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

}  // namespace dzak
