#include "dzak/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dzak/error.hpp"

namespace dzak {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t GridSpec::steps() const {
  return static_cast<std::size_t>(std::llround(t_horizon / dt));
}

GridSpec make_grid(int d, std::vector<std::size_t> n_axis, std::vector<double> box_len, double dt,
                   double t_horizon) {
  const auto bad = [](const std::string& m) { fail(ErrorDomain::Spectral, errc::precondition, m); };
  if (d < 2) bad("dimension d must be at least 2, got " + std::to_string(d));
  if (n_axis.size() != static_cast<std::size_t>(d) || box_len.size() != static_cast<std::size_t>(d))
    bad("expected " + std::to_string(d) + " axis sizes and box lengths");
  for (std::size_t k = 0; k < n_axis.size(); ++k) {
    if (!is_power_of_two(n_axis[k]) || n_axis[k] < 8)
      bad("axis " + std::to_string(k) + ": size " + std::to_string(n_axis[k]) +
          " is not a power of two >= 8");
    if (!(box_len[k] > 0.0) || !std::isfinite(box_len[k]))
      bad("axis " + std::to_string(k) + ": box length must be positive");
  }
  if (!(dt > 0.0)) bad("time step must be positive");
  if (!(t_horizon >= 0.0)) bad("time horizon must be nonnegative");

  GridSpec g;
  g.d = d;
  g.n = std::move(n_axis);
  g.box_len = std::move(box_len);
  g.dt = dt;
  g.t_horizon = t_horizon;
  g.freq.resize(g.n.size());
  for (std::size_t k = 0; k < g.n.size(); ++k) {
    g.freq[k].resize(g.n[k]);
    for (std::size_t j = 0; j < g.n[k]; ++j)
      g.freq[k][j] = 2.0 * std::numbers::pi * static_cast<double>(signed_index(j, g.n[k])) / g.box_len[k];
  }
  return g;
}

}  // namespace dzak
