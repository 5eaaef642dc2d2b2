#pragma once

#include <cstddef>
#include <vector>

#include "dzak/field.hpp"
#include "dzak/grid.hpp"

namespace dzak {

enum class ProjKind {
  Annulus,      // P_N: eta_N(|xi|) over the transverse frequencies
  Directional,  // P_{N,e_j}: phi_N(xi_j)
  AnnulusXd,    // P_{N,M}: eta_N(|xi|) eta_M(xi_d)
  ModulationE,  // E_L: eta_L(tau + |xi|^2 + xi_d)
  ModulationW,  // W_L^{+-}: eta_L(tau +- |xi|)
};

struct ProjectionSpec {
  ProjKind kind = ProjKind::Annulus;
  double N = 1.0;
  double M = 1.0;
  double L = 1.0;
  std::size_t j = 0;  // transverse direction, 0-based
  int sign = +1;      // for ModulationW
};

/// Applies the multiplier in frequency space and returns the result in the input's
/// representation. The field must carry the axes the multiplier depends on.
Field apply_projection(const ProjectionSpec& spec, const Field& f);

/// Multiplier value of spec at transverse frequency xi, xi_d and time frequency tau.
double projection_symbol(const ProjectionSpec& spec, int d, const double* xi, std::size_t nxi, double xi_d,
                         double tau);

/// max |sum_N eta_N(xi) - 1| over transverse lattice points below half the Nyquist frequency.
double verify_partition(const GridSpec& g);

/// max over transverse lattice points with eta_N(xi) > 0 of |prod_j (1 - phi_N(xi_j))|.
double verify_decomposition_identity(double N, int d, const GridSpec& g);

/// Summands P_{N,e_j} prod_{l<j}(1 - P_{N,e_l}) P_N f, j = 1..d-1.
std::vector<Field> directional_decompose(const Field& f, double N);

bool is_dyadic(double v);

}  // namespace dzak
