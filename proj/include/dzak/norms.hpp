#pragma once

#include <vector>

#include "dzak/field.hpp"
#include "dzak/norm_report.hpp"

namespace dzak {

/// Strichartz exponent p_d = (2d+4)/d.
inline double strichartz_exponent(int d) { return (2.0 * d + 4.0) / d; }

/// ||u||_{L_e^{p,q}}: outer L^p in r = x.e of the inner L^q over (t, v), v orthogonal to e.
/// u lives on (time, transverse axes). Grid-aligned e is evaluated on the lattice;
/// other unit vectors are resampled onto a rotated lattice by multilinear interpolation,
/// treating u as zero outside the centred fundamental box.
double mixed_directional_norm(const TimeSlab& u, const std::vector<double>& e, double p, double q);
/// Grid-aligned case e = e_j (0-based transverse index).
double mixed_directional_norm(const TimeSlab& u, std::size_t j, double p, double q);

/// Options shared by the block norms.
struct BlockNormOptions {
  // Fraction of the squared L^2 norm allowed outside the annulus.
  double support_tol = 1e-8;
  // Skip the support check (data already projected by the caller).
  bool check_support = true;
};

/// F_N block norm of f in L^2_N(T). f lives on (time, transverse axes); d is the
/// transverse count + 1.
NormReport fn_norm(const TimeSlab& f, double N, const BlockNormOptions& opt = {});

enum class GnStrategy { Pure1, Pure2, ModulationSplit, BestOfFamily };

struct GnOptions : BlockNormOptions {
  GnStrategy strategy = GnStrategy::BestOfFamily;
  // Cutoff for ModulationSplit; BestOfFamily scans dyadic cutoffs 1..max modulation.
  double lambda = 1.0;
  // Added to the modulation tau + |xi|^2 (the xi_d shift of a fixed x_d-frequency slice).
  double modulation_offset = 0.0;
};

/// Upper bound for the G_N infimum from an explicit family of splittings g = g1 + g2.
NormReport gn_norm(const TimeSlab& g, double N, const GnOptions& opt = {});

enum class BlockFunctional { FN, LtInfLx2, GN, Lt1Lx2 };

struct AggregateOptions {
  // Fraction of the squared L^2 norm allowed above half the Nyquist frequency.
  double tail_tol = 1e-8;
  GnStrategy gn_strategy = GnStrategy::BestOfFamily;
};

/// (sum_{N,M} M^{2s'} N^{2s} || eta_M(xi_d) ||P_N F_{x_d} u||_block ||^2_{L^2_{xi_d}})^{1/2}
/// for u on (time, transverse axes, x_d) in physical representation.
NormReport aggregate_sobolev(const TimeSlab& u, BlockFunctional block, double s, double sprime,
                             const AggregateOptions& opt = {});

/// Anisotropic Sobolev norm with Japanese brackets.
double hss_norm(const Field& f, double s, double sprime);

enum class RestrictionFamily { E, WPlus, WMinus };

/// Fourier restriction norm of space-time frequency samples u_hat (all axes spectral,
/// axes time, transverse, x_d). Dyadic sums start at 1 unless from_one is false.
NormReport restriction_norm(const Field& u_hat, RestrictionFamily family, double s, double sprime, double b,
                            double p, bool from_one = true);

/// Fraction of the squared L^2 norm of f at transverse frequencies
/// where eta_N vanishes.
double annulus_leakage(const Field& f, double N);

}  // namespace dzak
