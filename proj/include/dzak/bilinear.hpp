#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dzak/field.hpp"
#include "dzak/fit.hpp"

namespace dzak {

enum class BilinearWhich {
  A1,  // ||P_N(f1 f2)||_{G_N} against T^{1/2} N2^{-1/2} Nmin^{(d-2)/2} ||f1||_{F_N1} ||f2||_{L^inf L^2}
  B1,  // ||P_N(g1 g2)||_{L^2} against Nmax^{-1/2} Nmin^{(d-2)/2} ||g1||_{F_N1} ||g2||_{F_N2}
};

enum class BilinearRegime {
  LowOut,     // N << N1 ~ N2
  LowSecond,  // N2 << N ~ N1
  HighPair,   // N1 <~ N ~ N2
};

const char* which_name(BilinearWhich w);
const char* regime_name(BilinearRegime r);

struct BilinearCase {
  BilinearWhich which = BilinearWhich::A1;
  BilinearRegime regime = BilinearRegime::LowOut;
  double N = 1, N1 = 4, N2 = 4;
  int d = 4;
  int trials = 3;
  std::uint64_t seed = 1;
  double T = 0.05;        // data on [-T, T]
  std::size_t nt = 32;    // time samples
  std::size_t n = 0;      // lattice points per transverse axis; 0 picks the smallest alias-free size
  double box = 6.283185307179586;  // period of every transverse axis
  double window = 0.8;    // Gaussian localization width of random data; 0 leaves it spread
  bool presets = true;
};

/// Checks the dyadic relations of the regime ("<<" means ratio >= 4, "~" ratio in
/// {1/2, 1, 2}, "<~" ratio <= 2).
void validate_case(const BilinearCase& c);

struct BilinearRow {
  std::string trial;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  std::string witness;  // G_N splitting that realized the left side (A1)
};

struct BilinearReport {
  BilinearCase c;
  std::vector<BilinearRow> rows;
  double worst_ratio = 0;
};

BilinearReport verify_a1(const BilinearCase& c);
BilinearReport verify_b1(const BilinearCase& c);

/// The three regimes at large frequency K and at 2K, on the same time interval.
struct OctaveSweep {
  BilinearWhich which = BilinearWhich::A1;
  int d = 3;
  double K = 8;
  double low = 1;  // the fixed small frequency
  int trials = 3;
  std::uint64_t seed = 1;
  double T = 0.1;
  std::size_t nt = 128;
  double window = 0.8;
  bool presets = true;
};

struct OctaveResult {
  std::vector<BilinearReport> reports;  // regime-major, K then 2K
  double worst_K = 0, worst_2K = 0;     // max over regimes
  double slope = 0;                     // log2(worst_2K / worst_K)
  std::vector<double> regime_slopes;    // per regime, same convention
};

OctaveResult run_octave(const OctaveSweep& cfg);

/// Reruns an A1 case on time-constant data at T and 2T. Reports the ratio of the
/// pure L^{1,2} candidate of the left side and of ||f2||_{L^2_{t,x}}; both must be sqrt 2.
struct THalfCheck {
  double lhs_ratio = 0;
  double l2_ratio = 0;
  double rel_err = 0;  // max deviation from sqrt 2, relative
};
THalfCheck t_half_check(const BilinearCase& c);

/// Full aggregated inequalities on multi-block data (t, transverse, x_d).
struct FullData {
  double K = 1;            // base transverse frequency of the generated blocks; 8K <= half Nyquist
  std::uint64_t seed = 1;
  double T = 0.05;
  std::size_t nt = 16;
  std::size_t n = 32;      // transverse lattice
  std::size_t nd = 16;     // x_d lattice
  double box = 6.283185307179586;
  double amplitude = 1.0;  // 0 gives zero data
};

struct FullReport {
  double lhs_a = 0, rhs_a = 0, ratio_a = 0;  // G^{s,s'} of uv against T^{1/2} F(u) W(v)
  double lhs_b = 0, rhs_b = 0, ratio_b = 0;  // Y^{s-1/2,s'} of |grad'|(u1 u2) against T^{1/2} F F
};
FullReport verify_full(double s, double sprime, int d, const FullData& data);

std::string bilinear_csv(const std::vector<BilinearReport>& reports, const std::vector<std::string>& fit_rows = {});

}  // namespace dzak
