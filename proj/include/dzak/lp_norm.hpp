#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "dzak/field.hpp"

namespace dzak {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One level of an iterated mixed norm: an L^p norm over a set of axes.
struct NormGroup {
  std::vector<std::size_t> axes;
  double p = 2.0;
};

/// Iterated Riemann-sum norm. Groups are applied innermost first and must partition
/// the field's axes; p = kInf takes the lattice maximum. Each sample is weighted by the
/// axis spacings, in either representation.
double lp_norm(const Field& f, const std::vector<NormGroup>& groups);
/// Flat L^p norm over every axis.
double lp_norm(const Field& f, double p);
double l2_norm(const Field& f);

/// Real-valued variant used internally: reduces |values| over the listed axes.
std::vector<double> reduce_axes(const std::vector<double>& values, const std::vector<std::size_t>& shape,
                                const std::vector<std::size_t>& axes, const std::vector<double>& weights,
                                double p, std::vector<std::size_t>* out_shape);

}  // namespace dzak
