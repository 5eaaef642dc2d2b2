#pragma once

#include <cstddef>
#include <vector>

#include "dzak/field.hpp"

namespace dzak {

enum class Direction { Forward, Inverse };

/// Unitary DFT (1/sqrt(n) per axis) along the listed axes. Forward requires the axes to be
/// physical, inverse requires them to be spectral.
Field transform(const Field& f, const std::vector<std::size_t>& axes, Direction dir);
void transform_inplace(Field& f, const std::vector<std::size_t>& axes, Direction dir);

// Convenience wrappers over the spatial axes of f.
Field to_frequency(const Field& f);
Field to_physical(const Field& f);

/// Scale between a unitary lattice coefficient and the continuum transform
/// (2*pi)^{-1/2} * integral f(x) e^{-ix xi} dx, per axis: length / sqrt(2*pi*n).
double continuum_scale(const Field& f, const std::vector<std::size_t>& axes);

}  // namespace dzak
