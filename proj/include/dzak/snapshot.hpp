#pragma once

#include <string>

#include "dzak/solver.hpp"

namespace dzak {

/// Binary snapshot: "DZK1", u32 version, u32 d, u64 sizes, f64 box lengths, f64 time,
/// then E and Nd as interleaved little-endian (re, im) pairs in row-major order.
void write_snapshot(const std::string& path, const SystemState& state);
SystemState read_snapshot(const std::string& path);

}  // namespace dzak
