#include "dzak/lp_norm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dzak/error.hpp"

namespace dzak {

std::vector<double> reduce_axes(const std::vector<double>& values, const std::vector<std::size_t>& shape,
                                const std::vector<std::size_t>& axes, const std::vector<double>& weights,
                                double p, std::vector<std::size_t>* out_shape) {
  std::vector<bool> reduced(shape.size(), false);
  double w = 1.0;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    reduced[axes[i]] = true;
    w *= weights[i];
  }
  std::vector<std::size_t> keep_shape;
  for (std::size_t k = 0; k < shape.size(); ++k)
    if (!reduced[k]) keep_shape.push_back(shape[k]);
  std::size_t out_size = 1;
  for (auto n : keep_shape) out_size *= n;

  // Output stride for each input axis (0 for reduced axes).
  std::vector<std::size_t> ostride(shape.size(), 0);
  {
    std::size_t s = 1;
    for (std::size_t k = shape.size(); k-- > 0;)
      if (!reduced[k]) {
        ostride[k] = s;
        s *= shape[k];
      }
  }
  std::vector<double> acc(out_size, 0.0);
  std::vector<std::size_t> idx(shape.size(), 0);
  std::size_t o = 0;
  const bool inf = std::isinf(p);
  const bool two = p == 2.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (inf)
      acc[o] = std::max(acc[o], v);
    else if (two)
      acc[o] += v * v;
    else if (v > 0.0)
      acc[o] += std::pow(v, p);
    for (std::size_t k = shape.size(); k-- > 0;) {
      o += ostride[k];
      if (++idx[k] < shape[k]) break;
      o -= ostride[k] * shape[k];
      idx[k] = 0;
    }
  }
  if (!inf)
    for (auto& a : acc) a = two ? std::sqrt(a * w) : std::pow(a * w, 1.0 / p);
  if (out_shape) *out_shape = keep_shape;
  return acc;
}

double lp_norm(const Field& f, const std::vector<NormGroup>& groups) {
  std::vector<bool> seen(f.rank(), false);
  std::size_t count = 0;
  for (const auto& g : groups) {
    require(g.p >= 1.0, ErrorDomain::Spectral, errc::precondition,
            "lp_norm: exponent " + std::to_string(g.p) + " < 1");
    for (auto a : g.axes) {
      require(a < f.rank() && !seen[a], ErrorDomain::Spectral, errc::precondition,
              "lp_norm: axis groups must partition the field axes");
      seen[a] = true;
      ++count;
    }
  }
  require(count == f.rank(), ErrorDomain::Spectral, errc::precondition,
          "lp_norm: axis groups must partition the field axes");

  std::vector<double> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) vals[i] = std::abs(f[i]);
  std::vector<std::size_t> shape(f.rank());
  for (std::size_t k = 0; k < f.rank(); ++k) shape[k] = f.extent(k);
  // Remaining original axis ids, aligned with the current shape.
  std::vector<std::size_t> live = f.all_axes();

  for (const auto& g : groups) {
    std::vector<std::size_t> pos;
    std::vector<double> w;
    for (auto a : g.axes) {
      pos.push_back(static_cast<std::size_t>(std::find(live.begin(), live.end(), a) - live.begin()));
      w.push_back(f.spacing(a));
    }
    std::vector<std::size_t> new_shape;
    vals = reduce_axes(vals, shape, pos, w, g.p, &new_shape);
    shape = std::move(new_shape);
    std::vector<std::size_t> nl;
    for (auto a : live)
      if (std::find(g.axes.begin(), g.axes.end(), a) == g.axes.end()) nl.push_back(a);
    live = std::move(nl);
  }
  return vals.empty() ? 0.0 : vals[0];
}

double lp_norm(const Field& f, double p) { return lp_norm(f, {NormGroup{f.all_axes(), p}}); }

double l2_norm(const Field& f) {
  double s = 0.0;
  for (const auto& v : f.data()) s += std::norm(v);
  return std::sqrt(s * f.cell_volume());
}

}  // namespace dzak
