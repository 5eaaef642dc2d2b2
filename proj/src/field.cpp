#include "dzak/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dzak/error.hpp"

namespace dzak {

Field::Field(std::vector<Axis> axes, double t0) : axes_(std::move(axes)), t0_(t0) {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    require(axes_[k].n > 0 && axes_[k].length > 0.0, ErrorDomain::Spectral, errc::precondition,
            "field axes need positive size and length");
    if (axes_[k].role == AxisRole::Time)
      require(k == 0, ErrorDomain::Spectral, errc::precondition, "time axis must be outermost");
    if (axes_[k].role == AxisRole::Distinguished)
      require(k + 1 == axes_.size(), ErrorDomain::Spectral, errc::precondition,
              "distinguished axis must be innermost");
  }
  spectral_.assign(axes_.size(), false);
  strides_.assign(axes_.size(), 1);
  std::size_t total = 1;
  for (std::size_t k = axes_.size(); k-- > 0;) {
    strides_[k] = total;
    total *= axes_[k].n;
  }
  data_.assign(axes_.empty() ? 0 : total, cplx(0.0, 0.0));
}

Repr Field::repr() const {
  bool any_spatial = false, all_spatial = true;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].role == AxisRole::Time) continue;
    any_spatial |= spectral_[k];
    all_spatial &= spectral_[k];
  }
  const bool time_spec = has_time() && spectral_[0];
  if (!any_spatial && !time_spec) return Repr::Physical;
  if (all_spatial && !time_spec) return Repr::FrequencySpatial;
  if (all_spatial && time_spec) return Repr::FrequencyFull;
  return Repr::Mixed;
}

std::vector<std::size_t> Field::transverse_axes() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < axes_.size(); ++k)
    if (axes_[k].role == AxisRole::Transverse) out.push_back(k);
  return out;
}

std::vector<std::size_t> Field::spatial_axes() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < axes_.size(); ++k)
    if (axes_[k].role != AxisRole::Time) out.push_back(k);
  return out;
}

std::vector<std::size_t> Field::all_axes() const {
  std::vector<std::size_t> out(axes_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

double Field::dt() const { return has_time() ? spacing(0) : 0.0; }

double Field::coord(std::size_t k, std::size_t j) const {
  if (axes_[k].role == AxisRole::Time) return t0_ + static_cast<double>(j) * spacing(k);
  return static_cast<double>(signed_index(j, axes_[k].n)) * spacing(k);
}

double Field::freq(std::size_t k, std::size_t j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index(j, axes_[k].n)) / axes_[k].length;
}

double Field::cell_volume() const { return cell_volume(all_axes()); }

double Field::cell_volume(const std::vector<std::size_t>& over) const {
  double v = 1.0;
  for (auto k : over) v *= spacing(k);
  return v;
}

bool Field::same_shape(const Field& o) const {
  if (axes_.size() != o.axes_.size()) return false;
  for (std::size_t k = 0; k < axes_.size(); ++k)
    if (axes_[k].role != o.axes_[k].role || axes_[k].n != o.axes_[k].n ||
        axes_[k].length != o.axes_[k].length)
      return false;
  return true;
}

namespace {
std::vector<Axis> spatial_axes_of(const GridSpec& g, bool with_distinguished) {
  std::vector<Axis> ax;
  for (std::size_t k = 0; k < g.transverse_count(); ++k)
    ax.push_back({AxisRole::Transverse, g.n[k], g.box_len[k]});
  if (with_distinguished) {
    const auto k = g.distinguished_axis();
    ax.push_back({AxisRole::Distinguished, g.n[k], g.box_len[k]});
  }
  return ax;
}
}  // namespace

Field spatial_field(const GridSpec& g) { return Field(spatial_axes_of(g, true)); }
Field transverse_field(const GridSpec& g) { return Field(spatial_axes_of(g, false)); }

TimeSlab make_slab(const GridSpec& g, std::size_t nt, double t0, double dt, bool with_distinguished) {
  require(nt >= 1 && dt > 0.0, ErrorDomain::Spectral, errc::precondition, "slab needs nt >= 1, dt > 0");
  auto ax = spatial_axes_of(g, with_distinguished);
  ax.insert(ax.begin(), Axis{AxisRole::Time, nt, dt * static_cast<double>(nt)});
  return Field(std::move(ax), t0);
}

TimeSlab make_slab(const Field& tmpl, std::size_t nt, double t0, double dt) {
  require(!tmpl.has_time(), ErrorDomain::Spectral, errc::precondition, "template already has a time axis");
  require(nt >= 1 && dt > 0.0, ErrorDomain::Spectral, errc::precondition, "slab needs nt >= 1, dt > 0");
  auto ax = tmpl.axes();
  ax.insert(ax.begin(), Axis{AxisRole::Time, nt, dt * static_cast<double>(nt)});
  Field s(std::move(ax), t0);
  for (std::size_t k = 0; k < tmpl.rank(); ++k) s.set_spectral(k + 1, tmpl.spectral(k));
  return s;
}

Field slice(const TimeSlab& s, std::size_t k) {
  require(s.has_time() && k < s.time_count(), ErrorDomain::Spectral, errc::precondition,
          "slice index out of range");
  std::vector<Axis> ax(s.axes().begin() + 1, s.axes().end());
  Field f(std::move(ax));
  for (std::size_t a = 1; a < s.rank(); ++a) f.set_spectral(a - 1, s.spectral(a));
  const std::size_t S = s.spatial_size();
  std::copy_n(s.data().begin() + static_cast<std::ptrdiff_t>(k * S), S, f.data().begin());
  return f;
}

void set_slice(TimeSlab& s, std::size_t k, const Field& f) {
  require(s.has_time() && k < s.time_count() && f.size() == s.spatial_size(), ErrorDomain::Spectral,
          errc::precondition, "slice shape mismatch");
  std::copy(f.data().begin(), f.data().end(), s.data().begin() + static_cast<std::ptrdiff_t>(k * f.size()));
}

namespace {
// Walks the spatial index space of one slice, calling fn(flat, per-axis bins).
template <class Fn>
void for_each_spatial(const Field& f, Fn&& fn) {
  const auto sp = f.spatial_axes();
  std::vector<std::size_t> idx(sp.size(), 0);
  const std::size_t S = f.spatial_size();
  for (std::size_t i = 0; i < S; ++i) {
    fn(i, idx);
    for (std::size_t a = sp.size(); a-- > 0;) {
      if (++idx[a] < f.extent(sp[a])) break;
      idx[a] = 0;
    }
  }
}
}  // namespace

std::vector<double> transverse_freq_sq(const Field& f) {
  const auto sp = f.spatial_axes();
  std::vector<std::vector<double>> fr(sp.size());
  for (std::size_t a = 0; a < sp.size(); ++a) {
    fr[a].resize(f.extent(sp[a]));
    for (std::size_t j = 0; j < fr[a].size(); ++j) fr[a][j] = f.freq(sp[a], j);
  }
  std::vector<double> out(f.spatial_size());
  for_each_spatial(f, [&](std::size_t i, const std::vector<std::size_t>& idx) {
    double s = 0.0;
    for (std::size_t a = 0; a < sp.size(); ++a)
      if (f.axes()[sp[a]].role == AxisRole::Transverse) s += fr[a][idx[a]] * fr[a][idx[a]];
    out[i] = s;
  });
  return out;
}

std::vector<double> distinguished_freq(const Field& f) {
  std::vector<double> out(f.spatial_size(), 0.0);
  if (!f.has_distinguished()) return out;
  const auto k = f.distinguished_axis();
  const std::size_t n = f.extent(k);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.freq(k, i % n);
  return out;
}

std::vector<double> axis_freq(const Field& f, std::size_t axis) {
  const auto sp = f.spatial_axes();
  const auto pos = std::find(sp.begin(), sp.end(), axis);
  require(pos != sp.end(), ErrorDomain::Spectral, errc::precondition, "axis_freq: not a spatial axis");
  const std::size_t a = static_cast<std::size_t>(pos - sp.begin());
  std::vector<double> out(f.spatial_size());
  for_each_spatial(f, [&](std::size_t i, const std::vector<std::size_t>& idx) { out[i] = f.freq(axis, idx[a]); });
  return out;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

Field& axpy(cplx a, const Field& x, Field& y) {
  require(x.size() == y.size(), ErrorDomain::Spectral, errc::precondition, "axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
  return y;
}

Field operator+(const Field& a, const Field& b) {
  Field r = a;
  return axpy(1.0, b, r);
}

Field operator-(const Field& a, const Field& b) {
  Field r = a;
  return axpy(-1.0, b, r);
}

Field operator*(cplx c, const Field& a) {
  Field r = a;
  for (auto& v : r.data()) v *= c;
  return r;
}

}  // namespace dzak
