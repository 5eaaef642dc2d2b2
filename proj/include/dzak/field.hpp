#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "dzak/grid.hpp"

namespace dzak {

using cplx = std::complex<double>;

enum class AxisRole { Time, Transverse, Distinguished };

struct Axis {
  AxisRole role = AxisRole::Transverse;
  std::size_t n = 0;
  double length = 0.0;  // period; for the time axis n*dt
};

enum class Repr { Physical, FrequencySpatial, FrequencyFull, Mixed };

/// Dense complex tensor in row-major order. Axis order is always
/// [time] transverse... [distinguished]; the time axis, when present, is outermost.
/// Each axis carries its own physical/frequency flag.
class Field {
 public:
  Field() = default;
  explicit Field(std::vector<Axis> axes, double t0 = 0.0);

  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t extent(std::size_t k) const { return axes_[k].n; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  bool spectral(std::size_t k) const { return spectral_[k]; }
  void set_spectral(std::size_t k, bool v) { spectral_[k] = v; }
  Repr repr() const;

  bool has_time() const { return !axes_.empty() && axes_[0].role == AxisRole::Time; }
  bool has_distinguished() const {
    return !axes_.empty() && axes_.back().role == AxisRole::Distinguished;
  }
  // Index of the time axis; only valid when has_time().
  std::size_t time_axis() const { return 0; }
  std::size_t distinguished_axis() const { return axes_.size() - 1; }
  std::vector<std::size_t> transverse_axes() const;
  std::vector<std::size_t> spatial_axes() const;
  std::vector<std::size_t> all_axes() const;
  std::size_t transverse_count() const { return transverse_axes().size(); }

  // Time slabs: sample k sits at t0 + k*dt.
  double t0() const { return t0_; }
  void set_t0(double t0) { t0_ = t0; }
  double dt() const;
  std::size_t time_count() const { return has_time() ? axes_[0].n : 1; }
  double time_at(std::size_t k) const { return t0_ + static_cast<double>(k) * dt(); }

  // Number of samples in one time slice (the whole field when there is no time axis).
  std::size_t spatial_size() const { return size() / time_count(); }

  double spacing(std::size_t k) const { return axes_[k].length / static_cast<double>(axes_[k].n); }
  // Physical coordinate of bin j on axis k (wrapped so the origin is bin 0; time is not wrapped).
  double coord(std::size_t k, std::size_t j) const;
  // Angular frequency of bin j on axis k.
  double freq(std::size_t k, std::size_t j) const;
  // Product of the spacings: quadrature weight of one sample.
  double cell_volume() const;
  double cell_volume(const std::vector<std::size_t>& over) const;

  bool same_shape(const Field& other) const;

 private:
  std::vector<Axis> axes_;
  std::vector<bool> spectral_;
  std::vector<std::size_t> strides_;
  std::vector<cplx> data_;
  double t0_ = 0.0;
};

using TimeSlab = Field;

/// Spatial field (x_1..x_{d-1}, x_d) on the grid.
Field spatial_field(const GridSpec& g);
/// Field over the transverse axes x_1..x_{d-1} only.
Field transverse_field(const GridSpec& g);
/// Slab with nt time samples starting at t0 with step dt, over the transverse axes and,
/// optionally, x_d.
TimeSlab make_slab(const GridSpec& g, std::size_t nt, double t0, double dt, bool with_distinguished);
/// Slab with the given spatial layout (a field without a time axis).
TimeSlab make_slab(const Field& spatial_template, std::size_t nt, double t0, double dt);

/// Copies time slice k of a slab into a spatial field (and back).
Field slice(const TimeSlab& s, std::size_t k);
void set_slice(TimeSlab& s, std::size_t k, const Field& f);

/// |xi|^2 over the transverse axes and xi_d (0 when absent) for every sample of one
/// spatial slice, evaluated on the frequency lattice regardless of the repr flags.
std::vector<double> transverse_freq_sq(const Field& f);
std::vector<double> distinguished_freq(const Field& f);
/// Frequency of every spatial sample along the given transverse axis.
std::vector<double> axis_freq(const Field& f, std::size_t axis);

// Elementwise helpers.
double max_abs(const Field& f);
Field& axpy(cplx a, const Field& x, Field& y);  // y += a*x
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx c, const Field& a);

}  // namespace dzak
