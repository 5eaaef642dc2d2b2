#include "dzak/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "dzak/error.hpp"

namespace dzak {
namespace {

using PlanKey = std::tuple<std::vector<std::size_t>, std::vector<std::size_t>, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

  // Plans are created in place and unaligned, so one plan serves every buffer of the shape.
  fftw_plan get(const std::vector<std::size_t>& shape, const std::vector<std::size_t>& axes, int sign,
                cplx* buf) {
    std::lock_guard lock(mutex_);
    PlanKey key{shape, axes, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t k = shape.size() - 1; k-- > 0;) strides[k] = strides[k + 1] * shape[k + 1];
    std::vector<fftw_iodim64> dims, loops;
    std::vector<bool> chosen(shape.size(), false);
    for (auto a : axes) chosen[a] = true;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      fftw_iodim64 d{static_cast<ptrdiff_t>(shape[k]), static_cast<ptrdiff_t>(strides[k]),
                     static_cast<ptrdiff_t>(strides[k])};
      (chosen[k] ? dims : loops).push_back(d);
    }
    auto* io = reinterpret_cast<fftw_complex*>(buf);
    fftw_plan p = fftw_plan_guru64_dft(static_cast<int>(dims.size()), dims.data(),
                                       static_cast<int>(loops.size()), loops.data(), io, io, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(p != nullptr, ErrorDomain::Spectral, errc::numerical, "FFTW plan creation failed");
    plans_.emplace(std::move(key), p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform_inplace(Field& f, const std::vector<std::size_t>& axes, Direction dir) {
  if (axes.empty()) return;
  std::vector<std::size_t> sorted = axes;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    require(sorted[i] < f.rank() && (i == 0 || sorted[i] != sorted[i - 1]), ErrorDomain::Spectral,
            errc::precondition, "transform: invalid axis list");
    const bool want_spectral = dir == Direction::Inverse;
    require(f.spectral(sorted[i]) == want_spectral, ErrorDomain::Spectral, errc::representation,
            "transform: axis " + std::to_string(sorted[i]) + " is already " +
                (want_spectral ? "physical" : "spectral"));
  }
  std::vector<std::size_t> shape(f.rank());
  double count = 1.0;
  for (std::size_t k = 0; k < f.rank(); ++k) shape[k] = f.extent(k);
  for (auto a : sorted) count *= static_cast<double>(f.extent(a));

  const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan p = cache().get(shape, sorted, sign, f.data().data());
  auto* io = reinterpret_cast<fftw_complex*>(f.data().data());
  fftw_execute_dft(p, io, io);
  const double scale = 1.0 / std::sqrt(count);
  for (auto& v : f.data()) v *= scale;
  for (auto a : sorted) f.set_spectral(a, dir == Direction::Forward);
}

Field transform(const Field& f, const std::vector<std::size_t>& axes, Direction dir) {
  Field out = f;
  transform_inplace(out, axes, dir);
  return out;
}

Field to_frequency(const Field& f) { return transform(f, f.spatial_axes(), Direction::Forward); }
Field to_physical(const Field& f) { return transform(f, f.spatial_axes(), Direction::Inverse); }

double continuum_scale(const Field& f, const std::vector<std::size_t>& axes) {
  double s = 1.0;
  for (auto a : axes)
    s *= f.axes()[a].length / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(f.extent(a)));
  return s;
}

}  // namespace dzak
