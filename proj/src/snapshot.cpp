#include "dzak/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dzak/error.hpp"

namespace dzak {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'D', 'Z', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& o, T v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(static_cast<bool>(in), ErrorDomain::Solver, errc::io, "truncated snapshot " + path);
  return v;
}
}  // namespace

void write_snapshot(const std::string& path, const SystemState& state) {
  const Field& E = state.E;
  require(E.same_shape(state.Nd) && !E.has_time(), ErrorDomain::Solver, errc::precondition,
          "snapshot: E and Nd must be spatial fields on one grid");
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(o), ErrorDomain::Solver, errc::io, "cannot open " + path);
  o.write(kMagic, 4);
  put<std::uint32_t>(o, kVersion);
  put<std::uint32_t>(o, static_cast<std::uint32_t>(E.rank()));
  for (std::size_t k = 0; k < E.rank(); ++k) put<std::uint64_t>(o, E.extent(k));
  for (std::size_t k = 0; k < E.rank(); ++k) put<double>(o, E.axes()[k].length);
  put<double>(o, state.time);
  for (const Field* f : {&state.E, &state.Nd})
    o.write(reinterpret_cast<const char*>(f->data().data()), static_cast<std::streamsize>(f->size() * sizeof(cplx)));
  require(static_cast<bool>(o), ErrorDomain::Solver, errc::io, "write failed for " + path);
}

SystemState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorDomain::Solver, errc::io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  require(in && std::memcmp(magic, kMagic, 4) == 0, ErrorDomain::Solver, errc::io, path + " is not a DZK1 snapshot");
  const auto version = get<std::uint32_t>(in, path);
  require(version == kVersion, ErrorDomain::Solver, errc::io, "unsupported snapshot version");
  const auto d = get<std::uint32_t>(in, path);
  require(d >= 2 && d <= 8, ErrorDomain::Solver, errc::io, "bad snapshot dimension");
  std::vector<Axis> axes(d);
  for (auto& a : axes) a.n = get<std::uint64_t>(in, path);
  for (auto& a : axes) a.length = get<double>(in, path);
  for (std::size_t k = 0; k < d; ++k) {
    axes[k].role = k + 1 == d ? AxisRole::Distinguished : AxisRole::Transverse;
    require(axes[k].n >= 1 && axes[k].n <= (1u << 20) && axes[k].length > 0.0, ErrorDomain::Solver, errc::io,
            "bad snapshot axis");
  }
  SystemState st;
  st.time = get<double>(in, path);
  st.E = Field(axes);
  st.Nd = Field(axes);
  for (Field* f : {&st.E, &st.Nd}) {
    in.read(reinterpret_cast<char*>(f->data().data()), static_cast<std::streamsize>(f->size() * sizeof(cplx)));
    require(static_cast<bool>(in), ErrorDomain::Solver, errc::io, "truncated snapshot " + path);
  }
  return st;
}

}  // namespace dzak
