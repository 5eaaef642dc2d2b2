#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dzak/appendix.hpp"
#include "dzak/config.hpp"
#include "dzak/error.hpp"
#include "dzak/flows.hpp"
#include "dzak/geometry.hpp"
#include "dzak/lp_norm.hpp"
#include "dzak/norms.hpp"
#include "dzak/projections.hpp"
#include "dzak/run.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace dzak;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

// A transverse-only field with one axis per array dimension, every period `box`.
Field from_array(const CArray& a, double box) {
  std::vector<Axis> axes;
  for (py::ssize_t k = 0; k < a.ndim(); ++k) axes.push_back({AxisRole::Transverse, static_cast<std::size_t>(a.shape(k)), box});
  Field f(axes);
  std::copy(a.data(), a.data() + a.size(), f.data().begin());
  return f;
}

CArray to_array(const Field& f) {
  std::vector<py::ssize_t> shape;
  for (const auto& ax : f.axes()) shape.push_back(static_cast<py::ssize_t>(ax.n));
  CArray out(shape);
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

FlowKind flow_kind(const std::string& name) {
  if (name == "schrodinger") return FlowKind::SchrodingerTransverse;
  if (name == "half-wave") return FlowKind::HalfWave;
  if (name == "half-wave-conj") return FlowKind::HalfWaveConjugate;
  throw py::value_error("flow must be schrodinger, half-wave or half-wave-conj");
}

py::dict outcome_dict(const RunOutcome& r) {
  py::list checks, artifacts;
  for (const auto& c : r.checks)
    checks.append(py::dict("name"_a = c.name, "value"_a = c.value, "bound"_a = c.bound, "passed"_a = c.pass));
  for (const auto& a : r.artifacts)
    artifacts.append(py::dict("path"_a = a.path, "sha256"_a = a.sha256, "bytes"_a = a.bytes));
  return py::dict("exit_code"_a = r.exit_code, "error"_a = r.error, "checks"_a = checks, "artifacts"_a = artifacts,
                  "wall_seconds"_a = r.wall_seconds);
}

}  // namespace

PYBIND11_MODULE(_dzak, m) {
  m.doc() = "Spectral toolkit for the degenerate Zakharov system";
  m.attr("__version__") = tool_version();

  // DzakError(message, exit_code)
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc;
  exc.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "DzakError", PyExc_RuntimeError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(exc.get_stored().ptr(), py::make_tuple(e.what(), e.exit_code()).ptr());
    }
  });

  m.def("sha256_hex", [](py::bytes b) { return sha256_hex(std::string(b)); }, "b"_a);

  m.def(
      "config_schema",
      [] {
        py::dict out;
        for (const auto& s : config_schema()) {
          py::dict keys;
          for (const auto& k : s.keys) keys[py::str(k.name)] = py::make_tuple(k.default_value, k.doc);
          out[py::str(s.name)] = keys;
        }
        return out;
      },
      "Sections and keys with (default, doc).");

  m.def(
      "effective_config",
      [](const std::string& command, const std::string& text) {
        return parse_config(text, parse_command(command)).effective_text();
      },
      "command"_a, "text"_a, "Validates text and returns the canonical config with defaults filled.");

  m.def(
      "run",
      [](const std::string& command, const std::string& text, const std::string& out_dir, py::object seed) {
        RunConfig c = parse_config(text, parse_command(command));
        c.out_dir = out_dir;
        if (!seed.is_none()) c.run["seed"] = seed.cast<std::uint64_t>();
        RunOutcome r;
        {
          py::gil_scoped_release release;
          r = run(c);
        }
        return outcome_dict(r);
      },
      "command"_a, "text"_a, "out_dir"_a, "seed"_a = py::none(),
      "Same as the dzak CLI; returns exit_code, error, checks and artifacts.");

  m.def(
      "apply_flow",
      [](const std::string& flow, double t, const CArray& u, double box) {
        return to_array(apply_flow(flow_kind(flow), t, from_array(u, box)));
      },
      "flow"_a, "t"_a, "u"_a, "box"_a, "Linear flow on a periodic transverse lattice (physical samples).");

  m.def(
      "annulus_projection",
      [](const CArray& u, double box, double N) {
        return to_array(apply_projection({ProjKind::Annulus, N}, from_array(u, box)));
      },
      "u"_a, "box"_a, "N"_a);

  m.def(
      "directional_decompose",
      [](const CArray& u, double box, double N) {
        py::list out;
        for (const auto& f : directional_decompose(from_array(u, box), N)) out.append(to_array(f));
        return out;
      },
      "u"_a, "box"_a, "N"_a);

  m.def("l2_norm", [](const CArray& u, double box) { return l2_norm(from_array(u, box)); }, "u"_a, "box"_a);
  m.def("strichartz_exponent", &strichartz_exponent, "d"_a);

  m.def("ball_volume", &ball_volume, "n"_a, "r"_a = 1.0);
  m.def("lens_volume", &lens_volume, "n"_a, "dist"_a);
  m.def(
      "slab_ball_measure",
      [](int d, double N, double L, double r, int sign, std::uint64_t seed) {
        const McEstimate e = slab_ball_measure(d, N, L, r, sign, seed);
        return py::make_tuple(e.value, e.std_error);
      },
      "d"_a, "N"_a, "L"_a, "r"_a, "sign"_a = 1, "seed"_a = 1, "(value, standard error) of the slab-ball measure.");
}
