#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tscs/config_file.hpp"
#include "tscs/errors.hpp"
#include "tscs/estimators.hpp"
#include "tscs/harness.hpp"

namespace py = pybind11;
using namespace tscs;

namespace {

py::list shifts_to_list(const std::vector<GridShift>& shifts, bool planar) {
  py::list out;
  for (const auto& s : shifts) {
    if (planar)
      out.append(py::make_tuple(s.axis1, s.axis2));
    else
      out.append(s.axis1);
  }
  return out;
}

py::dict report_to_dict(const EstimateReport& r, bool planar) {
  py::dict d;
  d["channels"] = r.channels;
  d["col_support"] = r.col_support.indices();
  d["offsets"] = shifts_to_list(r.offsets, planar);
  std::vector<std::vector<int>> patterns;
  for (const auto& p : r.row_patterns) patterns.push_back(p.indices());
  d["row_patterns"] = patterns;
  d["warnings"] = r.diagnostics.warnings;
  return d;
}

EstimatorInput make_input(std::vector<ComplexMatrix> y, ComplexMatrix a, int l1, std::vector<int> l2,
                          const std::string& ris) {
  EstimatorInput in;
  in.y = std::move(y);
  in.a = std::move(a);
  in.l1 = l1;
  in.l2 = std::move(l2);
  in.geometry = ris.empty() ? ArrayGeometry::ula(static_cast<int>(in.a.cols())) : parse_geometry(ris);
  return in;
}

SystemConfig make_config(const py::kwargs& kwargs) {
  SystemConfig c;
  for (const auto& [k, v] : kwargs) {
    const auto key = py::str(k).cast<std::string>();
    if (key == "noiseless") {
      if (v.cast<bool>()) c.snr_db = kNoiseless;
      continue;
    }
    apply_config_value(c, key, py::str(v).cast<std::string>());
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_tscs, m) {
  m.doc() = "Structured compressive sensing estimation of RIS cascaded channels";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  py::register_exception<MetricUndefined>(m, "MetricUndefined", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("dft_matrix", &dft_matrix, py::arg("n"));
  m.def("circ_xcorr_1d", &circ_xcorr_1d, py::arg("u"), py::arg("v"));
  m.def("circ_xcorr_2d", &circ_xcorr_2d, py::arg("u"), py::arg("v"));

  m.def(
      "simulate",
      [](std::uint64_t seed, const py::kwargs& kwargs) {
        const auto c = make_config(kwargs);
        const auto d = generate_trial_data(c, seed);
        const bool planar = c.scenario.geometry.is_planar();
        py::dict out;
        out["y"] = d.measurements.y;
        out["a"] = d.setup.a;
        out["noise_variance"] = d.measurements.noise_variance;
        out["channels"] = d.truth.channels;
        out["col_support"] = d.truth.col_support.indices();
        out["offsets"] = shifts_to_list(d.truth.offsets, planar);
        std::vector<std::vector<int>> patterns;
        for (const auto& p : d.truth.row_patterns) patterns.push_back(p.indices());
        out["row_patterns"] = patterns;
        std::vector<int> l2;
        for (const auto& p : d.realization.h_paths) l2.push_back(static_cast<int>(p.size()));
        out["l2"] = l2;
        out["ris"] = c.scenario.geometry.is_planar()
                         ? std::to_string(c.scenario.geometry.n1()) + "x" + std::to_string(c.scenario.geometry.n2())
                         : std::to_string(c.scenario.geometry.elements());
        return out;
      },
      py::arg("seed"),
      "Draw one trial (channels, sensing matrix, measurements). Keyword arguments use the "
      "config-file keys, e.g. users=8, ris='8x16', pilots=64, noiseless=True.");

  m.def(
      "mtscs_ce",
      [](std::vector<ComplexMatrix> y, ComplexMatrix a, int l1, std::vector<int> l2, const std::string& ris) {
        auto in = make_input(std::move(y), std::move(a), l1, std::move(l2), ris);
        const bool planar = in.geometry.is_planar();
        return report_to_dict(planar ? mtscs_ce_upa(in) : mtscs_ce(in), planar);
      },
      py::arg("y"), py::arg("a"), py::arg("l1"), py::arg("l2"), py::arg("ris") = "");
  m.def(
      "baseline_omp",
      [](std::vector<ComplexMatrix> y, ComplexMatrix a, int l1, std::vector<int> l2) {
        return report_to_dict(baseline_omp(make_input(std::move(y), std::move(a), l1, std::move(l2), "")), false);
      },
      py::arg("y"), py::arg("a"), py::arg("l1"), py::arg("l2"));
  m.def(
      "baseline_row_structured",
      [](std::vector<ComplexMatrix> y, ComplexMatrix a, int l1, std::vector<int> l2) {
        return report_to_dict(
            baseline_row_structured(make_input(std::move(y), std::move(a), l1, std::move(l2), "")), false);
      },
      py::arg("y"), py::arg("a"), py::arg("l1"), py::arg("l2"));

  m.def("nmse_db", &nmse, py::arg("estimate"), py::arg("truth"));

  m.def(
      "sweep",
      [](const std::string& axis, std::vector<double> values, const py::kwargs& kwargs) {
        SweepAxis ax;
        if (axis == "pilot_length")
          ax = SweepAxis::PilotLength;
        else if (axis == "snr_db")
          ax = SweepAxis::Snr;
        else
          throw InvalidArgument("axis must be 'pilot_length' or 'snr_db'");
        SweepResult r;
        {
          const auto c = make_config(kwargs);
          py::gil_scoped_release release;
          r = run_sweep(c, ax, std::move(values));
        }
        return format_results(r);
      },
      py::arg("axis"), py::arg("values"), "Run a sweep and return the CSV text.");
}
