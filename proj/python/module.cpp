// Copyright 2026 The phasetrack authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasetrack/analysis.hpp"
#include "phasetrack/bench.hpp"
#include "phasetrack/cli.hpp"
#include "phasetrack/dsp.hpp"
#include "phasetrack/gaussian.hpp"
#include "phasetrack/scenario.hpp"
#include "phasetrack/signal.hpp"
#include "phasetrack/trajectory.hpp"
#include "phasetrack/version.hpp"

namespace py = pybind11;
using namespace phasetrack;

namespace {

py::array_t<double> records_array(const std::vector<SampleRecord>& records) {
  py::array_t<double> out({static_cast<py::ssize_t>(records.size()), py::ssize_t(3)});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    const auto& record = records[static_cast<std::size_t>(i)];
    view(i, 0) = record.t;
    view(i, 1) = record.u;
    view(i, 2) = record.v;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(phasetrack, m) {
  m.doc() = "Gaussian-optics simulator for simultaneous quadrature monitoring "
            "with an entangled reference";
  m.attr("__version__") = kVersion;

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<PhysicsError>(m, "PhysicsError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // --- gaussian core ---
  py::class_<QuadratureState>(m, "QuadratureState")
      .def(py::init<>())
      .def_readwrite("mean", &QuadratureState::mean)
      .def_readwrite("cov", &QuadratureState::cov)
      .def_property_readonly("n_modes", &QuadratureState::n_modes);

  py::enum_<Quadrature>(m, "Quadrature").value("X", Quadrature::X).value("Y", Quadrature::Y);
  py::enum_<CombineSign>(m, "CombineSign")
      .value("Plus", CombineSign::Plus)
      .value("Minus", CombineSign::Minus);

  py::class_<LossChannel>(m, "LossChannel")
      .def(py::init<double>(), py::arg("eta"))
      .def_readonly("eta", &LossChannel::eta);

  py::class_<HomodyneMoments>(m, "HomodyneMoments")
      .def_readonly("mean", &HomodyneMoments::mean)
      .def_readonly("variance", &HomodyneMoments::variance);

  m.def("vacuum", &vacuum, py::arg("n_modes"));
  m.def("squeeze", &squeeze, py::arg("state"), py::arg("mode"), py::arg("r"), py::arg("theta"));
  m.def("beamsplitter", &beamsplitter, py::arg("state"), py::arg("mode_i"), py::arg("mode_j"),
        py::arg("transmissivity"), py::arg("phase") = 0.0);
  m.def("displace", &displace, py::arg("state"), py::arg("mode"), py::arg("dx"), py::arg("dy"));
  m.def("loss", &loss, py::arg("state"), py::arg("mode"), py::arg("channel"));
  m.def("phase_rotate", &phase_rotate, py::arg("state"), py::arg("mode"), py::arg("phi"));
  m.def("homodyne_moments", &homodyne_moments, py::arg("state"), py::arg("mode"),
        py::arg("theta"));
  m.def("joint_quadrature_variance", &joint_quadrature_variance, py::arg("state"),
        py::arg("mode_i"), py::arg("mode_j"), py::arg("quadrature"), py::arg("sign"));
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("cov"));
  m.def("is_physical", &is_physical, py::arg("state"), py::arg("tol") = 1e-9);
  m.def("squeeze_parameter_from_db", &squeeze_parameter_from_db, py::arg("db"));

  // --- bench model ---
  py::class_<BenchConfig>(m, "BenchConfig")
      .def(py::init<>())
      .def_readwrite("squeezer1_db", &BenchConfig::squeezer1_db)
      .def_readwrite("squeezer2_db", &BenchConfig::squeezer2_db)
      .def_readwrite("bs1_visibility", &BenchConfig::bs1_visibility)
      .def_readwrite("bs3_visibility", &BenchConfig::bs3_visibility)
      .def_readwrite("arm_loss_a", &BenchConfig::arm_loss_a)
      .def_readwrite("arm_loss_b", &BenchConfig::arm_loss_b)
      .def_readwrite("detector_efficiency", &BenchConfig::detector_efficiency)
      .def_readwrite("bs2_reflectivity", &BenchConfig::bs2_reflectivity)
      .def_readwrite("lo_phase_1", &BenchConfig::lo_phase_1)
      .def_readwrite("lo_phase_2", &BenchConfig::lo_phase_2)
      .def_readwrite("entanglement_on", &BenchConfig::entanglement_on);

  py::class_<ReadoutModel>(m, "ReadoutModel")
      .def(py::init<>())
      .def_readwrite("gain", &ReadoutModel::gain)
      .def_readwrite("noise_cov", &ReadoutModel::noise_cov);

  m.def("build_bench", &build_bench, py::arg("config"));
  m.def("visibility_to_efficiency", &visibility_to_efficiency, py::arg("v"));
  m.def("predicted_uncertainty_product", &predicted_uncertainty_product, py::arg("model"));
  m.def("inferred_noise_cov", &inferred_noise_cov, py::arg("model"));

  // --- trajectory ---
  py::class_<MeanPoint>(m, "MeanPoint")
      .def_readonly("x", &MeanPoint::x)
      .def_readonly("y", &MeanPoint::y);

  py::class_<TrajectorySpec>(m, "TrajectorySpec")
      .def(py::init<>())
      .def_readwrite("duration", &TrajectorySpec::duration)
      .def_readwrite("radius", &TrajectorySpec::radius);

  m.def("zero_trajectory", &zero_trajectory, py::arg("duration"));
  m.def("constant_trajectory", &constant_trajectory, py::arg("x"), py::arg("y"),
        py::arg("duration"));
  m.def("fig4_top_preset", &fig4_top_preset, py::arg("duration") = 5e-3,
        py::arg("sweep_cycles") = 0.92);
  m.def("fig4_bottom_preset", &fig4_bottom_preset, py::arg("duration") = 5e-3,
        py::arg("radius_start") = 9.0, py::arg("radius_end") = 1.5,
        py::arg("phase_cycles") = 1.25);
  m.def(
      "sample_trajectory",
      [](const TrajectorySpec& spec, double t) {
        const MeanPoint p = sample_trajectory(spec, t);
        return py::make_tuple(p.x, p.y);
      },
      py::arg("spec"), py::arg("t"));

  // --- records / signal synthesis ---
  py::class_<SampleRecord>(m, "SampleRecord")
      .def_readwrite("t", &SampleRecord::t)
      .def_readwrite("u", &SampleRecord::u)
      .def_readwrite("v", &SampleRecord::v);

  py::class_<RfTrace>(m, "RfTrace")
      .def_readonly("sample_rate", &RfTrace::sample_rate)
      .def_readonly("carrier_f", &RfTrace::carrier_f)
      .def_readonly("t0", &RfTrace::t0)
      .def_property_readonly("bhd1",
                             [](const RfTrace& trace) { return py::array(py::cast(trace.bhd1)); })
      .def_property_readonly("bhd2",
                             [](const RfTrace& trace) { return py::array(py::cast(trace.bhd2)); });

  py::class_<RfSynthOptions>(m, "RfSynthOptions")
      .def(py::init<>())
      .def_readwrite("sample_rate", &RfSynthOptions::sample_rate)
      .def_readwrite("carrier_f", &RfSynthOptions::carrier_f)
      .def_readwrite("noise_oversample_rate", &RfSynthOptions::noise_oversample_rate)
      .def_readwrite("broadband_floor", &RfSynthOptions::broadband_floor)
      .def_readwrite("broadband_sigma", &RfSynthOptions::broadband_sigma)
      .def_readwrite("guard", &RfSynthOptions::guard)
      .def_readwrite("inject_noise", &RfSynthOptions::inject_noise);

  m.def("simulate_baseband", &simulate_baseband, py::arg("model"), py::arg("spec"),
        py::arg("dt") = 1e-5, py::arg("seed") = 1);
  m.def("synthesize_rf", &synthesize_rf, py::arg("model"), py::arg("spec"), py::arg("duration"),
        py::arg("seed") = 1, py::arg("options") = RfSynthOptions{});
  m.def("records_array", &records_array, py::arg("records"),
        "Records as an (n, 3) array of (t, u, v)");

  // --- dsp chain ---
  py::class_<FirSpec>(m, "FirSpec")
      .def(py::init<>())
      .def_readwrite("cutoff_hz", &FirSpec::cutoff_hz)
      .def_readwrite("transition_hz", &FirSpec::transition_hz);

  py::class_<CalibrationScale>(m, "CalibrationScale")
      .def(py::init<>())
      .def_readwrite("scale_u", &CalibrationScale::scale_u)
      .def_readwrite("scale_v", &CalibrationScale::scale_v);

  m.def("fir_tap_count", &fir_tap_count, py::arg("spec"), py::arg("sample_rate"));
  m.def("design_lowpass_taps", &design_lowpass_taps, py::arg("spec"), py::arg("sample_rate"));
  m.def("fir_response_db",
        py::overload_cast<const FirSpec&, double, double>(&fir_response_db), py::arg("spec"),
        py::arg("freq_hz"), py::arg("sample_rate") = 2e8);
  m.def("antialias", &antialias, py::arg("trace"), py::arg("corner_hz") = 5e7,
        py::arg("taps") = 63);
  m.def("demodulate", &demodulate, py::arg("trace"), py::arg("f_hz"), py::arg("phase"),
        py::arg("fir"), py::arg("out_dt") = 1e-5);
  m.def("calibrate", &calibrate, py::arg("vacuum_records"), py::arg("min_records") = 2600);
  m.def("apply_calibration", &apply_calibration, py::arg("records"), py::arg("scale"));

  // --- analysis ---
  py::class_<WindowedVariance>(m, "WindowedVariance")
      .def_readonly("window", &WindowedVariance::window)
      .def_readonly("n_used", &WindowedVariance::n_used)
      .def_readonly("known_mean", &WindowedVariance::known_mean)
      .def_readonly("var_u", &WindowedVariance::var_u)
      .def_readonly("var_v", &WindowedVariance::var_v)
      .def_readonly("cov_uv", &WindowedVariance::cov_uv)
      .def_readonly("per_window_u", &WindowedVariance::per_window_u)
      .def_readonly("per_window_v", &WindowedVariance::per_window_v);

  m.def(
      "windowed_variance",
      [](const std::vector<SampleRecord>& records, int window, const TrajectorySpec* trajectory,
         const ReadoutModel* model) {
        return windowed_variance(records, window, trajectory, model);
      },
      py::arg("records"), py::arg("window"), py::arg("trajectory") = nullptr,
      py::arg("model") = nullptr);

  py::class_<UncertaintyProduct>(m, "UncertaintyProduct")
      .def_readonly("var_x_inferred", &UncertaintyProduct::var_x_inferred)
      .def_readonly("var_y_inferred", &UncertaintyProduct::var_y_inferred)
      .def_readonly("product", &UncertaintyProduct::product)
      .def_readonly("violation_factor_eq2", &UncertaintyProduct::violation_factor_eq2);

  m.def("uncertainty_product", &uncertainty_product, py::arg("variance"), py::arg("model"));

  py::class_<TrajectoryError>(m, "TrajectoryError")
      .def_readonly("rms_x", &TrajectoryError::rms_x)
      .def_readonly("rms_y", &TrajectoryError::rms_y)
      .def_readonly("residual_x", &TrajectoryError::residual_x)
      .def_readonly("residual_y", &TrajectoryError::residual_y);

  m.def(
      "trajectory_error",
      [](const std::vector<SampleRecord>& records, const TrajectorySpec& trajectory,
         const ReadoutModel& model) { return trajectory_error(records, trajectory, model); },
      py::arg("records"), py::arg("trajectory"), py::arg("model"));

  // --- scenario runner ---
  m.def(
      "run_scenario_file",
      [](const std::string& path, const std::string& out_dir) {
        const Scenario sc = load_scenario(path);
        const RunArtifacts artifacts = run_scenario_to(sc, out_dir);
        return summary_to_json(artifacts.summary, sc).dump();
      },
      py::arg("path"), py::arg("out_dir") = ".",
      "Run a scenario file; returns the summary as a JSON string");

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv;
        argv.push_back("phasetrack");
        for (const auto& arg : args) argv.push_back(arg.c_str());
        return cli_main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Invoke the CLI entry point with a list of arguments");
}
