#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qats/io.hpp"

namespace py = pybind11;

namespace {

qats::Matrix<double> to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("matrix must be nonempty");
  const std::size_t cols = rows.front().size();
  qats::Matrix<double> out(static_cast<std::int64_t>(rows.size()),
                           static_cast<std::int64_t>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw std::invalid_argument("matrix rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)) = rows[i][j];
  }
  return out;
}

std::vector<std::vector<double>> from_matrix(const qats::Matrix<double>& mat) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(mat.rows()));
  for (std::int64_t i = 0; i < mat.rows(); ++i) {
    out[static_cast<std::size_t>(i)].assign(mat.row(i), mat.row(i) + mat.cols());
  }
  return out;
}

qats::SearchParams make_params(double nu, int d_o, int v_o, int n_seeds, bool rotated) {
  qats::SearchParams p;
  p.nu = nu;
  p.d_o = d_o;
  p.v_o = v_o;
  p.n_seeds = n_seeds;
  p.rotated = rotated;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Fast ternary-segmentation decoding for hidden Markov models";

  py::register_exception<qats::InfeasibleError>(mod, "InfeasibleError", PyExc_RuntimeError);

  py::class_<qats::HmmModel>(mod, "Model")
      .def_property_readonly("m", &qats::HmmModel::m)
      .def_property_readonly("pi", [](const qats::HmmModel& mdl) { return mdl.pi(); })
      .def_property_readonly("trans",
                             [](const qats::HmmModel& mdl) { return from_matrix(mdl.trans()); })
      .def_property_readonly("means",
                             [](const qats::HmmModel& mdl) {
                               if (!mdl.gaussian()) throw std::invalid_argument("not gaussian");
                               return mdl.gaussian()->means();
                             })
      .def_property_readonly("sigma", [](const qats::HmmModel& mdl) {
        if (!mdl.gaussian()) throw std::invalid_argument("not gaussian");
        return mdl.gaussian()->sigma();
      });

  mod.def(
      "build_model",
      [](const std::vector<double>& pi, const std::vector<std::vector<double>>& trans,
         const std::vector<double>& means, double sigma) {
        return qats::build_model(pi, to_matrix(trans), qats::GaussianEmission(means, sigma));
      },
      py::arg("pi"), py::arg("trans"), py::arg("means"), py::arg("sigma"),
      "Gaussian-emission model from initial, transition, means and shared sigma");

  mod.def("load_model", &qats::load_model_json, py::arg("path"));
  mod.def("save_model", &qats::save_model_json, py::arg("model"), py::arg("path"));

  mod.def(
      "uniform_transition",
      [](int m, std::int64_t n, std::int64_t s) {
        return from_matrix(qats::uniform_transition(m, n, s));
      },
      py::arg("m"), py::arg("n"), py::arg("s"));

  mod.def("expected_segments", &qats::expected_segments, py::arg("n"), py::arg("p"));

  mod.def(
      "simulate",
      [](std::int64_t n, int m, std::int64_t s, double sigma, std::uint64_t seed,
         std::int64_t rep) {
        qats::SimConfig config;
        config.n = n;
        config.m = m;
        config.s = s;
        config.sigma = sigma;
        config.seed = seed;
        config.replication_id = rep;
        config.validate();
        const qats::SimOutput sim = qats::simulate_hmm(config);
        py::dict out;
        out["x_true"] = sim.x_true;
        out["y"] = sim.y;
        out["true_segments"] = sim.true_segments;
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("s"), py::arg("sigma") = 1.0, py::arg("seed") = 0,
      py::arg("rep") = 0);

  mod.def(
      "decode_qats",
      [](const qats::HmmModel& model, const std::vector<double>& y, double nu, int d_o, int v_o,
         int n_seeds, bool rotated) {
        const qats::SearchParams params = make_params(nu, d_o, v_o, n_seeds, rotated);
        const qats::CumScores scores = qats::build_cum_scores(model, y);
        const qats::DecodeResult res = qats::qats_decode(model, scores, params);
        py::dict out;
        out["path"] = res.path;
        py::list segs;
        for (std::size_t i = 0; i < res.segmentation.segments.size(); ++i) {
          const auto& seg = res.segmentation.segments[i];
          segs.append(py::make_tuple(seg.l, seg.r, res.segmentation.states[i]));
        }
        out["segments"] = segs;
        out["loop_iterations"] = res.loop_iterations;
        out["probes_h2"] = res.probes_h2;
        out["probes_h3"] = res.probes_h3;
        out["wall_ms"] = res.wall_ms;
        return out;
      },
      py::arg("model"), py::arg("y"), py::arg("nu") = 0.5, py::arg("d_o") = 3,
      py::arg("v_o") = 20, py::arg("n_seeds") = 3, py::arg("rotated") = false);

  mod.def(
      "decode_viterbi",
      [](const qats::HmmModel& model, const std::vector<double>& y) {
        const qats::LogDensityMatrix g = qats::build_log_densities(model, y);
        const qats::ViterbiResult res = qats::viterbi_decode(model, g);
        py::dict out;
        out["path"] = res.path;
        out["log_lik"] = res.log_lik;
        out["all_impossible"] = res.all_impossible;
        return out;
      },
      py::arg("model"), py::arg("y"));

  mod.def(
      "complete_log_lik",
      [](const qats::HmmModel& model, const std::vector<double>& y,
         const std::vector<std::int32_t>& path) {
        return qats::complete_log_lik(model, qats::build_log_densities(model, y), path);
      },
      py::arg("model"), py::arg("y"), py::arg("path"));

  mod.def(
      "distance",
      [](const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b, double w) {
        return qats::distance(a, b, w);
      },
      py::arg("a"), py::arg("b"), py::arg("w") = 0.0);

  mod.def(
      "quantiles",
      [](const std::vector<double>& samples, const std::vector<double>& betas) {
        return qats::quantiles(samples, betas);
      },
      py::arg("samples"), py::arg("betas"));
}
