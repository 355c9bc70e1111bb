#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "tapgp/experiment.hpp"

namespace py = pybind11;
using namespace tapgp;

namespace {

std::vector<Point2> to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& xy) {
  if (xy.ndim() != 2 || xy.shape(1) != 2) throw std::invalid_argument("expected an (n, 2) array of points");
  std::vector<Point2> pts(static_cast<std::size_t>(xy.shape(0)));
  auto r = xy.unchecked<2>();
  for (py::ssize_t i = 0; i < xy.shape(0); ++i) pts[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
  return pts;
}

py::array_t<double> to_grid_array(const GridField& f, int res) {
  py::array_t<double> out({res, res});
  auto w = out.mutable_unchecked<2>();
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) w(row, col) = f[static_cast<std::size_t>(row) * res + col];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_tapgp, m) {
  m.doc() = R"pbdoc(
    Active tapping surface reconstruction: exact GP regression, the
    uncertainty x weight acquisition, a virtual tapping scene and the
    experiment loop.
  )pbdoc";

  py::register_exception<FactorizationFailure>(m, "FactorizationFailure", PyExc_RuntimeError);
  py::register_exception<ExhaustedGrid>(m, "ExhaustedGrid", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<KernelParams>(m, "KernelParams")
      .def(py::init([](double lengthscale_sq, double noise_var, double prior_mean) {
             KernelParams p{lengthscale_sq, noise_var, prior_mean};
             p.validate();
             return p;
           }),
           py::arg("lengthscale_sq") = 0.017, py::arg("noise_var") = 1e-6, py::arg("prior_mean") = 0.0)
      .def_readwrite("lengthscale_sq", &KernelParams::lengthscale_sq)
      .def_readwrite("noise_var", &KernelParams::noise_var)
      .def_readwrite("prior_mean", &KernelParams::prior_mean);

  m.def(
      "rbf",
      [](std::pair<double, double> a, std::pair<double, double> b, const KernelParams& p) {
        return rbf({a.first, a.second}, {b.first, b.second}, p);
      },
      py::arg("a"), py::arg("b"), py::arg("params") = KernelParams{});

  m.def(
      "kernel_matrix",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& xs,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& ys,
         const KernelParams& p) { return kernel_matrix(to_points(xs), to_points(ys), p); },
      py::arg("xs"), py::arg("ys"), py::arg("params") = KernelParams{});

  py::class_<FittedGP>(m, "FittedGP")
      .def_static(
          "fit",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& inputs,
             const std::vector<double>& values, const KernelParams& p) {
            return FittedGP::fit({to_points(inputs), values}, p);
          },
          py::arg("inputs"), py::arg("values"), py::arg("params") = KernelParams{})
      .def(
          "predict",
          [](const FittedGP& gp, const py::array_t<double, py::array::c_style | py::array::forcecast>& queries) {
            const auto preds = gp.predict(to_points(queries));
            py::array_t<double> mean(static_cast<py::ssize_t>(preds.size()));
            py::array_t<double> var(static_cast<py::ssize_t>(preds.size()));
            auto mw = mean.mutable_unchecked<1>();
            auto vw = var.mutable_unchecked<1>();
            for (std::size_t i = 0; i < preds.size(); ++i) {
              mw(static_cast<py::ssize_t>(i)) = preds[i].mean;
              vw(static_cast<py::ssize_t>(i)) = preds[i].variance;
            }
            return py::make_tuple(mean, var);
          },
          py::arg("queries"), "Posterior (mean, variance) arrays at an (n, 2) array of queries.")
      .def_property_readonly("factor", &FittedGP::factor)
      .def_property_readonly("weights", &FittedGP::weights);

  py::class_<SurfaceModelConfig>(m, "SurfaceModelConfig")
      .def(py::init<>())
      .def_readwrite("surface_kernel", &SurfaceModelConfig::surface_kernel)
      .def_readwrite("weight_kernel", &SurfaceModelConfig::weight_kernel)
      .def_readwrite("desk_in_surface_gp", &SurfaceModelConfig::desk_in_surface_gp);

  py::enum_<SuggestMode>(m, "SuggestMode")
      .value("Exploration", SuggestMode::Exploration)
      .value("UncertaintyOnly", SuggestMode::UncertaintyOnly);

  py::class_<ExplorationState>(m, "ExplorationState")
      .def(py::init([](const SurfaceModelConfig& c, int res) { return ExplorationState(c, CandidateGrid(res)); }),
           py::arg("config") = SurfaceModelConfig{}, py::arg("grid_resolution") = 47)
      .def(
          "ingest",
          [](ExplorationState& s, std::pair<double, double> pos, double height, bool on_surface) {
            s.ingest({{pos.first, pos.second}, height, on_surface});
          },
          py::arg("position"), py::arg("height"), py::arg("on_surface"))
      .def_property_readonly("n_taps", &ExplorationState::n_taps)
      .def_property_readonly("grid_resolution", [](const ExplorationState& s) { return s.grid().resolution(); })
      .def("grid_point",
           [](const ExplorationState& s, std::size_t i) {
             const auto& p = s.grid()[i];
             return std::make_pair(p.x, p.y);
           })
      .def("maps",
           [](const ExplorationState& s) {
             const auto maps = exploration_map(s, s.grid());
             const int res = s.grid().resolution();
             py::dict d;
             d["uncertainty"] = to_grid_array(maps.uncertainty, res);
             d["weight"] = to_grid_array(maps.weight, res);
             d["exploration"] = to_grid_array(maps.exploration, res);
             d["mean"] = to_grid_array(mean_map(s, s.grid()), res);
             return d;
           },
           "Fields as (res, res) arrays indexed [row (y), col (x)].")
      .def("suggest_next", &suggest_next, py::arg("mode") = SuggestMode::Exploration,
           "Grid index of the next tap.");

  py::class_<TapResult>(m, "TapResult")
      .def_readonly("height", &TapResult::height)
      .def_readonly("on_surface", &TapResult::on_surface)
      .def_readonly("raw_height_cm", &TapResult::raw_height_cm);

  py::class_<Scene>(m, "Scene")
      .def(py::init([](const std::string& object, double area_x_cm, double area_y_cm, double placement_x_cm,
                       double placement_y_cm, double height_scale_cm, double noise_sd_cm) {
             Scene::Options o;
             o.area_x_cm = area_x_cm;
             o.area_y_cm = area_y_cm;
             o.placement_x_cm = placement_x_cm;
             o.placement_y_cm = placement_y_cm;
             o.height_scale_cm = height_scale_cm;
             o.noise_sd_cm = noise_sd_cm;
             return Scene(object_by_name(object), o);
           }),
           py::arg("object") = "wave", py::arg("area_x_cm") = 23.0, py::arg("area_y_cm") = 23.0,
           py::arg("placement_x_cm") = 5.0, py::arg("placement_y_cm") = 8.5, py::arg("height_scale_cm") = 15.0,
           py::arg("noise_sd_cm") = 0.0)
      .def("tap", [](const Scene& s, std::pair<double, double> p) { return s.tap({p.first, p.second}); })
      .def("describe", &Scene::describe)
      .def_property_readonly("hash", &Scene::hash);

  py::enum_<Strategy>(m, "Strategy")
      .value("WeightedExploration", Strategy::WeightedExploration)
      .value("UncertaintyOnly", Strategy::UncertaintyOnly)
      .value("RandomSearch", Strategy::RandomSearch)
      .value("GridSearch", Strategy::GridSearch);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("budget", &RunConfig::budget)
      .def_readwrite("n_initial_random", &RunConfig::n_initial_random)
      .def_readwrite("grid_resolution", &RunConfig::grid_resolution)
      .def_readwrite("model", &RunConfig::model)
      .def_readwrite("strategy", &RunConfig::strategy)
      .def_readwrite("snapshot_every", &RunConfig::snapshot_every);

  py::class_<RunResult>(m, "RunResult")
      .def_property_readonly("taps",
                             [](const RunResult& r) {
                               py::list out;
                               for (const auto& t : r.trace.taps) {
                                 py::dict d;
                                 d["iteration"] = t.iteration;
                                 d["source"] = t.source;
                                 d["grid_index"] = t.grid_index;
                                 d["position"] = py::make_tuple(t.position.x, t.position.y);
                                 d["raw_height_cm"] = t.result.raw_height_cm;
                                 d["on_surface"] = t.result.on_surface;
                                 d["cumulative_on_surface"] = t.cumulative_on_surface;
                                 out.append(d);
                               }
                               return out;
                             })
      .def_property_readonly("stopped_early", [](const RunResult& r) { return r.trace.stopped_early; })
      .def_property_readonly("on_surface_ratio", [](const RunResult& r) { return on_surface_ratio(r.trace); })
      .def("mean_variance_curve", [](const RunResult& r) { return mean_variance_curve(r.trace); })
      .def(
          "surface_rmse",
          [](const RunResult& r, const Scene& s, int res) { return surface_rmse(r.final_state, s, CandidateGrid(res)); },
          py::arg("scene"), py::arg("eval_resolution") = kEvalResolution);

  m.def("run", &run, py::arg("config"), py::arg("scene"), "Run one closed-loop exploration.");
  m.def(
      "effective_tap_improvement",
      [](const RunResult& a, const RunResult& b) { return effective_tap_improvement(a.trace, b.trace); },
      py::arg("proposed"), py::arg("baseline"));

  m.def(
      "compare",
      [](const std::string& config_text) {
        const auto summary = compare_strategies(parse_config(config_text));
        py::dict d;
        py::list rows;
        for (const auto& r : summary.rows) {
          rows.append(py::make_tuple(r.seed, r.on_surface_weighted, r.on_surface_uncertainty, r.improvement));
        }
        d["rows"] = rows;
        d["mean_improvement"] = summary.mean_improvement;
        d["min_improvement"] = summary.min_improvement;
        d["max_improvement"] = summary.max_improvement;
        return d;
      },
      py::arg("config_text") = "", "Paired-seed comparison from INI config text.");

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "tapgp");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return cli_main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Run the command-line interface; returns the exit code.");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
