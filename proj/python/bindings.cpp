#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "odisal/dataset.hpp"
#include "odisal/fusion.hpp"
#include "odisal/io.hpp"
#include "odisal/metrics.hpp"
#include "odisal/prior.hpp"

namespace py = pybind11;
using namespace odisal;

namespace {

Raster raster_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2D array (height x width)");
  int h = static_cast<int>(a.shape(0));
  int w = static_cast<int>(a.shape(1));
  std::vector<double> values(a.data(), a.data() + static_cast<std::size_t>(w) * h);
  return Raster(w, h, std::move(values));
}

py::array_t<double> raster_to_array(const Raster& r) {
  py::array_t<double> out({r.height(), r.width()});
  std::copy(r.values().begin(), r.values().end(), out.mutable_data());
  return out;
}

std::vector<PixelCoord> to_fixations(const std::vector<std::pair<int, int>>& row_col) {
  std::vector<PixelCoord> out;
  out.reserve(row_col.size());
  for (const auto& [row, col] : row_col) out.push_back({row, col});
  return out;
}

Prior to_prior(const py::object& prior) {
  if (prior.is_none()) return std::monostate{};
  if (py::isinstance<EquatorBias>(prior)) return prior.cast<EquatorBias>();
  if (py::isinstance<LatitudeBiasSet>(prior)) return prior.cast<LatitudeBiasSet>();
  throw py::type_error("prior must be None, EquatorBias, or LatitudeBiasSet");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Saliency-map estimation for omni-directional images";

  py::register_exception<Error>(m, "OdisalError", PyExc_RuntimeError);

  // ---- raster ----
  py::class_<Raster>(m, "Raster")
      .def(py::init(&raster_from_array), py::arg("array"))
      .def_property_readonly("width", &Raster::width)
      .def_property_readonly("height", &Raster::height)
      .def("numpy", &raster_to_array)
      .def("sum", &Raster::sum);
  py::implicitly_convertible<py::array, Raster>();

  py::enum_<Boundary>(m, "Boundary")
      .value("wrap", Boundary::wrap)
      .value("reflect", Boundary::reflect)
      .value("clamp", Boundary::clamp);

  py::class_<BlurSpec>(m, "BlurSpec")
      .def(py::init<>())
      .def(py::init([](double sigma, Boundary horizontal, Boundary vertical) {
             return BlurSpec{sigma, horizontal, vertical};
           }),
           py::arg("sigma"), py::arg("horizontal") = Boundary::wrap,
           py::arg("vertical") = Boundary::reflect)
      .def_readwrite("sigma", &BlurSpec::sigma)
      .def_readwrite("horizontal", &BlurSpec::horizontal)
      .def_readwrite("vertical", &BlurSpec::vertical);

  m.def("normalize_sum", [](const Raster& r) { return raster_to_array(normalize_sum(r)); },
        py::arg("map"));
  m.def(
      "gaussian_blur",
      [](const Raster& r, const BlurSpec& spec) { return raster_to_array(gaussian_blur(r, spec)); },
      py::arg("map"), py::arg("spec"));
  m.def(
      "gaussian_blur",
      [](const Raster& r, double sigma) {
        return raster_to_array(gaussian_blur(r, BlurSpec{sigma}));
      },
      py::arg("map"), py::arg("sigma"));
  m.def("sample_bilinear", &sample_bilinear, py::arg("map"), py::arg("x"), py::arg("y"),
        py::arg("wrap_horizontal") = true);
  m.def(
      "resize_bilinear",
      [](const Raster& r, int w, int h) { return raster_to_array(resize_bilinear(r, w, h)); },
      py::arg("map"), py::arg("width"), py::arg("height"));

  // ---- geometry ----
  py::class_<Direction3>(m, "Direction3")
      .def_readonly("x", &Direction3::x)
      .def_readonly("y", &Direction3::y)
      .def_readonly("z", &Direction3::z);

  py::class_<SphericalCoord>(m, "SphericalCoord")
      .def(py::init([](double theta, double phi) { return SphericalCoord{theta, phi}; }),
           py::arg("theta"), py::arg("phi"))
      .def_readonly("theta", &SphericalCoord::theta)
      .def_readonly("phi", &SphericalCoord::phi);

  py::class_<ViewFrame>(m, "ViewFrame")
      .def_readonly("theta_c", &ViewFrame::theta_c)
      .def_readonly("phi_c", &ViewFrame::phi_c)
      .def_readonly("x_axis", &ViewFrame::x_axis)
      .def_readonly("y_axis", &ViewFrame::y_axis)
      .def_readonly("z_axis", &ViewFrame::z_axis)
      .def_readonly("fov", &ViewFrame::fov);

  py::class_<ViewGrid>(m, "ViewGrid")
      .def_readonly("interval_deg", &ViewGrid::interval_deg)
      .def_readonly("fov", &ViewGrid::fov)
      .def_readonly("frames", &ViewGrid::frames);

  m.def("view_frame", &view_frame, py::arg("theta_c"), py::arg("phi_c"), py::arg("fov"));
  m.def("view_grid", &view_grid, py::arg("interval_deg"), py::arg("fov"));
  m.def("view_grid_count", &view_grid_count, py::arg("interval_deg"));
  m.def("spherical_to_direction", &spherical_to_direction, py::arg("coord"));
  m.def("direction_to_spherical",
        [](double x, double y, double z) { return direction_to_spherical({x, y, z}); },
        py::arg("x"), py::arg("y"), py::arg("z"));
  m.def("equirect_pixel_to_spherical", &equirect_pixel_to_spherical, py::arg("col"),
        py::arg("row"), py::arg("width"), py::arg("height"));
  m.def(
      "equirect_spherical_to_pixel",
      [](const SphericalCoord& c, int w, int h) {
        PixelPos p = equirect_spherical_to_pixel(c, w, h);
        return py::make_tuple(p.col, p.row);
      },
      py::arg("coord"), py::arg("width"), py::arg("height"));
  m.def(
      "project_to_view",
      [](const Direction3& d, const ViewFrame& f) {
        ViewProjection p = project_to_view(d, f);
        return py::make_tuple(p.u, p.v, p.covered);
      },
      py::arg("direction"), py::arg("frame"));

  // ---- backends ----
  py::class_<SaliencyBackend>(m, "SaliencyBackend")
      .def_property_readonly("name", &SaliencyBackend::name)
      .def(
          "predict",
          [](const SaliencyBackend& b, const Raster& image, bool apply_center_bias) {
            return raster_to_array(b.predict(image, apply_center_bias));
          },
          py::arg("image"), py::arg("apply_center_bias") = false);

  py::class_<ConstantBackend, SaliencyBackend>(m, "ConstantBackend").def(py::init<>());
  py::class_<SpectralResidualBackend, SaliencyBackend>(m, "SpectralResidualBackend")
      .def(py::init<int, double>(), py::arg("working_size") = 64,
           py::arg("post_blur_sigma") = 2.5);
  py::class_<FileBackend, SaliencyBackend>(m, "FileBackend")
      .def(py::init<const std::filesystem::path&>(), py::arg("manifest_path"));

  // ---- fusion ----
  py::class_<FusedMap>(m, "FusedMap")
      .def_property_readonly("map", [](const FusedMap& f) { return raster_to_array(f.map); })
      .def_property_readonly("coverage",
                             [](const FusedMap& f) {
                               py::array_t<int> out({f.map.height(), f.map.width()});
                               std::copy(f.coverage.begin(), f.coverage.end(),
                                         out.mutable_data());
                               return out;
                             })
      .def_readonly("normalized", &FusedMap::normalized)
      .def_readonly("uncovered_count", &FusedMap::uncovered_count);

  m.def(
      "extract_view",
      [](const Raster& odi, const ViewFrame& frame, int side) {
        return raster_to_array(extract_view(odi, frame, side));
      },
      py::arg("odi"), py::arg("frame"), py::arg("view_side"));
  m.def(
      "integrate_views",
      [](const std::vector<std::pair<ViewFrame, Raster>>& maps, int w, int h) {
        return integrate_views(maps, w, h);
      },
      py::arg("maps"), py::arg("out_width"), py::arg("out_height"));
  m.def(
      "estimate",
      [](const Raster& odi, const SaliencyBackend& backend, const ViewGrid& grid,
         const py::object& prior, double sigma, int view_side, int jobs,
         const std::string& source_id) {
        EstimateOptions opts;
        opts.view_side = view_side;
        opts.jobs = jobs;
        opts.source_id = source_id;
        return estimate(odi, backend, grid, to_prior(prior), BlurSpec{sigma}, opts);
      },
      py::arg("odi"), py::arg("backend"), py::arg("grid"), py::arg("prior") = py::none(),
      py::arg("sigma") = 0.0, py::arg("view_side") = 500, py::arg("jobs") = 1,
      py::arg("source_id") = "");

  // ---- priors ----
  py::class_<EquatorBias>(m, "EquatorBias")
      .def(py::init([](const Raster& map) { return EquatorBias{map}; }), py::arg("map"))
      .def_property_readonly("map",
                             [](const EquatorBias& b) { return raster_to_array(b.map); });

  py::class_<LatitudeBiasSet>(m, "LatitudeBiasSet")
      .def(py::init([](const std::vector<std::pair<double, Raster>>& entries) {
             LatitudeBiasSet set;
             for (const auto& [phi, bias] : entries) set.entries.push_back({phi, bias});
             return set;
           }),
           py::arg("entries"))
      .def_property_readonly("entries", [](const LatitudeBiasSet& set) {
        std::vector<std::pair<double, py::array_t<double>>> out;
        for (const LatitudeBiasEntry& e : set.entries) {
          out.emplace_back(e.phi_c, raster_to_array(e.bias));
        }
        return out;
      });

  py::enum_<FitLoss>(m, "FitLoss").value("kl", FitLoss::kl).value("mse", FitLoss::mse);

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &FitConfig::learning_rate)
      .def_readwrite("iterations", &FitConfig::iterations)
      .def_readwrite("bias_resolution", &FitConfig::bias_resolution)
      .def_readwrite("loss", &FitConfig::loss)
      .def_readwrite("view_side", &FitConfig::view_side)
      .def_readwrite("blur_sigma", &FitConfig::blur_sigma);

  m.def(
      "average_equator_bias",
      [](const std::vector<Raster>& gt_maps) { return average_equator_bias(gt_maps); },
      py::arg("gt_maps"));
  m.def(
      "fit_latitude_bias",
      [](const std::vector<std::pair<Raster, Raster>>& train, const SaliencyBackend& backend,
         const ViewGrid& grid, const FitConfig& config) {
        std::vector<TrainExample> examples;
        for (const auto& [odi, gt] : train) examples.push_back({odi, gt, ""});
        FitResult result = fit_latitude_bias(examples, backend, grid, config);
        return py::make_tuple(result.biases, result.loss_trace);
      },
      py::arg("train"), py::arg("backend"), py::arg("grid"), py::arg("config") = FitConfig{});
  m.def(
      "compose_bias_equirect",
      [](const LatitudeBiasSet& set, const ViewGrid& grid, int w, int h) {
        return raster_to_array(compose_bias_equirect(set, grid, w, h));
      },
      py::arg("bias_set"), py::arg("grid"), py::arg("out_width"), py::arg("out_height"));

  // ---- metrics ----
  py::class_<MetricNormalization>(m, "MetricNormalization")
      .def(py::init<>())
      .def_readwrite("m_kl", &MetricNormalization::m_kl)
      .def_readwrite("m_cc", &MetricNormalization::m_cc)
      .def_readwrite("m_nss", &MetricNormalization::m_nss)
      .def_readwrite("m_auc", &MetricNormalization::m_auc)
      .def_readwrite("s_kl", &MetricNormalization::s_kl)
      .def_readwrite("s_cc", &MetricNormalization::s_cc)
      .def_readwrite("s_nss", &MetricNormalization::s_nss)
      .def_readwrite("s_auc", &MetricNormalization::s_auc);

  py::class_<MetricReport>(m, "MetricReport")
      .def(py::init<>())
      .def_readwrite("name", &MetricReport::name)
      .def_readwrite("kl", &MetricReport::kl)
      .def_readwrite("cc", &MetricReport::cc)
      .def_readwrite("nss", &MetricReport::nss)
      .def_readwrite("auc", &MetricReport::auc)
      .def_readwrite("a", &MetricReport::a);

  m.def("kl_div", &kl_div, py::arg("gt"), py::arg("pred"));
  m.def("pearson_cc", &pearson_cc, py::arg("gt"), py::arg("pred"));
  m.def(
      "nss",
      [](const Raster& pred, const std::vector<std::pair<int, int>>& fixations) {
        return nss(pred, to_fixations(fixations));
      },
      py::arg("pred"), py::arg("fixations"));
  m.def(
      "auc_judd",
      [](const Raster& pred, const std::vector<std::pair<int, int>>& fixations) {
        return auc_judd(pred, to_fixations(fixations));
      },
      py::arg("pred"), py::arg("fixations"));
  m.def("integrated_metric", &integrated_metric, py::arg("report"),
        py::arg("normalization") = MetricNormalization{});
  m.def("fit_normalization", &fit_normalization, py::arg("reports"));
  m.def(
      "evaluate_map",
      [](const std::string& name, const Raster& gt, const Raster& pred,
         const std::vector<std::pair<int, int>>& fixations, const MetricNormalization& n) {
        return evaluate_map(name, gt, pred, to_fixations(fixations), n);
      },
      py::arg("name"), py::arg("gt"), py::arg("pred"), py::arg("fixations"),
      py::arg("normalization") = MetricNormalization{});

  // ---- dataset / io ----
  m.def(
      "make_gt_map",
      [](const std::vector<std::pair<double, double>>& fixations, int width, int height,
         double sigma) {
        FixationSet set;
        set.image_id = "anonymous";
        for (const auto& [theta, phi] : fixations) set.fixations.push_back({"o", theta, phi});
        return raster_to_array(make_gt_map(set, width, height, sigma));
      },
      py::arg("fixations"), py::arg("width"), py::arg("height"), py::arg("sigma"),
      "Ground-truth map from (theta, phi) fixations in radians");
  m.def("load_map", [](const std::filesystem::path& p) { return raster_to_array(load_map(p)); },
        py::arg("path"));
  m.def("save_map", &save_map, py::arg("path"), py::arg("map"));
}
