#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "symdet/config.hpp"
#include "symdet/eval.hpp"
#include "symdet/filterbank.hpp"
#include "symdet/histograms.hpp"
#include "symdet/pipeline.hpp"
#include "symdet/records.hpp"

namespace py = pybind11;
using namespace symdet;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const Grid<double>& g) {
  py::array_t<double> out({g.height(), g.width()});
  std::copy(g.begin(), g.end(), out.mutable_data());
  return out;
}

// uint8 arrays are read as 0..255, anything else as floats in [0, 1].
ColorImage to_image(const py::array& array) {
  if (array.ndim() != 2 && !(array.ndim() == 3 && (array.shape(2) == 1 || array.shape(2) == 3)))
    throw py::value_error("image must have shape (H, W), (H, W, 1) or (H, W, 3)");
  const int h = static_cast<int>(array.shape(0));
  const int w = static_cast<int>(array.shape(1));
  const int channels = array.ndim() == 3 ? static_cast<int>(array.shape(2)) : 1;
  if (py::isinstance<py::array_t<std::uint8_t>>(array)) {
    const auto u8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(array);
    return image_from_u8(u8.data(), w, h, channels);
  }
  const auto f = Array::ensure(array);
  if (!f) throw py::value_error("image must be numeric");
  ColorImage img{Grid<Rgb>(w, h), channels == 1};
  const double* p = f.data();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x, p += channels)
      img.pixels(x, y) = channels == 1 ? Rgb{p[0], p[0], p[0]} : Rgb{p[0], p[1], p[2]};
  return img;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("histogram must be one-dimensional");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> from_vector(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

AxisSegment segment(const std::vector<double>& s) {
  if (s.size() != 4 && s.size() != 5) throw py::value_error("segment must be (ax, ay, bx, by[, score])");
  AxisSegment out{{s[0], s[1]}, {s[2], s[3]}, std::nullopt};
  if (s.size() == 5) out.score = s[4];
  return out;
}

std::vector<AxisSegment> segments(const std::vector<std::vector<double>>& list) {
  std::vector<AxisSegment> out;
  for (const auto& s : list) out.push_back(segment(s));
  return out;
}

Regime regime_of(const std::string& name) { return parse_regime(name).regime; }

py::dict report_dict(const EvalReport& r) {
  py::list curve;
  for (const PrPoint& p : r.curve) curve.append(py::make_tuple(p.threshold, p.precision, p.recall));
  py::dict d;
  d["regime"] = r.regime;
  d["tp"] = r.tp;
  d["fp"] = r.fp;
  d["fn"] = r.fn;
  d["top1_tp"] = r.top1_tp;
  d["images"] = r.images;
  d["groundtruth"] = r.groundtruth;
  d["max_f1"] = r.max_f1;
  d["curve"] = curve;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reflection symmetry detection core";

  static py::exception<Error> base_error(m, "SymdetError", PyExc_RuntimeError);
  static py::exception<Error> no_features(m, "NoFeaturesError", base_error.ptr());
  static py::exception<Error> no_evidence(m, "NoSymmetryEvidenceError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::invalid_argument:
        case ErrorKind::parse:
          PyErr_SetString(PyExc_ValueError, e.what());
          return;
        case ErrorKind::io:
          PyErr_SetString(PyExc_OSError, e.what());
          return;
        case ErrorKind::no_features:
          no_features(e.what());
          return;
        case ErrorKind::no_symmetry_evidence:
          no_evidence(e.what());
          return;
      }
      base_error(e.what());
    }
  });

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def("get", &Config::get)
      .def("set", [](Config& c, const std::string& key, py::object value) {
        std::string text = py::str(value);
        if (py::isinstance<py::bool_>(value)) text = value.cast<bool>() ? "true" : "false";
        c.set(key, text);
      })
      .def("to_text", &Config::to_text)
      .def("validate", [](const Config& c) { validate(c); })
      .def_static("parse", [](const std::string& text) { return parse_config(text); })
      .def_static("load", [](const std::string& path) { return load_config(path); })
      .def_static("keys", [] {
        std::vector<std::string> keys;
        for (const ConfigKey& k : config_keys()) keys.emplace_back(k.name);
        return keys;
      })
      .def("__repr__", [](const Config& c) { return "Config(\n" + c.to_text() + ")"; });

  m.def(
      "detect",
      [](const py::array& image, const Config& config) {
        const ColorImage img = to_image(image);
        Detection d;
        {
          py::gil_scoped_release release;
          d = detect(img, config);
        }
        py::list axes;
        for (const SymmetryAxis& a : d.axes) {
          py::dict axis;
          axis["rho"] = a.rho;
          axis["theta"] = a.theta;
          axis["score"] = a.score;
          axis["a"] = py::make_tuple(a.a.x, a.a.y);
          axis["b"] = py::make_tuple(a.b.x, a.b.y);
          axes.append(axis);
        }
        py::dict out;
        out["axes"] = axes;
        out["heatmap"] = to_numpy(d.smoothed);
        out["features"] = d.features.size();
        out["cell_size"] = d.cell_size;
        out["luminance_histograms"] = d.luminance_histograms;
        return out;
      },
      py::arg("image"), py::arg("config") = Config{},
      "Detect symmetry axes. Returns a dict with 'axes' (rho, theta in degrees, score, "
      "endpoints a and b), the smoothed vote 'heatmap' (theta x rho) and feature statistics.");

  m.def("butterworth_value", [](double eta, double cutoff, int order) {
    return butterworth_value(eta, {cutoff, order});
  }, py::arg("eta"), py::arg("cutoff") = 0.45, py::arg("order") = 15);

  py::class_<FilterBank>(m, "FilterBank")
      .def(py::init([](int width, int height, int scales, int orientations) {
             FilterBankParams p;
             p.scales = scales;
             p.orientations = orientations;
             return FilterBank(width, height, p);
           }),
           py::arg("width"), py::arg("height"), py::arg("scales") = 12, py::arg("orientations") = 32)
      .def_property_readonly("scales", &FilterBank::scales)
      .def_property_readonly("orientations", &FilterBank::orientations)
      .def("center_frequency", &FilterBank::center_frequency)
      .def("orientation", &FilterBank::orientation)
      .def("kernel", [](const FilterBank& b, int s, int o) {
        if (s < 0 || s >= b.scales() || o < 0 || o >= b.orientations())
          throw py::index_error("filter index out of range");
        return to_numpy(b.kernel(s, o));
      });

  m.def("intersection", [](const Array& a, const Array& b) { return intersection(to_vector(a), to_vector(b)); });
  m.def("reverse", [](const Array& a) { return from_vector(reverse(to_vector(a))); });
  m.def("mirror_about_anchor", [](const Array& a) { return from_vector(mirror_about_anchor(to_vector(a))); });
  m.def("circular_shift", [](const Array& a, int shift) { return from_vector(circular_shift(to_vector(a), shift)); });
  m.def("l1_normalize", [](const Array& a) {
    std::vector<double> v = to_vector(a);
    l1_normalize(v);
    return from_vector(v);
  });

  m.def("pair_axis_params", [](std::pair<double, double> a, std::pair<double, double> b) {
    const AxisParams p = pair_axis_params({a.first, a.second}, {b.first, b.second});
    return py::make_tuple(p.rho, p.theta);
  }, "Perpendicular bisector of two points as (rho, theta in degrees).");

  m.def("angle_between", [](const std::vector<double>& a, const std::vector<double>& b) {
    return angle_between(segment(a), segment(b));
  });
  m.def("is_true_positive",
        [](const std::vector<double>& sc, const std::vector<double>& gt, const std::string& regime,
           std::pair<int, int> size) {
          return is_true_positive(segment(sc), segment(gt), regime_of(regime), {size.first, size.second});
        },
        py::arg("detection"), py::arg("groundtruth"), py::arg("regime"), py::arg("size") = std::pair{0, 0});
  m.def("evaluate",
        [](const py::list& items, const std::string& regime) {
          std::vector<EvalItem> parsed;
          for (const py::handle& h : items) {
            const py::dict d = py::reinterpret_borrow<py::dict>(h);
            EvalItem item;
            item.image_id = d.contains("image_id") ? d["image_id"].cast<std::string>() : std::string();
            if (d.contains("size")) {
              const auto s = d["size"].cast<std::pair<int, int>>();
              item.size = {s.first, s.second};
            }
            item.detections = segments(d["detections"].cast<std::vector<std::vector<double>>>());
            item.groundtruth = segments(d["groundtruth"].cast<std::vector<std::vector<double>>>());
            parsed.push_back(std::move(item));
          }
          return report_dict(evaluate(parsed, regime_of(regime)));
        },
        py::arg("items"), py::arg("regime"),
        "items: dicts with 'detections' [(ax, ay, bx, by, score)], 'groundtruth' [(ax, ay, bx, by)] "
        "and optionally 'image_id' and 'size' (width, height).");

  m.def("parse_groundtruth", [](const std::string& path, const std::string& dialect) {
    std::vector<std::pair<std::string, std::vector<std::tuple<double, double, double, double>>>> out;
    for (const GroundTruthRecord& r : parse_groundtruth(std::filesystem::path(path), parse_dialect(dialect))) {
      auto& entry = out.emplace_back(r.image_id, std::vector<std::tuple<double, double, double, double>>{});
      for (const AxisSegment& s : r.axes) entry.second.emplace_back(s.a.x, s.a.y, s.b.x, s.b.y);
    }
    return out;
  }, py::arg("path"), py::arg("dialect") = "generic");
}
