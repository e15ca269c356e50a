// Python bindings for the core tracking operations. Arrays cross the boundary
// as numpy buffers; reports and results cross as plain dicts.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include "tsd/bench.hpp"
#include "tsd/config.hpp"
#include "tsd/scoring.hpp"
#include "tsd/signal.hpp"
#include "tsd/synth.hpp"
#include "tsd/tracker.hpp"

namespace py = pybind11;
using namespace tsd;

namespace {

Image image_from_array(const py::array_t<std::uint8_t, py::array::c_style |
                                                           py::array::forcecast>& arr) {
    if (arr.ndim() != 2 && !(arr.ndim() == 3 && arr.shape(2) == 3))
        throw std::invalid_argument("frame must be HxW gray or HxWx3 RGB uint8");
    const int h = static_cast<int>(arr.shape(0));
    const int w = static_cast<int>(arr.shape(1));
    const int ch = arr.ndim() == 3 ? 3 : 1;
    Image img(h, w, ch);
    std::memcpy(img.pixels.data(), arr.data(), img.pixels.size());
    return img;
}

RealMap map_from_array(const py::array_t<double, py::array::c_style |
                                                     py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    RealMap m(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    std::memcpy(m.values.data(), arr.data(), m.values.size() * sizeof(double));
    return m;
}

py::array_t<double> array_from_map(const RealMap& m) {
    py::array_t<double> arr({m.height, m.width});
    std::memcpy(arr.mutable_data(), m.values.data(), m.values.size() * sizeof(double));
    return arr;
}

TrackerConfig config_from_dict(const py::dict& d) {
    TrackerConfig cfg;
    for (auto item : d) {
        const std::string key = py::cast<std::string>(item.first);
        std::string value;
        if (py::isinstance<py::bool_>(item.second))
            value = py::cast<bool>(item.second) ? "true" : "false";
        else
            value = py::cast<std::string>(py::str(item.second));
        apply_config_entry(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

py::dict report_to_dict(const FrameReport& rep) {
    py::dict d;
    d["frame"] = rep.frame;
    d["box"] = py::make_tuple(rep.box.left(), rep.box.top(), rep.box.w, rep.box.h);
    d["dpmr"] = rep.dpmr;
    d["keyframe"] = rep.keyframe;
    d["set_size"] = rep.set_size;
    d["slot"] = rep.slot_index;
    d["peak"] = rep.peak_value;
    d["scale_index"] = rep.scale_index;
    d["scores"] = rep.scores;
    d["sample_frames"] = rep.sample_frames;
    return d;
}

BoundingBox box_from_tuple(const py::sequence& s) {
    if (py::len(s) != 4) throw std::invalid_argument("box must be (x, y, w, h)");
    return BoundingBox::from_topleft(py::cast<double>(s[0]), py::cast<double>(s[1]),
                                     py::cast<double>(s[2]), py::cast<double>(s[3]));
}

} // namespace

PYBIND11_MODULE(_tsd, m) {
    m.doc() = "correlation-filter tracker with training-set distillation";

    m.def("gaussian_label",
          [](int height, int width, double sigma) {
              return array_from_map(gaussian_label(height, width, sigma));
          },
          py::arg("height"), py::arg("width"), py::arg("sigma"));

    m.def("hann_window",
          [](int height, int width) { return array_from_map(hann_window(height, width)); },
          py::arg("height"), py::arg("width"));

    m.def("dft2",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
              const RealMap mp = map_from_array(arr);
              const SpectrumMap s = dft2(mp);
              py::array_t<std::complex<double>> out({mp.height, mp.width});
              std::memcpy(out.mutable_data(), s.values.data(),
                          s.values.size() * sizeof(std::complex<double>));
              return out;
          },
          py::arg("map"));

    m.def("temporal_weights",
          [](int count, int f0, double q) { return temporal_weights(count, f0, q).t; },
          py::arg("count"), py::arg("f0") = 10, py::arg("q") = 0.0408);

    m.def("solve_alpha",
          [](const std::vector<double>& betas, const std::vector<double>& dpmrs,
             double gamma, double nu, int f0, double q) {
              const TemporalWeights tw =
                  temporal_weights(static_cast<int>(betas.size()), f0, q);
              return solve_alpha(betas, tw, dpmrs, gamma, nu).alphas;
          },
          py::arg("betas"), py::arg("dpmrs"), py::arg("gamma") = 3.02,
          py::arg("nu") = 0.201, py::arg("f0") = 10, py::arg("q") = 0.0408);

    m.def("compute_dpmr",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
             double high_area_fraction) {
              ResponseMap r;
              r.values = map_from_array(arr);
              locate_peak(r);
              DpmrParams p;
              p.high_area_fraction = high_area_fraction;
              return compute_dpmr(r, p);
          },
          py::arg("response"), py::arg("high_area_fraction") = 0.2);

    m.def("synth_sequence",
          [](const std::string& out_dir, const std::string& name, int frames, int height,
             int width, int target_size, double vx, double vy, double size_decay,
             const std::vector<std::pair<int, int>>& occlusions, double noise, bool rgb,
             std::uint32_t seed) {
              SynthSpec spec;
              spec.name = name;
              spec.frames = frames;
              spec.frame_height = height;
              spec.frame_width = width;
              spec.target_height = spec.target_width = target_size;
              spec.vx = vx;
              spec.vy = vy;
              spec.size_decay = size_decay;
              spec.occlusions = occlusions;
              spec.noise_level = noise;
              spec.rgb = rgb;
              spec.seed = seed;
              return synth_sequence(spec, out_dir);
          },
          py::arg("out_dir"), py::arg("name") = "synth", py::arg("frames") = 100,
          py::arg("height") = 120, py::arg("width") = 160, py::arg("target_size") = 24,
          py::arg("vx") = 2.0, py::arg("vy") = 0.0, py::arg("size_decay") = 1.0,
          py::arg("occlusions") = std::vector<std::pair<int, int>>{},
          py::arg("noise") = 2.0, py::arg("rgb") = false, py::arg("seed") = 0);

    m.def("evaluate",
          [](const std::vector<py::sequence>& pred, const std::vector<py::sequence>& gt) {
              std::vector<BoundingBox> p;
              std::vector<std::optional<BoundingBox>> g;
              for (const auto& b : pred) p.push_back(box_from_tuple(b));
              for (const auto& b : gt) g.emplace_back(box_from_tuple(b));
              const EvalResult r = evaluate(p, g);
              py::dict d;
              d["precision_at_20"] = r.precision_at_20;
              d["success_auc"] = r.success_auc;
              d["precision_curve"] = r.precision_curve;
              d["success_curve"] = r.success_curve;
              d["frames"] = r.frames;
              return d;
          },
          py::arg("pred"), py::arg("gt"));

    py::class_<Tracker>(m, "Tracker")
        .def(py::init([](const py::dict& config) {
                 return new Tracker(config_from_dict(config));
             }),
             py::arg("config") = py::dict())
        .def("init",
             [](Tracker& t,
                const py::array_t<std::uint8_t,
                                  py::array::c_style | py::array::forcecast>& frame,
                const py::sequence& box) {
                 t.init(image_from_array(frame), box_from_tuple(box));
             },
             py::arg("frame"), py::arg("box"))
        .def("track",
             [](Tracker& t, const py::array_t<std::uint8_t, py::array::c_style |
                                                                py::array::forcecast>& frame) {
                 return report_to_dict(t.track_frame(image_from_array(frame)));
             },
             py::arg("frame"))
        .def_property_readonly("box",
                               [](const Tracker& t) {
                                   const BoundingBox& b = t.box();
                                   return py::make_tuple(b.left(), b.top(), b.w, b.h);
                               })
        .def_property_readonly("initialized", &Tracker::initialized);
}
