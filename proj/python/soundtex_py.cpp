// python/soundtex_py.cpp

// Copyright 2026  The soundtex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "soundtex/audio.hpp"
#include "soundtex/cochlear.hpp"
#include "soundtex/datastore.hpp"
#include "soundtex/error.hpp"
#include "soundtex/eval.hpp"
#include "soundtex/labelspace.hpp"
#include "soundtex/texture.hpp"

namespace py = pybind11;
using namespace soundtex;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Waveform ToWaveform(const DoubleArray& samples, int rate) {
  if (samples.ndim() != 1) throw py::value_error("samples must be 1-D");
  Waveform w;
  w.sample_rate = rate;
  w.samples.assign(samples.data(), samples.data() + samples.size());
  return w;
}

Matrix ToMatrix(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> ToArray(std::vector<double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> ToArray(const Matrix& m) {
  py::array_t<double> out({static_cast<py::ssize_t>(m.rows()),
                           static_cast<py::ssize_t>(m.cols())});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Waveform Canonical(const DoubleArray& samples, int rate) {
  return ResampleWaveform(ToWaveform(samples, rate), kCanonicalRate);
}

}  // namespace

PYBIND11_MODULE(_soundtex, m) {
  m.doc() = "Sound-texture statistics and self-supervised label spaces";
  m.attr("__version__") = "0.1.0";
  m.attr("TEXTURE_DIM") = kTextureDim;
  m.attr("NUM_CHANNELS") = kNumCochlearChannels;
  m.attr("NUM_CORRELATIONS") = kNumCorrelations;
  m.attr("ENVELOPE_RATE") = kEnvelopeRate;
  m.attr("CANONICAL_RATE") = kCanonicalRate;

  static py::exception<Error> error_type(m, "SoundtexError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  m.def("decode_audio", [](const std::filesystem::path& path) {
        const auto w = DecodeAudio(path);
        return py::make_tuple(ToArray(w.samples), w.sample_rate);
      }, py::arg("path"), "Decode a WAV file to (mono samples, sample_rate).");

  m.def("write_wav", [](const std::filesystem::path& path, const DoubleArray& samples,
                        int rate, bool as_float) {
        WriteWav(path, ToWaveform(samples, rate),
                 as_float ? WavEncoding::kFloat32 : WavEncoding::kPcm16);
      }, py::arg("path"), py::arg("samples"), py::arg("sample_rate"),
      py::arg("float32") = true);

  m.def("resample", [](const DoubleArray& samples, int rate, int target) {
        return ToArray(ResampleWaveform(ToWaveform(samples, rate), target).samples);
      }, py::arg("samples"), py::arg("sample_rate"), py::arg("target_rate"));

  m.def("extract_window", [](const DoubleArray& samples, int rate, double center,
                             double duration) {
        return ToArray(ExtractWindow(ToWaveform(samples, rate), {center, duration}).samples);
      }, py::arg("samples"), py::arg("sample_rate"), py::arg("center_s"),
      py::arg("duration_s") = kDefaultWindowSeconds);

  m.def("cochleagram", [](const DoubleArray& samples, int rate) {
        return ToArray(Cochleagram(Canonical(samples, rate)).envelopes);
      }, py::arg("samples"), py::arg("sample_rate") = kCanonicalRate,
      "T x 32 compressed subband envelopes at 400 Hz.");

  m.def("filterbank_centers", [](int rate) {
        const auto fb = BuildCochlearFilterbank(rate);
        const auto c = fb.center_frequencies();
        return ToArray(std::vector<double>(c.begin(), c.end()));
      }, py::arg("audio_rate") = kCanonicalRate);

  m.def("texture", [](const DoubleArray& samples, int rate) {
        return ToArray(TextureFromWindow(Canonical(samples, rate)).flat);
      }, py::arg("samples"), py::arg("sample_rate") = kCanonicalRate,
      "502-d texture vector of the whole input treated as one window.");

  m.def("texture_groups", [](const DoubleArray& samples, int rate) {
        const auto t = TextureFromWindow(Canonical(samples, rate));
        py::dict d;
        d["mu"] = ToArray(t.mu);
        d["sigma_tilde"] = ToArray(t.sigma_tilde);
        d["rho"] = ToArray(t.rho);
        d["b_tilde"] = ToArray(t.b_tilde);
        d["loudness"] = t.loudness;
        d["flat"] = ToArray(t.flat);
        return d;
      }, py::arg("samples"), py::arg("sample_rate") = kCanonicalRate);

  m.def("spectrum_snapshot", [](const DoubleArray& samples, int rate, double center,
                                double window) {
        return ToArray(SpectrumSnapshot(ToWaveform(samples, rate), center, window));
      }, py::arg("samples"), py::arg("sample_rate"), py::arg("center_s"),
      py::arg("window_s") = kDefaultWindowSeconds);

  py::class_<ClusterModel>(m, "ClusterModel")
      .def_property_readonly("k", &ClusterModel::k)
      .def_property_readonly("centroids", [](const ClusterModel& c) { return ToArray(c.centroids); })
      .def_readonly("inertia", &ClusterModel::inertia)
      .def_readonly("seed", &ClusterModel::seed)
      .def("assign", [](const ClusterModel& c, const DoubleArray& x) {
        const auto a = AssignClusters(c, ToMatrix(x));
        py::array_t<std::uint32_t> labels(static_cast<py::ssize_t>(a.size()));
        py::array_t<double> dist(static_cast<py::ssize_t>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) {
          labels.mutable_data()[i] = a[i].label;
          dist.mutable_data()[i] = a[i].distance;
        }
        return py::make_tuple(labels, dist);
      }, py::arg("features"))
      .def("prune_outliers", [](const ClusterModel& c, const DoubleArray& x) {
        const auto r = PruneOutliers(c, ToMatrix(x));
        return std::vector<bool>(r.begin(), r.end());
      }, py::arg("features"));

  py::class_<BinaryCodeModel>(m, "BinaryCodeModel")
      .def_property_readonly("n_bits", &BinaryCodeModel::n_bits)
      .def_property_readonly("mean", [](const BinaryCodeModel& b) { return ToArray(b.mean); })
      .def_property_readonly("axes", [](const BinaryCodeModel& b) { return ToArray(b.axes); })
      .def_property_readonly("eigenvalues", [](const BinaryCodeModel& b) { return ToArray(b.eigenvalues); })
      .def("encode", [](const BinaryCodeModel& b, const DoubleArray& x) {
        const Matrix rows = ToMatrix(x);
        py::array_t<std::uint32_t> codes(static_cast<py::ssize_t>(rows.rows()));
        for (std::size_t i = 0; i < rows.rows(); ++i)
          codes.mutable_data()[i] = EncodeBinary(b, rows.row(i));
        return codes;
      }, py::arg("features"));

  m.def("fit_kmeans", [](const DoubleArray& x, int k, std::uint64_t seed) {
        return FitKMeans(ToMatrix(x), k, seed);
      }, py::arg("features"), py::arg("k") = kDefaultClusters, py::arg("seed") = 0);

  m.def("fit_pca", [](const DoubleArray& x, int n_bits) {
        return FitPca(ToMatrix(x), n_bits);
      }, py::arg("features"), py::arg("n_bits") = kDefaultBits);

  m.def("label_statistics", [](const std::vector<std::uint32_t>& labels, int k) {
        const auto s = ComputeLabelStatistics(labels, k);
        return py::make_tuple(s.chance, s.majority);
      }, py::arg("labels"), py::arg("k"), "Returns (chance, majority).");

  m.def("write_features", [](const std::filesystem::path& path, const DoubleArray& x) {
        WriteFeatures(path, ToMatrix(x));
      }, py::arg("path"), py::arg("rows"));
  m.def("read_features", [](const std::filesystem::path& path) {
        return ToArray(ReadFeatures(path));
      }, py::arg("path"));

  m.def("generate", [](const std::string& family, double duration, std::uint64_t seed,
                       double tone_hz, double am_rate_hz, double am_depth,
                       double fundamental_hz, int partials) {
        SyntheticSpec spec;
        spec.family = ParseFamily(family);
        spec.duration = duration;
        spec.seed = seed;
        spec.tone_hz = tone_hz;
        spec.am_rate_hz = am_rate_hz;
        spec.am_depth = am_depth;
        spec.fundamental_hz = fundamental_hz;
        spec.partials = partials;
        return ToArray(Generate(spec).samples);
      }, py::arg("family"), py::arg("duration_s") = kDefaultWindowSeconds,
      py::arg("seed") = 0, py::arg("tone_hz") = 1000.0, py::arg("am_rate_hz") = 4.0,
      py::arg("am_depth") = 0.9, py::arg("fundamental_hz") = 200.0,
      py::arg("partials") = 10, "Synthetic clip at 16 kHz, peak 0.9.");
}
