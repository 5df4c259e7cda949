#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "shapebias/labels.hpp"
#include "shapebias/records.hpp"

namespace shapebias::testing {

namespace fs = std::filesystem;

inline fs::path fixture_dir() { return fs::path(SHAPEBIAS_FIXTURE_DIR); }

// Fresh scratch directory under the build tree, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("shapebias_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline CueConflictRecord make_record(const std::string& id, const std::string& shape,
                                     const std::string& texture, const std::string& predicted) {
  const auto& labels = cue_conflict_labels();
  return {id, labels.resolve(shape), labels.resolve(texture), labels.resolve(predicted)};
}

inline std::vector<CueConflictRecord> random_records(std::mt19937_64& rng, std::size_t n) {
  const auto& labels = cue_conflict_labels();
  std::uniform_int_distribution<int> cls(0, static_cast<int>(labels.size()) - 1);
  std::vector<CueConflictRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    const int shape = cls(rng);
    int texture = cls(rng);
    while (texture == shape) texture = cls(rng);
    const int predicted = cls(rng);
    records.push_back({"img" + std::to_string(i), labels.at(shape), labels.at(texture),
                       labels.at(predicted)});
  }
  return records;
}

inline ActivationPairSet random_pairs(std::mt19937_64& rng, Factor factor, std::size_t pairs,
                                      std::size_t neurons) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> mix(-1.0, 1.0);
  std::vector<double> a(pairs * neurons), b(pairs * neurons);
  std::vector<double> coupling(neurons);
  for (auto& c : coupling) c = mix(rng);
  for (std::size_t p = 0; p < pairs; ++p) {
    for (std::size_t i = 0; i < neurons; ++i) {
      // float-representable values, as they would arrive from an ACTP file
      const double x = noise(rng);
      a[p * neurons + i] = static_cast<float>(x);
      b[p * neurons + i] = static_cast<float>(coupling[i] * x + noise(rng));
    }
  }
  return ActivationPairSet(factor, pairs, neurons, std::move(a), std::move(b));
}

// `objects` source objects, each rendered with `textures` of `texture_pool`
// texture images (object k uses textures k, k+1, ... modulo the pool).
inline std::vector<StimulusManifestEntry> synthetic_manifest(std::size_t objects,
                                                             std::size_t textures,
                                                             std::size_t texture_pool) {
  const auto& labels = voc_labels();
  std::vector<StimulusManifestEntry> manifest;
  for (std::size_t o = 0; o < objects; ++o) {
    for (std::size_t t = 0; t < textures; ++t) {
      const std::size_t tex = (o + t) % texture_pool;
      manifest.push_back({"obj" + std::to_string(o) + "_tex" + std::to_string(tex) + ".jpg",
                          "obj" + std::to_string(o), labels.at(static_cast<int>(o % labels.size())),
                          "tex" + std::to_string(tex)});
    }
  }
  return manifest;
}

// y whose sample Pearson correlation with x equals r (up to rounding): the
// noise is centred and orthogonalized against x before mixing.
inline std::vector<double> correlated_series(std::mt19937_64& rng, const std::vector<double>& x,
                                             double r) {
  const std::size_t n = x.size();
  std::normal_distribution<double> g;
  double mx = 0, me = 0;
  std::vector<double> xc(x), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = g(rng);
    mx += x[i];
    me += e[i];
  }
  mx /= n;
  me /= n;
  double xx = 0, xe = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xc[i] -= mx;
    e[i] -= me;
    xx += xc[i] * xc[i];
    xe += xc[i] * e[i];
  }
  double ee = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] -= xe / xx * xc[i];
    ee += e[i] * e[i];
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = r * xc[i] / std::sqrt(xx) + std::sqrt(1 - r * r) * e[i] / std::sqrt(ee);
  }
  return y;
}

}  // namespace shapebias::testing
