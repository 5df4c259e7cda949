#pragma once

// Deterministic pair sampling over a stylized-stimulus manifest.
//
// Valid pairs are normalized (image_id_a < image_id_b, bytewise) and ordered
// lexicographically; that canonical list is addressed by index without being
// materialized. Sampling is a partial Fisher-Yates shuffle of the index range
// driven by splitmix64: for i in [0, P), j = i + bounded(capacity - i), swap
// slots i and j, emit slot i. bounded(m) draws r until r >= (2^64 - m) mod m
// and returns r mod m.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shapebias/records.hpp"

namespace shapebias {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t bounded(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

inline constexpr std::size_t kDefaultPairCount = 1000;

struct SamplerOptions {
  // Texture factor only: also require different shape classes, not merely
  // different source objects. Off by default.
  bool require_distinct_shape_class = false;
};

using ImagePair = std::pair<std::string, std::string>;

struct PairManifest {
  Factor factor = Factor::Shape;
  std::uint64_t seed = 0;
  std::vector<ImagePair> pairs;

  friend bool operator==(const PairManifest&, const PairManifest&) = default;
};

// Index over the canonical enumeration of valid pairs for one factor.
class PairIndex {
 public:
  PairIndex(const std::vector<StimulusManifestEntry>& manifest, Factor factor,
            SamplerOptions options = {});

  std::uint64_t size() const noexcept { return total_; }
  ImagePair at(std::uint64_t index) const;

 private:
  struct Image {
    std::string id;
    std::size_t group = 0;     // object (shape factor) or texture (texture factor)
    std::size_t position = 0;  // within its group, ascending id order
    int shape_class = -1;
  };

  bool partner_ok(const Image& a, const Image& b) const noexcept;

  bool strict_;
  std::vector<Image> images_;                      // ascending id order
  std::vector<std::vector<std::size_t>> groups_;   // image indices, ascending id
  std::vector<std::uint64_t> prefix_;              // pairs led by images before i
  std::uint64_t total_ = 0;
};

// Number of unordered valid pairs. Throws Error(Input) on an empty manifest.
std::uint64_t enumerate_valid_pairs(const std::vector<StimulusManifestEntry>& manifest,
                                    Factor factor, SamplerOptions options = {});

// Throws Error(Input) for count == 0 or an empty manifest and Error(Capacity)
// when count exceeds the number of valid pairs.
PairManifest sample_pairs(const std::vector<StimulusManifestEntry>& manifest, Factor factor,
                          std::size_t count, std::uint64_t seed, SamplerOptions options = {});

// True when (a, b) are distinct images that share exactly the given factor.
bool is_valid_pair(const StimulusManifestEntry& a, const StimulusManifestEntry& b, Factor factor,
                   SamplerOptions options = {});

std::string format_pair_manifest(const PairManifest& manifest);
PairManifest parse_pair_manifest(std::string_view content);
void write_pair_manifest(const std::filesystem::path& path, const PairManifest& manifest);
PairManifest read_pair_manifest(const std::filesystem::path& path);

}  // namespace shapebias
