#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapebias/labels.hpp"

namespace shapebias {

enum class Factor : std::uint8_t { Shape = 0, Texture = 1 };

std::string_view to_string(Factor factor);
Factor parse_factor(std::string_view text);

// One model decision on one cue-conflict image. shape_class != texture_class.
struct CueConflictRecord {
  std::string image_id;
  CategoryLabel shape_class;
  CategoryLabel texture_class;
  CategoryLabel predicted_class;

  friend bool operator==(const CueConflictRecord&, const CueConflictRecord&) = default;
};

// Row of the probability-variant predictions file.
struct ProbabilityRecord {
  std::string image_id;
  CategoryLabel shape_class;
  CategoryLabel texture_class;
  std::array<double, kCueConflictCategories> probabilities{};
};

struct StimulusManifestEntry {
  std::string image_id;
  std::string source_object_id;
  CategoryLabel shape_class;
  std::string texture_id;

  friend bool operator==(const StimulusManifestEntry&, const StimulusManifestEntry&) = default;
};

// Paired activations for one factor. Both matrices are row-major P x N.
class ActivationPairSet {
 public:
  ActivationPairSet(Factor factor, std::size_t pair_count, std::size_t neuron_count,
                    std::vector<double> matrix_a, std::vector<double> matrix_b);

  Factor factor() const noexcept { return factor_; }
  std::size_t pair_count() const noexcept { return pairs_; }
  std::size_t neuron_count() const noexcept { return neurons_; }
  std::span<const double> matrix_a() const noexcept { return a_; }
  std::span<const double> matrix_b() const noexcept { return b_; }

  double a(std::size_t pair, std::size_t neuron) const noexcept { return a_[pair * neurons_ + neuron]; }
  double b(std::size_t pair, std::size_t neuron) const noexcept { return b_[pair * neurons_ + neuron]; }

 private:
  Factor factor_;
  std::size_t pairs_;
  std::size_t neurons_;
  std::vector<double> a_;
  std::vector<double> b_;
};

struct ModelRecord {
  std::string model_id;
  std::string family;
  double top1_accuracy = 0.0;
  std::optional<double> shape_bias;
  std::optional<double> shape_dim;
  std::optional<double> texture_dim;
  std::optional<double> residual_dim;
  std::optional<double> shape_dim_ratio;

  friend bool operator==(const ModelRecord&, const ModelRecord&) = default;
};

// Throws Error(Range/Integrity) when a populated field breaks its bounds or the
// three dimensionality fractions fail to sum to one within 1e-9.
void validate(const ModelRecord& record);

}  // namespace shapebias
