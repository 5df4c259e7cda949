#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shapebias/records.hpp"

namespace shapebias {

// Decision buckets for a cue-conflict record; exactly one applies because
// the shape and texture classes differ.
enum class CueDecision { Shape, Texture, Other };

CueDecision classify(const CueConflictRecord& record) noexcept;

struct ShapeTally {
  std::size_t correct_shape = 0;
  std::size_t correct_texture = 0;
  std::size_t other = 0;

  std::size_t total() const noexcept { return correct_shape + correct_texture + other; }
  void add(CueDecision decision) noexcept;
  // #shape / (#shape + #texture); nullopt when neither cue was ever chosen.
  std::optional<double> bias() const noexcept;

  friend bool operator==(const ShapeTally&, const ShapeTally&) = default;
};

struct ShapeBiasResult {
  ShapeTally tally;
  double shape_bias = 0.0;
};

// Throws Error(Input) on empty input or a record whose cues coincide, and
// Error(UndefinedBias) when no record follows either cue.
ShapeBiasResult compute_shape_bias(std::span<const CueConflictRecord> records);

struct ClassShapeBias {
  ShapeTally tally;
  std::optional<double> shape_bias;  // nullopt marks an undefined class
};

// Keyed by shape-class index; only classes that occur are present.
std::map<int, ClassShapeBias> per_class_shape_bias(std::span<const CueConflictRecord> records);

enum class AggregationRule { Mean, Max };

std::string_view to_string(AggregationRule rule);
AggregationRule parse_aggregation_rule(std::string_view text);

struct AggregatedPredictions {
  AggregationRule rule = AggregationRule::Mean;  // provenance only
  std::vector<CueConflictRecord> records;
};

inline constexpr double kProbabilitySumTolerance = 1e-6;

// Argmax over the 16 category probabilities, lowest index on ties.
// Throws Error(Data) when a row's probabilities do not sum to 1 within 1e-6.
AggregatedPredictions aggregate_probabilities(std::span<const ProbabilityRecord> rows,
                                              AggregationRule rule);

}  // namespace shapebias
