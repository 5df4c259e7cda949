#include "shapebias/behavioral.hpp"

#include <cmath>
#include <string>

#include "shapebias/error.hpp"

namespace shapebias {

CueDecision classify(const CueConflictRecord& record) noexcept {
  if (record.predicted_class.index == record.shape_class.index) return CueDecision::Shape;
  if (record.predicted_class.index == record.texture_class.index) return CueDecision::Texture;
  return CueDecision::Other;
}

void ShapeTally::add(CueDecision decision) noexcept {
  switch (decision) {
    case CueDecision::Shape: ++correct_shape; break;
    case CueDecision::Texture: ++correct_texture; break;
    case CueDecision::Other: ++other; break;
  }
}

std::optional<double> ShapeTally::bias() const noexcept {
  const std::size_t cue_matches = correct_shape + correct_texture;
  if (cue_matches == 0) return std::nullopt;
  return static_cast<double>(correct_shape) / static_cast<double>(cue_matches);
}

namespace {

void require_cue_conflict(const CueConflictRecord& record) {
  if (record.shape_class.index == record.texture_class.index) {
    throw Error(ErrorKind::Integrity,
                "record '" + record.image_id + "' has identical shape and texture classes");
  }
}

}  // namespace

ShapeBiasResult compute_shape_bias(std::span<const CueConflictRecord> records) {
  if (records.empty()) throw Error(ErrorKind::Input, "no cue-conflict records");
  ShapeTally tally;
  for (const auto& record : records) {
    require_cue_conflict(record);
    tally.add(classify(record));
  }
  const auto bias = tally.bias();
  if (!bias) {
    throw Error(ErrorKind::UndefinedBias, "none of " + std::to_string(tally.total()) +
                                              " predictions matched the shape or texture cue");
  }
  return {tally, *bias};
}

std::map<int, ClassShapeBias> per_class_shape_bias(std::span<const CueConflictRecord> records) {
  if (records.empty()) throw Error(ErrorKind::Input, "no cue-conflict records");
  std::map<int, ClassShapeBias> by_class;
  for (const auto& record : records) {
    require_cue_conflict(record);
    by_class[record.shape_class.index].tally.add(classify(record));
  }
  for (auto& [index, entry] : by_class) entry.shape_bias = entry.tally.bias();
  return by_class;
}

std::string_view to_string(AggregationRule rule) {
  return rule == AggregationRule::Mean ? "mean" : "max";
}

AggregationRule parse_aggregation_rule(std::string_view text) {
  if (text == "mean") return AggregationRule::Mean;
  if (text == "max") return AggregationRule::Max;
  throw Error(ErrorKind::Input, "unknown aggregation rule '" + std::string(text) + "'");
}

AggregatedPredictions aggregate_probabilities(std::span<const ProbabilityRecord> rows,
                                              AggregationRule rule) {
  const auto& labels = cue_conflict_labels();
  AggregatedPredictions out{rule, {}};
  out.records.reserve(rows.size());
  for (const auto& row : rows) {
    double sum = 0.0;
    std::size_t best = 0;
    for (std::size_t c = 0; c < row.probabilities.size(); ++c) {
      sum += row.probabilities[c];
      if (row.probabilities[c] > row.probabilities[best]) best = c;
    }
    if (!(std::abs(sum - 1.0) <= kProbabilitySumTolerance)) {
      throw Error(ErrorKind::Data, "probabilities of '" + row.image_id + "' sum to " +
                                       std::to_string(sum));
    }
    out.records.push_back({row.image_id, row.shape_class, row.texture_class,
                           labels.at(static_cast<int>(best))});
  }
  return out;
}

}  // namespace shapebias
