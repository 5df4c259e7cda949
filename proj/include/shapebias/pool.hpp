#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapebias/formats.hpp"
#include "shapebias/records.hpp"

namespace shapebias {

enum class Metric { Top1Accuracy, ShapeBias, ShapeDimRatio, ShapeDim, TextureDim };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);
std::optional<double> metric_value(const ModelRecord& record, Metric metric);

struct MetricPair {
  Metric x;
  Metric y;

  MetricPair(Metric x_metric, Metric y_metric);  // throws Error(Input) if equal
  friend bool operator==(const MetricPair&, const MetricPair&) = default;
};

// Parses "x_metric:y_metric".
MetricPair parse_metric_pair(std::string_view text);

// Accuracy vs both bias metrics, bias vs ratio, the shape/texture trade-off,
// and accuracy vs texture dimensionality.
std::vector<MetricPair> default_metric_pairs();

inline constexpr std::string_view kPoolScope = "pool";
inline constexpr std::size_t kDefaultMinFamilySize = 9;

struct CorrelationReport {
  std::string scope;
  MetricPair pair;
  std::size_t n = 0;
  double r = 0.0;
  double p_two_sided = 1.0;
  bool p_clamped = false;
  double slope = 0.0;
  double intercept = 0.0;
};

// Report over the models of `pool` that carry both metrics. Throws
// Error(Input) below 3 such models and Error(DegenerateSeries) on zero variance.
CorrelationReport correlate(std::span<const ModelRecord> pool, const MetricPair& pair,
                            std::string scope);

struct FamilyReportSet {
  std::vector<CorrelationReport> reports;  // pool-wide first, then families by name
  std::vector<std::string> families;       // qualifying families, sorted
  std::vector<std::string> warnings;
  bool no_qualifying_family = false;
};

// Pool-wide report per pair plus one per (family with >= min_family_size
// models, pair). Scopes with too few usable models or zero variance are
// skipped and noted in `warnings`.
FamilyReportSet family_reports(std::span<const ModelRecord> pool, std::span<const MetricPair> pairs,
                               std::size_t min_family_size = kDefaultMinFamilySize);

// Fills optional metric fields of `pool` from partial updates. Throws
// Error(Integrity) for unknown model ids or conflicting values.
std::vector<ModelRecord> merge_metrics(std::vector<ModelRecord> pool,
                                       std::span<const MetricUpdate> updates);

std::string format_report_csv(std::span<const CorrelationReport> reports);
std::vector<CorrelationReport> parse_report_csv(std::string_view content);

// Self-contained SVG scatter of the pair with the report's regression line
// and an "r = x.xx" annotation. Deterministic for fixed input.
std::string render_scatter(std::span<const ModelRecord> pool, const MetricPair& pair,
                           const CorrelationReport& fit);
void emit_scatter(std::span<const ModelRecord> pool, const MetricPair& pair,
                  const CorrelationReport& fit, const std::filesystem::path& out);

}  // namespace shapebias
