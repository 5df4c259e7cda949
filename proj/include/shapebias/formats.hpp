#pragma once

// Interchange formats. Every reader has a parse_* twin that works on
// in-memory content so the readers stay pure functions of bytes; every
// writer has a format_* twin that returns exactly the bytes written.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapebias/records.hpp"

namespace shapebias {

namespace fs = std::filesystem;

inline constexpr std::string_view kPredictionsHeader =
    "image_id,shape_class,texture_class,predicted_class";
inline constexpr std::string_view kModelPoolHeader = "model_id,family,top1_accuracy";
inline constexpr std::string_view kStimulusManifestHeader =
    "image_id,source_object_id,shape_class,texture_id";
inline constexpr std::string_view kPairManifestHeader = "factor,seed,image_id_a,image_id_b";
inline constexpr std::string_view kReportHeader =
    "scope,x_metric,y_metric,n,r,p_two_sided,slope,intercept";

inline constexpr char kActpMagic[4] = {'A', 'C', 'T', 'P'};
inline constexpr std::uint32_t kActpVersion = 1;
inline constexpr std::size_t kActpHeaderBytes = 4 + 4 + 1 + 4 + 4;

std::string probability_header();

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// --- file plumbing -------------------------------------------------------
std::string read_file(const fs::path& path);
// Writes to a sibling temporary and renames over `path`; on failure nothing
// is left at `path`.
void write_file_atomic(const fs::path& path, std::string_view bytes);

// --- cue-conflict predictions -------------------------------------------
std::vector<CueConflictRecord> parse_predictions(std::string_view content);
std::vector<CueConflictRecord> read_predictions(const fs::path& path);
std::string format_predictions(const std::vector<CueConflictRecord>& records);

std::vector<ProbabilityRecord> parse_probabilities(std::string_view content);
std::vector<ProbabilityRecord> read_probabilities(const fs::path& path);
std::string format_probabilities(const std::vector<ProbabilityRecord>& rows);

// True when the first line is the probability-variant header.
bool is_probability_variant(std::string_view content);

// --- ACTP activation pairs ----------------------------------------------
ActivationPairSet parse_activation_pairs(std::string_view bytes);
ActivationPairSet read_activation_pairs(const fs::path& path);
std::string format_activation_pairs(const ActivationPairSet& pairs);
void write_activation_pairs(const fs::path& path, const ActivationPairSet& pairs);

// --- model pool ----------------------------------------------------------
std::vector<ModelRecord> parse_model_pool(std::string_view content);
std::vector<ModelRecord> read_model_pool(const fs::path& path);
std::string format_model_pool(const std::vector<ModelRecord>& pool);

// Results JSON-lines: one object per model, absent metrics as null.
std::string format_results(const std::vector<ModelRecord>& pool);
std::vector<ModelRecord> parse_results(std::string_view content);
std::vector<ModelRecord> read_results(const fs::path& path);

// Partial metric objects keyed by model_id, as fed to `pool` merging.
struct MetricUpdate {
  std::size_t line = 0;
  std::string model_id;
  std::map<std::string, double> values;
};
std::vector<MetricUpdate> parse_metric_lines(std::string_view content);

// --- stimulus manifest ---------------------------------------------------
inline constexpr std::size_t kTexturesPerObject = 5;

std::vector<StimulusManifestEntry> parse_stimulus_manifest(std::string_view content);
// Enforces unique image ids, unique (object, texture) pairs, one shape class
// per object and, when set, exactly `textures_per_object` textures per object.
void validate_manifest(const std::vector<StimulusManifestEntry>& manifest,
                       std::optional<std::size_t> textures_per_object = kTexturesPerObject);
std::vector<StimulusManifestEntry> read_stimulus_manifest(
    const fs::path& path, std::optional<std::size_t> textures_per_object = kTexturesPerObject);
std::string format_stimulus_manifest(const std::vector<StimulusManifestEntry>& manifest);

}  // namespace shapebias
