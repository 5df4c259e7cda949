#include "shapebias/formats.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include <json.hpp>

#include "csv.hpp"
#include "shapebias/error.hpp"

namespace shapebias {

using json = nlohmann::ordered_json;

std::string probability_header() {
  std::string header = "image_id,shape_class,texture_class";
  for (const auto& name : cue_conflict_labels().names()) header += ",p_" + name;
  return header;
}

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw Error(ErrorKind::Data, "cannot format number");
  return std::string(buffer.data(), end);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading '" + path.string() + "'");
  return std::move(buffer).str();
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + temp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(temp, ignored);
      throw Error(ErrorKind::Io, "failed writing '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(temp, ignored);
    throw Error(ErrorKind::Io, "cannot move output into '" + path.string() + "': " + ec.message());
  }
}

// --- predictions ----------------------------------------------------------

namespace {

CategoryLabel resolve_at(const LabelSet& labels, std::string_view name, std::size_t line) {
  try {
    return labels.resolve(name);
  } catch (const Error& e) {
    throw Error(ErrorKind::Vocabulary,
                "line " + std::to_string(line) + ": unknown label '" + std::string(name) + "'");
  }
}

void require_distinct_cues(const CategoryLabel& shape, const CategoryLabel& texture,
                           std::size_t line) {
  if (shape.index == texture.index) {
    throw Error(ErrorKind::Integrity, "line " + std::to_string(line) + ": shape class '" +
                                          shape.name + "' equals texture class");
  }
}

void require_nonempty(std::string_view field, const char* name, std::size_t line) {
  if (field.empty()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": empty " + name);
  }
}

void require_unique(std::set<std::string>& seen, const std::string& id, const char* what,
                    std::size_t line) {
  if (!seen.insert(id).second) {
    throw Error(ErrorKind::Integrity,
                "line " + std::to_string(line) + ": duplicate " + what + " '" + id + "'");
  }
}

}  // namespace

std::vector<CueConflictRecord> parse_predictions(std::string_view content) {
  const auto& labels = cue_conflict_labels();
  std::vector<CueConflictRecord> records;
  std::set<std::string> seen;
  csv::for_each_row(content, kPredictionsHeader, 4, [&](const csv::Row& row) {
    require_nonempty(row.fields[0], "image_id", row.line);
    CueConflictRecord record{std::string(row.fields[0]), resolve_at(labels, row.fields[1], row.line),
                             resolve_at(labels, row.fields[2], row.line),
                             resolve_at(labels, row.fields[3], row.line)};
    require_distinct_cues(record.shape_class, record.texture_class, row.line);
    require_unique(seen, record.image_id, "image_id", row.line);
    records.push_back(std::move(record));
  });
  return records;
}

std::vector<CueConflictRecord> read_predictions(const fs::path& path) {
  return parse_predictions(read_file(path));
}

std::string format_predictions(const std::vector<CueConflictRecord>& records) {
  std::string out(kPredictionsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.image_id + ',' + r.shape_class.name + ',' + r.texture_class.name + ',' +
           r.predicted_class.name + '\n';
  }
  return out;
}

bool is_probability_variant(std::string_view content) {
  const auto end = content.find('\n');
  return content.substr(0, end) == probability_header();
}

std::vector<ProbabilityRecord> parse_probabilities(std::string_view content) {
  const auto& labels = cue_conflict_labels();
  const std::string header = probability_header();
  std::vector<ProbabilityRecord> rows;
  std::set<std::string> seen;
  csv::for_each_row(content, header, 3 + kCueConflictCategories, [&](const csv::Row& row) {
    require_nonempty(row.fields[0], "image_id", row.line);
    ProbabilityRecord record{std::string(row.fields[0]), resolve_at(labels, row.fields[1], row.line),
                             resolve_at(labels, row.fields[2], row.line), {}};
    require_distinct_cues(record.shape_class, record.texture_class, row.line);
    for (std::size_t c = 0; c < kCueConflictCategories; ++c) {
      const double p = csv::parse_number(row.fields[3 + c], row.line);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw Error(ErrorKind::Data, "line " + std::to_string(row.line) +
                                         ": probability outside [0,1] in column p_" +
                                         labels.names()[c]);
      }
      record.probabilities[c] = p;
    }
    require_unique(seen, record.image_id, "image_id", row.line);
    rows.push_back(std::move(record));
  });
  return rows;
}

std::vector<ProbabilityRecord> read_probabilities(const fs::path& path) {
  return parse_probabilities(read_file(path));
}

std::string format_probabilities(const std::vector<ProbabilityRecord>& rows) {
  std::string out = probability_header();
  out += '\n';
  for (const auto& r : rows) {
    out += r.image_id + ',' + r.shape_class.name + ',' + r.texture_class.name;
    for (double p : r.probabilities) out += ',' + format_double(p);
    out += '\n';
  }
  return out;
}

// --- ACTP -----------------------------------------------------------------

namespace {

std::uint32_t load_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

float load_f32(const char* p) { return std::bit_cast<float>(load_u32(p)); }

void store_f32(std::string& out, float v) { store_u32(out, std::bit_cast<std::uint32_t>(v)); }

}  // namespace

ActivationPairSet parse_activation_pairs(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kActpMagic, 4) != 0) {
    throw Error(ErrorKind::Format, "missing ACTP magic");
  }
  if (bytes.size() < kActpHeaderBytes) {
    throw Error(ErrorKind::Length, "truncated ACTP header (" + std::to_string(bytes.size()) +
                                       " bytes)");
  }
  const char* p = bytes.data();
  const std::uint32_t version = load_u32(p + 4);
  if (version != kActpVersion) {
    throw Error(ErrorKind::Format, "unsupported ACTP version " + std::to_string(version));
  }
  const auto factor_byte = static_cast<unsigned char>(p[8]);
  if (factor_byte > 1) {
    throw Error(ErrorKind::Format, "invalid factor byte " + std::to_string(factor_byte));
  }
  const std::uint64_t pairs = load_u32(p + 9);
  const std::uint64_t neurons = load_u32(p + 13);
  if (pairs == 0 || neurons == 0) {
    throw Error(ErrorKind::Format, "ACTP header declares an empty matrix");
  }
  const std::uint64_t values = pairs * neurons;
  const std::uint64_t expected = kActpHeaderBytes + 2 * 4 * values;
  if (bytes.size() != expected) {
    throw Error(ErrorKind::Length, "ACTP payload holds " +
                                       std::to_string((bytes.size() - kActpHeaderBytes) / 4) +
                                       " floats, header declares " + std::to_string(2 * values));
  }
  std::vector<double> a(values), b(values);
  const char* payload = p + kActpHeaderBytes;
  for (std::uint64_t i = 0; i < values; ++i) a[i] = load_f32(payload + 4 * i);
  payload += 4 * values;
  for (std::uint64_t i = 0; i < values; ++i) b[i] = load_f32(payload + 4 * i);
  return ActivationPairSet(static_cast<Factor>(factor_byte), pairs, neurons, std::move(a),
                           std::move(b));
}

ActivationPairSet read_activation_pairs(const fs::path& path) {
  return parse_activation_pairs(read_file(path));
}

std::string format_activation_pairs(const ActivationPairSet& pairs) {
  std::string out;
  out.reserve(kActpHeaderBytes + 8 * pairs.matrix_a().size());
  out.append(kActpMagic, 4);
  store_u32(out, kActpVersion);
  out.push_back(static_cast<char>(pairs.factor()));
  store_u32(out, static_cast<std::uint32_t>(pairs.pair_count()));
  store_u32(out, static_cast<std::uint32_t>(pairs.neuron_count()));
  for (double v : pairs.matrix_a()) store_f32(out, static_cast<float>(v));
  for (double v : pairs.matrix_b()) store_f32(out, static_cast<float>(v));
  return out;
}

void write_activation_pairs(const fs::path& path, const ActivationPairSet& pairs) {
  write_file_atomic(path, format_activation_pairs(pairs));
}

// --- model pool -----------------------------------------------------------

std::vector<ModelRecord> parse_model_pool(std::string_view content) {
  std::vector<ModelRecord> pool;
  std::set<std::string> seen;
  csv::for_each_row(content, kModelPoolHeader, 3, [&](const csv::Row& row) {
    require_nonempty(row.fields[0], "model_id", row.line);
    require_nonempty(row.fields[1], "family", row.line);
    ModelRecord record;
    record.model_id = std::string(row.fields[0]);
    record.family = std::string(row.fields[1]);
    record.top1_accuracy = csv::parse_number(row.fields[2], row.line);
    if (!(record.top1_accuracy >= 0.0 && record.top1_accuracy <= 1.0)) {
      throw Error(ErrorKind::Range, "line " + std::to_string(row.line) + ": top1_accuracy " +
                                        std::string(row.fields[2]) + " outside [0,1]");
    }
    require_unique(seen, record.model_id, "model_id", row.line);
    pool.push_back(std::move(record));
  });
  return pool;
}

std::vector<ModelRecord> read_model_pool(const fs::path& path) {
  return parse_model_pool(read_file(path));
}

std::string format_model_pool(const std::vector<ModelRecord>& pool) {
  std::string out(kModelPoolHeader);
  out += '\n';
  for (const auto& m : pool) {
    out += m.model_id + ',' + m.family + ',' + format_double(m.top1_accuracy) + '\n';
  }
  return out;
}

// --- results JSON-lines ---------------------------------------------------

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_number(const json& object, const char* key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line) + ": field '" + key + "' is not a number");
  }
  return it->get<double>();
}

template <typename Fn>
void for_each_json_line(std::string_view content, Fn&& fn) {
  std::size_t line = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    ++line;
    const auto text = content.substr(start, end - start);
    start = end + 1;
    if (text.empty()) throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": empty line");
    json object;
    try {
      object = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + e.what());
    }
    if (!object.is_object()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": expected a JSON object");
    }
    fn(object, line);
  }
}

std::string required_string(const json& object, const char* key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string format_results(const std::vector<ModelRecord>& pool) {
  std::string out;
  for (const auto& m : pool) {
    json object;
    object["model_id"] = m.model_id;
    object["family"] = m.family;
    object["top1_accuracy"] = m.top1_accuracy;
    object["shape_bias"] = optional_json(m.shape_bias);
    object["shape_dim"] = optional_json(m.shape_dim);
    object["texture_dim"] = optional_json(m.texture_dim);
    object["residual_dim"] = optional_json(m.residual_dim);
    object["shape_dim_ratio"] = optional_json(m.shape_dim_ratio);
    out += object.dump();
    out += '\n';
  }
  return out;
}

std::vector<ModelRecord> parse_results(std::string_view content) {
  std::vector<ModelRecord> pool;
  std::set<std::string> seen;
  for_each_json_line(content, [&](const json& object, std::size_t line) {
    ModelRecord m;
    m.model_id = required_string(object, "model_id", line);
    m.family = required_string(object, "family", line);
    auto top1 = optional_number(object, "top1_accuracy", line);
    if (!top1) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": missing top1_accuracy");
    }
    m.top1_accuracy = *top1;
    m.shape_bias = optional_number(object, "shape_bias", line);
    m.shape_dim = optional_number(object, "shape_dim", line);
    m.texture_dim = optional_number(object, "texture_dim", line);
    m.residual_dim = optional_number(object, "residual_dim", line);
    m.shape_dim_ratio = optional_number(object, "shape_dim_ratio", line);
    validate(m);
    require_unique(seen, m.model_id, "model_id", line);
    pool.push_back(std::move(m));
  });
  return pool;
}

std::vector<ModelRecord> read_results(const fs::path& path) { return parse_results(read_file(path)); }

std::vector<MetricUpdate> parse_metric_lines(std::string_view content) {
  static constexpr const char* kMetricKeys[] = {"shape_bias", "shape_dim", "texture_dim",
                                                "residual_dim", "shape_dim_ratio"};
  std::vector<MetricUpdate> updates;
  for_each_json_line(content, [&](const json& object, std::size_t line) {
    MetricUpdate update;
    update.line = line;
    update.model_id = required_string(object, "model_id", line);
    for (const char* key : kMetricKeys) {
      if (auto value = optional_number(object, key, line)) update.values[key] = *value;
    }
    updates.push_back(std::move(update));
  });
  return updates;
}

// --- stimulus manifest ----------------------------------------------------

std::vector<StimulusManifestEntry> parse_stimulus_manifest(std::string_view content) {
  const auto& labels = voc_labels();
  std::vector<StimulusManifestEntry> manifest;
  csv::for_each_row(content, kStimulusManifestHeader, 4, [&](const csv::Row& row) {
    require_nonempty(row.fields[0], "image_id", row.line);
    require_nonempty(row.fields[1], "source_object_id", row.line);
    require_nonempty(row.fields[3], "texture_id", row.line);
    manifest.push_back({std::string(row.fields[0]), std::string(row.fields[1]),
                        resolve_at(labels, row.fields[2], row.line), std::string(row.fields[3])});
  });
  return manifest;
}

void validate_manifest(const std::vector<StimulusManifestEntry>& manifest,
                       std::optional<std::size_t> textures_per_object) {
  std::set<std::string> images;
  std::set<std::pair<std::string, std::string>> combos;
  std::map<std::string, std::pair<int, std::size_t>> objects;  // class index, texture count
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& e = manifest[i];
    const std::size_t line = i + 2;
    require_unique(images, e.image_id, "image_id", line);
    if (!combos.emplace(e.source_object_id, e.texture_id).second) {
      throw Error(ErrorKind::Integrity, "line " + std::to_string(line) + ": object '" +
                                            e.source_object_id + "' repeats texture '" +
                                            e.texture_id + "'");
    }
    auto [it, inserted] = objects.try_emplace(e.source_object_id, e.shape_class.index, 0);
    if (!inserted && it->second.first != e.shape_class.index) {
      throw Error(ErrorKind::Integrity, "line " + std::to_string(line) + ": object '" +
                                            e.source_object_id + "' has conflicting shape classes");
    }
    ++it->second.second;
  }
  if (textures_per_object) {
    for (const auto& [object, info] : objects) {
      if (info.second != *textures_per_object) {
        throw Error(ErrorKind::Integrity, "object '" + object + "' has " +
                                              std::to_string(info.second) + " textures, expected " +
                                              std::to_string(*textures_per_object));
      }
    }
  }
}

std::vector<StimulusManifestEntry> read_stimulus_manifest(
    const fs::path& path, std::optional<std::size_t> textures_per_object) {
  auto manifest = parse_stimulus_manifest(read_file(path));
  validate_manifest(manifest, textures_per_object);
  return manifest;
}

std::string format_stimulus_manifest(const std::vector<StimulusManifestEntry>& manifest) {
  std::string out(kStimulusManifestHeader);
  out += '\n';
  for (const auto& e : manifest) {
    out += e.image_id + ',' + e.source_object_id + ',' + e.shape_class.name + ',' + e.texture_id +
           '\n';
  }
  return out;
}

}  // namespace shapebias
