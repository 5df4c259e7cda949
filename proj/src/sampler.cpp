#include "shapebias/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <unordered_map>

#include "csv.hpp"
#include "shapebias/error.hpp"
#include "shapebias/formats.hpp"

namespace shapebias {

bool is_valid_pair(const StimulusManifestEntry& a, const StimulusManifestEntry& b, Factor factor,
                   SamplerOptions options) {
  if (a.image_id == b.image_id) return false;
  if (factor == Factor::Shape) {
    return a.source_object_id == b.source_object_id && a.texture_id != b.texture_id;
  }
  if (a.texture_id != b.texture_id || a.source_object_id == b.source_object_id) return false;
  return !options.require_distinct_shape_class || a.shape_class.index != b.shape_class.index;
}

PairIndex::PairIndex(const std::vector<StimulusManifestEntry>& manifest, Factor factor,
                     SamplerOptions options)
    : strict_(factor == Factor::Texture && options.require_distinct_shape_class) {
  if (manifest.empty()) throw Error(ErrorKind::Input, "empty stimulus manifest");
  validate_manifest(manifest, std::nullopt);

  std::vector<std::size_t> order(manifest.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return manifest[x].image_id < manifest[y].image_id;
  });

  std::map<std::string, std::size_t> group_of;
  images_.reserve(order.size());
  for (std::size_t idx : order) {
    const auto& entry = manifest[idx];
    const std::string& key = factor == Factor::Shape ? entry.source_object_id : entry.texture_id;
    auto [it, inserted] = group_of.try_emplace(key, groups_.size());
    if (inserted) groups_.emplace_back();
    auto& group = groups_[it->second];
    images_.push_back({entry.image_id, it->second, group.size(), entry.shape_class.index});
    group.push_back(images_.size() - 1);
  }

  // Pairs led by each image: later members of its group that qualify as partners.
  std::vector<std::uint64_t> led(images_.size(), 0);
  for (const auto& group : groups_) {
    std::map<int, std::uint64_t> later_by_class;
    for (std::size_t k = group.size(); k-- > 0;) {
      const auto& image = images_[group[k]];
      const std::uint64_t later = group.size() - 1 - k;
      led[group[k]] = strict_ ? later - later_by_class[image.shape_class] : later;
      ++later_by_class[image.shape_class];
    }
  }
  prefix_.assign(images_.size() + 1, 0);
  for (std::size_t i = 0; i < images_.size(); ++i) prefix_[i + 1] = prefix_[i] + led[i];
  total_ = prefix_.back();
}

bool PairIndex::partner_ok(const Image& a, const Image& b) const noexcept {
  return !strict_ || a.shape_class != b.shape_class;
}

ImagePair PairIndex::at(std::uint64_t index) const {
  if (index >= total_) throw Error(ErrorKind::Range, "pair index out of range");
  const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), index);
  const auto lead = static_cast<std::size_t>(it - prefix_.begin()) - 1;
  const auto& first = images_[lead];
  const auto& group = groups_[first.group];
  std::uint64_t offset = index - prefix_[lead];
  if (!strict_) return {first.id, images_[group[first.position + 1 + offset]].id};
  for (std::size_t k = first.position + 1; k < group.size(); ++k) {
    const auto& candidate = images_[group[k]];
    if (!partner_ok(first, candidate)) continue;
    if (offset == 0) return {first.id, candidate.id};
    --offset;
  }
  throw Error(ErrorKind::Range, "pair index out of range");
}

std::uint64_t enumerate_valid_pairs(const std::vector<StimulusManifestEntry>& manifest,
                                    Factor factor, SamplerOptions options) {
  return PairIndex(manifest, factor, options).size();
}

PairManifest sample_pairs(const std::vector<StimulusManifestEntry>& manifest, Factor factor,
                          std::size_t count, std::uint64_t seed, SamplerOptions options) {
  if (count == 0) throw Error(ErrorKind::Input, "pair count must be positive");
  const PairIndex index(manifest, factor, options);
  const std::uint64_t capacity = index.size();
  if (count > capacity) {
    throw Error(ErrorKind::Capacity, "requested " + std::to_string(count) + " " +
                                         std::string(to_string(factor)) + " pairs but only " +
                                         std::to_string(capacity) + " exist");
  }

  SplitMix64 rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> displaced;
  auto slot = [&](std::uint64_t i) {
    auto it = displaced.find(i);
    return it == displaced.end() ? i : it->second;
  };

  PairManifest out{factor, seed, {}};
  out.pairs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.bounded(capacity - i);
    const std::uint64_t chosen = slot(j);
    displaced[j] = slot(i);
    out.pairs.push_back(index.at(chosen));
  }
  return out;
}

std::string format_pair_manifest(const PairManifest& manifest) {
  std::string out(kPairManifestHeader);
  out += '\n';
  const std::string prefix =
      std::string(to_string(manifest.factor)) + ',' + std::to_string(manifest.seed) + ',';
  for (const auto& [a, b] : manifest.pairs) out += prefix + a + ',' + b + '\n';
  return out;
}

PairManifest parse_pair_manifest(std::string_view content) {
  PairManifest out;
  bool first = true;
  csv::for_each_row(content, kPairManifestHeader, 4, [&](const csv::Row& row) {
    const auto line = std::to_string(row.line);
    Factor factor;
    try {
      factor = parse_factor(row.fields[0]);
    } catch (const Error&) {
      throw Error(ErrorKind::Parse, "line " + line + ": unknown factor");
    }
    std::uint64_t seed = 0;
    const auto& s = row.fields[1];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorKind::Parse, "line " + line + ": invalid seed");
    }
    if (first) {
      out.factor = factor;
      out.seed = seed;
      first = false;
    } else if (factor != out.factor || seed != out.seed) {
      throw Error(ErrorKind::Integrity, "line " + line + ": factor/seed differ from first row");
    }
    if (row.fields[2].empty() || row.fields[3].empty() || row.fields[2] == row.fields[3]) {
      throw Error(ErrorKind::Integrity, "line " + line + ": pair needs two distinct image ids");
    }
    out.pairs.emplace_back(std::string(row.fields[2]), std::string(row.fields[3]));
  });
  if (first) throw Error(ErrorKind::Parse, "pair manifest has no rows");
  return out;
}

void write_pair_manifest(const std::filesystem::path& path, const PairManifest& manifest) {
  write_file_atomic(path, format_pair_manifest(manifest));
}

PairManifest read_pair_manifest(const std::filesystem::path& path) {
  return parse_pair_manifest(read_file(path));
}

}  // namespace shapebias
