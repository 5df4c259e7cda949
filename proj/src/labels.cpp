#include "shapebias/labels.hpp"

#include <algorithm>
#include <set>

#include "shapebias/error.hpp"

namespace shapebias {

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) {
    throw Error(ErrorKind::Integrity, "label set contains duplicate names");
  }
}

CategoryLabel LabelSet::resolve(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw Error(ErrorKind::Vocabulary, "unknown label '" + std::string(name) + "'");
  }
  return CategoryLabel{*it, static_cast<int>(it - names_.begin())};
}

CategoryLabel LabelSet::at(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= names_.size()) {
    throw Error(ErrorKind::Range, "label index " + std::to_string(index) + " out of range");
  }
  return CategoryLabel{names_[static_cast<std::size_t>(index)], index};
}

bool LabelSet::contains(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const LabelSet& cue_conflict_labels() {
  static const LabelSet set({"airplane", "bear", "bicycle", "bird", "boat", "bottle", "car", "cat",
                             "chair", "clock", "dog", "elephant", "keyboard", "knife", "oven",
                             "truck"});
  return set;
}

const LabelSet& voc_labels() {
  static const LabelSet set({"aeroplane", "bicycle", "bird", "boat", "bottle", "bus", "car",
                             "cat", "chair", "cow", "diningtable", "dog", "horse", "motorbike",
                             "person", "pottedplant", "sheep", "sofa", "train", "tvmonitor"});
  return set;
}

}  // namespace shapebias
