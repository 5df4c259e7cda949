#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace shapebias {

struct CategoryLabel {
  std::string name;
  int index = -1;

  friend bool operator==(const CategoryLabel& a, const CategoryLabel& b) {
    return a.index == b.index && a.name == b.name;
  }
  friend bool operator<(const CategoryLabel& a, const CategoryLabel& b) { return a.index < b.index; }
};

// Fixed-size, ordered vocabulary. Lookup is exact and case-sensitive.
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // Throws Error(Vocabulary) for names outside the set.
  CategoryLabel resolve(std::string_view name) const;
  CategoryLabel at(int index) const;
  bool contains(std::string_view name) const noexcept;

 private:
  std::vector<std::string> names_;
};

// The 16 coarse categories of the cue-conflict stimuli, in index order.
const LabelSet& cue_conflict_labels();

// The 20 Pascal VOC object classes used by the stylized pair stimuli.
const LabelSet& voc_labels();

inline constexpr std::size_t kCueConflictCategories = 16;
inline constexpr std::size_t kVocCategories = 20;

}  // namespace shapebias
