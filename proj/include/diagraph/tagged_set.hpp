#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "diagraph/geometry.hpp"

namespace diagraph {

/// Set of object tags kept sorted ascending. Intersection, union and difference are
/// linear merges; an optional counter records how many elements each call visited.
class TaggedSet {
 public:
  TaggedSet() = default;
  TaggedSet(std::initializer_list<Tag> tags) : TaggedSet(std::vector<Tag>(tags)) {}
  explicit TaggedSet(std::vector<Tag> tags) : tags_(std::move(tags)) {
    std::sort(tags_.begin(), tags_.end());
    tags_.erase(std::unique(tags_.begin(), tags_.end()), tags_.end());
  }

  /// Caller guarantees `sorted` is strictly ascending.
  static TaggedSet adopt_sorted(std::vector<Tag> sorted) {
    TaggedSet s;
    s.tags_ = std::move(sorted);
    return s;
  }

  bool contains(Tag t) const { return std::binary_search(tags_.begin(), tags_.end(), t); }
  std::size_t size() const { return tags_.size(); }
  bool empty() const { return tags_.empty(); }
  auto begin() const { return tags_.begin(); }
  auto end() const { return tags_.end(); }
  Tag front() const { return tags_.front(); }
  std::span<const Tag> tags() const { return tags_; }
  const std::vector<Tag>& vec() const { return tags_; }

  void insert(Tag t) {
    auto it = std::lower_bound(tags_.begin(), tags_.end(), t);
    if (it == tags_.end() || *it != t) tags_.insert(it, t);
  }

  void erase(Tag t) {
    auto it = std::lower_bound(tags_.begin(), tags_.end(), t);
    if (it != tags_.end() && *it == t) tags_.erase(it);
  }

  friend bool operator==(const TaggedSet&, const TaggedSet&) = default;

 private:
  std::vector<Tag> tags_;
};

TaggedSet intersect(const TaggedSet& a, const TaggedSet& b, std::size_t* visits = nullptr);
TaggedSet unite(const TaggedSet& a, const TaggedSet& b, std::size_t* visits = nullptr);
TaggedSet difference(const TaggedSet& a, const TaggedSet& b, std::size_t* visits = nullptr);
bool is_subset(const TaggedSet& sub, const TaggedSet& super);
bool intersects(std::span<const Tag> a, std::span<const Tag> b);

/// k-way merge of several sorted sets; cost is linear in the total input size times log k.
TaggedSet unite_all(std::span<const TaggedSet* const> sets, std::size_t* visits = nullptr);

}  // namespace diagraph
