#include "diagraph/tagged_set.hpp"

#include <queue>
#include <utility>

namespace diagraph {

TaggedSet intersect(const TaggedSet& a, const TaggedSet& b, std::size_t* visits) {
  std::vector<Tag> out;
  auto i = a.begin(), j = b.begin();
  std::size_t steps = 0;
  while (i != a.end() && j != b.end()) {
    ++steps;
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      out.push_back(*i);
      ++i;
      ++j;
      ++steps;
    }
  }
  if (visits) *visits += steps;
  return TaggedSet::adopt_sorted(std::move(out));
}

TaggedSet unite(const TaggedSet& a, const TaggedSet& b, std::size_t* visits) {
  std::vector<Tag> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  if (visits) *visits += a.size() + b.size();
  return TaggedSet::adopt_sorted(std::move(out));
}

TaggedSet difference(const TaggedSet& a, const TaggedSet& b, std::size_t* visits) {
  std::vector<Tag> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  if (visits) *visits += a.size() + b.size();
  return TaggedSet::adopt_sorted(std::move(out));
}

bool is_subset(const TaggedSet& sub, const TaggedSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool intersects(std::span<const Tag> a, std::span<const Tag> b) {
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return true;
  }
  return false;
}

TaggedSet unite_all(std::span<const TaggedSet* const> sets, std::size_t* visits) {
  using Cursor = std::pair<Tag, std::size_t>;  // (current tag, set index)
  std::priority_queue<Cursor, std::vector<Cursor>, std::greater<>> heap;
  std::vector<std::size_t> pos(sets.size(), 0);
  for (std::size_t k = 0; k < sets.size(); ++k)
    if (!sets[k]->empty()) heap.emplace(sets[k]->vec()[0], k);

  std::vector<Tag> out;
  std::size_t steps = 0;
  while (!heap.empty()) {
    auto [tag, k] = heap.top();
    heap.pop();
    ++steps;
    if (out.empty() || out.back() != tag) out.push_back(tag);
    if (++pos[k] < sets[k]->size()) heap.emplace(sets[k]->vec()[pos[k]], k);
  }
  if (visits) *visits += steps;
  return TaggedSet::adopt_sorted(std::move(out));
}

}  // namespace diagraph
