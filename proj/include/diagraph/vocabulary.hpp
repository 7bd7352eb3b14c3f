#pragma once

#include <span>
#include <string_view>

namespace diagraph {

enum class VocabularyKind { predicate, relation, function, comparison, logical, ger };

/// A built-in constraint head. Positional arity excludes `:keyword value` pairs.
struct VocabularyEntry {
  std::string_view name;
  int min_args;
  int max_args;  ///< -1 for variadic
  VocabularyKind kind;
};

std::span<const VocabularyEntry> vocabulary();
/// Case-insensitive lookup; nullptr when the head is not registered.
const VocabularyEntry* find_vocabulary(std::string_view name);
bool is_ger(std::string_view name);

}  // namespace diagraph
