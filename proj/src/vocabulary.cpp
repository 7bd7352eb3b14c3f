#include "diagraph/vocabulary.hpp"

#include <array>

#include "diagraph/names.hpp"

namespace diagraph {

namespace {

using K = VocabularyKind;

constexpr std::array kVocabulary{
    VocabularyEntry{"horizp", 1, 1, K::predicate},
    VocabularyEntry{"vertp", 1, 1, K::predicate},
    VocabularyEntry{"long", 1, 1, K::predicate},
    VocabularyEntry{"short", 1, 1, K::predicate},
    VocabularyEntry{"small", 1, 1, K::predicate},
    VocabularyEntry{"numeric-textp", 1, 1, K::predicate},
    VocabularyEntry{"rectanglep", 1, 1, K::predicate},
    VocabularyEntry{"touch", 2, 2, K::relation},
    VocabularyEntry{"above", 2, 2, K::relation},
    VocabularyEntry{"below", 2, 2, K::relation},
    VocabularyEntry{"left", 2, 2, K::relation},
    VocabularyEntry{"right", 2, 2, K::relation},
    VocabularyEntry{"above-nearest", 2, 2, K::relation},
    VocabularyEntry{"below-nearest", 2, 2, K::relation},
    VocabularyEntry{"left-nearest", 2, 2, K::relation},
    VocabularyEntry{"right-nearest", 2, 2, K::relation},
    VocabularyEntry{"contain", 2, 2, K::relation},
    VocabularyEntry{"distance", 2, 2, K::function},
    VocabularyEntry{"a-length", 1, 1, K::function},
    VocabularyEntry{"left-endpoint", 1, 1, K::function},
    VocabularyEntry{"bottom-endpoint", 1, 1, K::function},
    VocabularyEntry{"size", 1, 1, K::function},
    VocabularyEntry{"number-of", 1, 1, K::function},
    VocabularyEntry{"<", 2, 2, K::comparison},
    VocabularyEntry{">", 2, 2, K::comparison},
    VocabularyEntry{"<=", 2, 2, K::comparison},
    VocabularyEntry{">=", 2, 2, K::comparison},
    VocabularyEntry{"=", 2, 2, K::comparison},
    VocabularyEntry{"or", 1, -1, K::logical},
    VocabularyEntry{"and", 1, -1, K::logical},
    VocabularyEntry{"not", 1, 1, K::logical},
    VocabularyEntry{"near", 0, 2, K::ger},
    VocabularyEntry{"horiz-aligned", 0, 2, K::ger},
    VocabularyEntry{"vert-aligned", 0, 2, K::ger},
    VocabularyEntry{"connected", 0, 2, K::ger},
    VocabularyEntry{"same-type", 0, 2, K::ger},
};

}  // namespace

std::span<const VocabularyEntry> vocabulary() { return kVocabulary; }

const VocabularyEntry* find_vocabulary(std::string_view name) {
  for (const auto& e : kVocabulary)
    if (iequals(e.name, name)) return &e;
  return nullptr;
}

bool is_ger(std::string_view name) {
  const auto* e = find_vocabulary(name);
  return e && e->kind == VocabularyKind::ger;
}

}  // namespace diagraph
