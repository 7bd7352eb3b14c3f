#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diagraph/config.hpp"
#include "diagraph/constraints.hpp"
#include "diagraph/grammar.hpp"
#include "diagraph/scene.hpp"
#include "diagraph/tagged_set.hpp"

namespace diagraph {

enum class TraceKind {
  enter,      ///< rule symbol entered with a context
  exit,       ///< rule symbol left; `objects` holds its solutions
  clause,     ///< constituent space found; `context` is what it was solved against
  group,      ///< set-rule group formed from GER partitions
  reject,     ///< candidate or group failed a constraint; `detail` names it
  nullbind,   ///< constituent bound null
  cached,     ///< solutions reused for an identical (symbol, context)
};

struct TraceEvent {
  TraceKind kind;
  int depth = 0;
  std::string rule;  ///< LHS being solved
  std::string name;  ///< constituent name where relevant
  TaggedSet context;
  std::vector<Tag> objects;
  std::string detail;

  std::string str() const;
};

struct ParseStats {
  std::size_t tuples_examined = 0;
  std::size_t monotonicity_checks = 0;
  std::size_t monotonicity_violations = 0;
  std::size_t intersection_visits = 0;
  std::size_t derived_created = 0;
};

struct ParseResult {
  std::string start;
  std::vector<Tag> solutions;
  std::vector<TraceEvent> trace;
  std::vector<std::string> notes;
  ParseStats stats;
};

/// Top-down, depth-first parser. Contexts are tagged sets passed down as inherited
/// attributes; derived objects are installed into the scene's index as soon as they exist.
class Parser {
 public:
  Parser(const Grammar& grammar, Scene& scene, EngineConfig config = {}, bool trace = false);

  /// All distinct solutions of `start` over every base object. Throws Error for an
  /// unknown start symbol or when the tuple budget is exhausted.
  ParseResult parse(std::string_view start);

  /// Solutions of a symbol (rule LHS or primitive kind) drawn from `context`.
  std::vector<Tag> solve(std::string_view symbol, const TaggedSet& context);

  const ParseStats& stats() const { return result_.stats; }
  const Environment& environment() const { return env_; }

 private:
  std::vector<Tag> solve_rule(std::size_t rule_index, const TaggedSet& context);
  std::vector<Tag> solve_set_rule(std::size_t rule_index, const TaggedSet& context);
  void bind_from(std::size_t rule_index, const std::vector<std::string>& order, std::size_t k,
                 const TaggedSet& context, Bindings& bindings, std::vector<Tag>& out);
  Tag make_derived(std::size_t rule_index, const Bindings& bindings);
  Tag make_set(std::size_t rule_index, const TaggedSet& group);
  void count_tuple();
  void emit(TraceEvent ev);

  Grammar grammar_;
  Scene& scene_;
  EngineConfig config_;
  Environment env_;
  bool trace_;
  int depth_ = 0;
  ParseResult result_;
  std::map<std::pair<std::string, std::vector<Tag>>, std::vector<Tag>> cache_;
  std::vector<std::pair<std::string, std::vector<Tag>>> active_;
};

ParseResult parse(const Grammar& grammar, Scene& scene, std::string_view start,
                  const EngineConfig& config = {}, bool trace = false);

/// Drops solutions whose type and constituent multiset repeat an earlier one.
std::vector<Tag> dedupe(const Scene& scene, const std::vector<Tag>& solutions);

/// Re-evaluates every constraint of the rule that built `tag`, recursively through its
/// derived constituents. Returns the failing constraint texts (empty when sound).
std::vector<std::string> replay(const Grammar& grammar, const Scene& scene, Tag tag,
                                const EngineConfig& config = {});

}  // namespace diagraph
