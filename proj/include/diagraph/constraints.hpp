#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diagraph/config.hpp"
#include "diagraph/grammar.hpp"
#include "diagraph/scene.hpp"
#include "diagraph/tagged_set.hpp"
#include "diagraph/value.hpp"

namespace diagraph {

/// Set-rule group under evaluation, before it becomes a derived object. Referenced from
/// expressions as ObjectRef{0}.
struct PendingSet {
  std::vector<Tag> elements;
  Rect bbox;
};

/// Name -> object binding for one rule instance. A nullopt value is a null binding.
class Bindings {
 public:
  void bind(std::string name, std::optional<Tag> tag);
  void bind_pending(std::string name, const PendingSet* set);
  void unbind(std::string_view name);

  bool has(std::string_view name) const;
  bool is_null(std::string_view name) const;
  /// ObjectRef for a bound object (tag 0 for the pending set), monostate when null.
  Value value(std::string_view name) const;

  const PendingSet* pending() const { return pending_; }

 private:
  struct Entry {
    std::string name;
    std::optional<Tag> tag;
  };
  std::vector<Entry> entries_;
  std::string pending_name_;
  const PendingSet* pending_ = nullptr;
};

struct Environment {
  const Scene& scene;
  EngineConfig config;
  Thresholds thresholds;
  /// Receives type-mismatch notes when set.
  std::vector<std::string>* notes = nullptr;

  Environment(const Scene& s, EngineConfig cfg);
};

/// Evaluates an expression to a value. Unknown names and unknown heads throw Error; type
/// mismatches throw TypeMismatch.
Value eval_expr(const SExpr& expr, const Bindings& b, const Environment& env);

/// A constraint holds when it evaluates to true. Constraints mentioning a null-bound name
/// hold vacuously. Type mismatches make the constraint false and leave a note.
bool eval_constraint(const SExpr& expr, const Bindings& b, const Environment& env);

/// Evaluates a `:additional-slots` expression; `(Name self)` reads constituent Name.
Value eval_slot(const SExpr& expr, const Bindings& b, const Environment& env);

struct TypeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// True when the expression names a null-bound constituent anywhere.
bool mentions_null(const SExpr& expr, const Bindings& b);

/// Maximal groups of `objects` under a generalized equivalence relation: connected
/// components of the pairwise relation, ordered by smallest member tag.
std::vector<TaggedSet> ger_partition(const TaggedSet& objects, std::string_view relation,
                                     const Environment& env);

/// Pairwise form of a GER, used for brute-force checks and two-argument constraints.
bool ger_related(Tag a, Tag b, std::string_view relation, const Environment& env);

/// Common refinement: two objects share a group iff every input partition groups them.
std::vector<TaggedSet> refine_partitions(const TaggedSet& objects,
                                         const std::vector<std::vector<TaggedSet>>& partitions);

/// Context for a relation form containing `?`: index-generated candidates intersected with
/// the inherited context. `visits` receives the tagged-intersection cost.
TaggedSet filter_context(const TaggedSet& context, const SExpr& form, const Bindings& b,
                         const Environment& env, std::size_t* visits = nullptr);

/// Candidates on the `dir` side of `anchor` whose gap is within h of the smallest gap.
TaggedSet nearest_band(const TaggedSet& candidates, const Rect& anchor, Direction dir,
                       const Environment& env);

/// Arc length of any measurable object; derived objects sum over their children.
double object_length(Tag tag, const Environment& env);

}  // namespace diagraph
