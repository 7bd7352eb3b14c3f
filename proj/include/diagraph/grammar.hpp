#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace diagraph {

/// Symbolic expression as written in a grammar file. Source positions are carried for
/// diagnostics but do not take part in equality.
struct SExpr {
  enum class Kind { symbol, number, list };

  Kind kind = Kind::list;
  std::string text;  ///< symbol or number spelling
  double number = 0.0;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  static SExpr symbol(std::string s) { return SExpr{Kind::symbol, std::move(s), 0.0, {}, 0, 0}; }
  static SExpr list(std::vector<SExpr> xs) { return SExpr{Kind::list, {}, 0.0, std::move(xs), 0, 0}; }

  bool is_list() const { return kind == Kind::list; }
  bool is_symbol() const { return kind == Kind::symbol; }
  bool is_symbol(std::string_view name) const;
  bool is_keyword() const { return is_symbol() && !text.empty() && text.front() == ':'; }
  /// Head symbol of a non-empty list whose first item is a symbol, else "".
  std::string_view head() const;

  std::string str() const;

  friend bool operator==(const SExpr& a, const SExpr& b);
};

enum class RuleKind { ordinary, set };

/// How a constituent clause derives the context it hands to the sub-rule.
enum class ContextForm {
  none,      ///< `(Name ...)`: inherited context
  relation,  ///< `(Name (rel anchor ?) ...)`: index-generated candidates ∩ context
  typed,     ///< `(Name (Type context))`: inherited context, constituent typed as Type
  anchor,    ///< `(Name Other)`: inherited context; solutions must share an object with Other
};

struct ConstituentSpec {
  std::string name;
  ContextForm form = ContextForm::none;
  SExpr context;
  std::vector<SExpr> constraints;

  /// Rule or primitive kind the constituent is solved as.
  std::string type_name() const;

  friend bool operator==(const ConstituentSpec&, const ConstituentSpec&) = default;
};

struct SlotSpec {
  std::string name;
  SExpr expr;

  friend bool operator==(const SlotSpec&, const SlotSpec&) = default;
};

struct Rule {
  std::string lhs;
  RuleKind kind = RuleKind::ordinary;
  std::vector<std::string> rhs;  ///< ordinary rules
  std::string element_type;      ///< set rules
  std::vector<ConstituentSpec> clauses;
  std::vector<SExpr> constraints;
  std::vector<SExpr> element_constraints;
  std::vector<std::string> nullable;
  std::vector<SlotSpec> slots;
  bool largest = false;
  int line = 0;

  const ConstituentSpec* clause_for(std::string_view name) const;
  bool is_nullable(std::string_view name) const;
  /// Declared type of an RHS constituent (its clause's typed form, else its own name).
  std::string constituent_type(std::string_view name) const;
  /// RHS names in solving order: clause order first, then unclaused names in RHS order.
  std::vector<std::string> solving_order() const;

  friend bool operator==(const Rule& a, const Rule& b);
};

struct Grammar {
  std::vector<Rule> rules;

  /// Rule indices for an LHS symbol, in source order.
  std::vector<std::size_t> alternatives(std::string_view lhs) const;
  bool defines(std::string_view lhs) const;
  /// Distinct LHS symbols in first-appearance order.
  std::vector<std::string> symbols() const;

  friend bool operator==(const Grammar& a, const Grammar& b) { return a.rules == b.rules; }
};

/// Parses `LHS -> RHS... body... ;` rules. Lines starting with `*****` are comments;
/// `:constraint` and `:constraints` are synonyms. Throws Error with line:column on syntax
/// errors, unknown predicates, unresolved constituent references and duplicate slots.
Grammar parse_grammar(std::string_view text);
Grammar load_grammar(const std::filesystem::path& path);

/// Reads whitespace-separated s-expressions (no rule structure).
std::vector<SExpr> read_sexprs(std::string_view text);

struct Diagnostic {
  std::string rule;
  std::string reason;
};

std::vector<Diagnostic> validate_grammar(const Grammar& g);

struct RuleInfo {
  std::string lhs;
  std::vector<std::size_t> alternatives;
  std::vector<std::string> slots;
  bool primitive_only = false;  ///< every alternative binds directly from primitives
};

/// Keyed by case-folded LHS.
std::map<std::string, RuleInfo> rule_metadata(const Grammar& g);

std::string pretty_print(const Grammar& g);
std::string pretty_print(const Rule& r);

}  // namespace diagraph
