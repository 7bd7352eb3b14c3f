#include "diagraph/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "diagraph/error.hpp"
#include "diagraph/geometry.hpp"
#include "diagraph/names.hpp"
#include "diagraph/vocabulary.hpp"

namespace diagraph {

bool SExpr::is_symbol(std::string_view name) const { return is_symbol() && iequals(text, name); }

std::string_view SExpr::head() const {
  if (!is_list() || items.empty() || !items.front().is_symbol()) return {};
  return items.front().text;
}

std::string SExpr::str() const {
  if (!is_list()) return text;
  std::string out = "(";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ' ';
    out += items[k].str();
  }
  return out + ")";
}

bool operator==(const SExpr& a, const SExpr& b) {
  return a.kind == b.kind && a.text == b.text && a.items == b.items;
}

std::string ConstituentSpec::type_name() const {
  if (form == ContextForm::typed) return context.items.front().text;
  return name;
}

const ConstituentSpec* Rule::clause_for(std::string_view name) const {
  for (const auto& c : clauses)
    if (iequals(c.name, name)) return &c;
  return nullptr;
}

bool Rule::is_nullable(std::string_view name) const {
  return std::any_of(nullable.begin(), nullable.end(),
                     [&](const std::string& n) { return iequals(n, name); });
}

std::string Rule::constituent_type(std::string_view name) const {
  if (const auto* c = clause_for(name)) return c->type_name();
  return std::string(name);
}

std::vector<std::string> Rule::solving_order() const {
  std::vector<std::string> order;
  for (const auto& c : clauses) {
    auto it = std::find_if(rhs.begin(), rhs.end(), [&](const auto& n) { return iequals(n, c.name); });
    order.push_back(it != rhs.end() ? *it : c.name);
  }
  for (const auto& n : rhs)
    if (!clause_for(n)) order.push_back(n);
  return order;
}

bool operator==(const Rule& a, const Rule& b) {
  return a.lhs == b.lhs && a.kind == b.kind && a.rhs == b.rhs && a.element_type == b.element_type &&
         a.clauses == b.clauses && a.constraints == b.constraints &&
         a.element_constraints == b.element_constraints && a.nullable == b.nullable &&
         a.slots == b.slots && a.largest == b.largest;
}

std::vector<std::size_t> Grammar::alternatives(std::string_view lhs) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < rules.size(); ++k)
    if (iequals(rules[k].lhs, lhs)) out.push_back(k);
  return out;
}

bool Grammar::defines(std::string_view lhs) const {
  return std::any_of(rules.begin(), rules.end(), [&](const Rule& r) { return iequals(r.lhs, lhs); });
}

std::vector<std::string> Grammar::symbols() const {
  std::vector<std::string> out;
  for (const auto& r : rules)
    if (std::none_of(out.begin(), out.end(), [&](const auto& s) { return iequals(s, r.lhs); }))
      out.push_back(r.lhs);
  return out;
}

namespace {

struct Token {
  enum class Kind { lparen, rparen, semi, atom, eof };
  Kind kind;
  std::string text;
  int line;
  int column;
};

[[noreturn]] void fail_at(int line, int column, const std::string& msg) {
  throw Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  bool line_start = true;
  std::size_t k = 0;
  auto advance = [&] {
    if (src[k] == '\n') {
      ++line;
      col = 1;
      line_start = true;
    } else {
      ++col;
    }
    ++k;
  };
  while (k < src.size()) {
    const char c = src[k];
    if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (line_start && src.substr(k, 5) == "*****") {
      while (k < src.size() && src[k] != '\n') advance();
      continue;
    }
    line_start = false;
    if (c == '(' || c == ')' || c == ';') {
      out.push_back({c == '(' ? Token::Kind::lparen
                              : c == ')' ? Token::Kind::rparen : Token::Kind::semi,
                     std::string(1, c), line, col});
      advance();
      continue;
    }
    const int l0 = line, c0 = col;
    std::string atom;
    while (k < src.size() && !std::isspace(static_cast<unsigned char>(src[k])) && src[k] != '(' &&
           src[k] != ')' && src[k] != ';') {
      atom += src[k];
      advance();
    }
    out.push_back({Token::Kind::atom, std::move(atom), l0, c0});
  }
  out.push_back({Token::Kind::eof, "", line, col});
  return out;
}

bool looks_numeric(const std::string& s) {
  static const std::regex pattern(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  return std::regex_match(s, pattern);
}

class Reader {
 public:
  explicit Reader(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool at_end() const { return peek().kind == Token::Kind::eof; }

  SExpr expr() {
    Token t = next();
    switch (t.kind) {
      case Token::Kind::atom: {
        SExpr e;
        e.line = t.line;
        e.column = t.column;
        if (looks_numeric(t.text)) {
          e.kind = SExpr::Kind::number;
          e.number = std::strtod(t.text.c_str(), nullptr);
        } else {
          e.kind = SExpr::Kind::symbol;
        }
        e.text = t.text;
        return e;
      }
      case Token::Kind::lparen: {
        SExpr e;
        e.kind = SExpr::Kind::list;
        e.line = t.line;
        e.column = t.column;
        while (peek().kind != Token::Kind::rparen) {
          if (peek().kind == Token::Kind::eof) fail_at(t.line, t.column, "unbalanced '('");
          if (peek().kind == Token::Kind::semi)
            fail_at(peek().line, peek().column, "unexpected ';' inside list");
          e.items.push_back(expr());
        }
        next();
        return e;
      }
      case Token::Kind::rparen: fail_at(t.line, t.column, "unexpected ')'");
      case Token::Kind::semi: fail_at(t.line, t.column, "unexpected ';'");
      case Token::Kind::eof: fail_at(t.line, t.column, "unexpected end of input");
    }
    fail_at(t.line, t.column, "unreadable token");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

SExpr as_constraint(const SExpr& e) {
  if (e.is_symbol() && !e.is_keyword()) {
    SExpr wrapped = SExpr::list({e});
    wrapped.line = e.line;
    wrapped.column = e.column;
    return wrapped;
  }
  return e;
}

bool contains_hole(const SExpr& e) {
  return std::any_of(e.items.begin(), e.items.end(), [](const SExpr& x) { return x.is_symbol("?"); });
}

bool is_known_constant(const SExpr& e) {
  return e.is_symbol("*tiny*") || e.is_symbol("*very-long*");
}

// Names a constraint expression may mention in a given rule.
struct Scope {
  const Rule* rule;
  bool allow_hole = false;
  bool in_slot = false;

  bool is_name(std::string_view s) const {
    if (rule->kind == RuleKind::set) return iequals(s, rule->element_type) || iequals(s, rule->lhs);
    return std::any_of(rule->rhs.begin(), rule->rhs.end(), [&](const auto& n) { return iequals(n, s); });
  }
};

void check_expr(const SExpr& e, const Scope& scope) {
  if (e.kind == SExpr::Kind::number) return;
  if (e.is_symbol()) {
    if (e.is_keyword() || e.is_symbol("t") || e.is_symbol("nil")) return;
    if (e.is_symbol("?")) {
      if (!scope.allow_hole) fail_at(e.line, e.column, "'?' outside a context form");
      return;
    }
    if (e.text.size() > 1 && e.text.front() == '*' && e.text.back() == '*') {
      if (!is_known_constant(e)) fail_at(e.line, e.column, "unknown constant " + e.text);
      return;
    }
    if (scope.in_slot && e.is_symbol("self")) return;
    if (!scope.is_name(e.text))
      fail_at(e.line, e.column,
              "unresolved constituent reference '" + e.text + "' in rule " + scope.rule->lhs);
    return;
  }
  if (e.items.empty()) fail_at(e.line, e.column, "empty expression");
  const SExpr& head = e.items.front();
  if (!head.is_symbol()) fail_at(e.line, e.column, "expression head must be a symbol");
  const bool accessor = scope.in_slot && scope.is_name(head.text);
  if (!accessor && !find_vocabulary(head.text))
    fail_at(head.line, head.column, "unknown predicate '" + head.text + "'");
  for (std::size_t k = 1; k < e.items.size(); ++k) check_expr(e.items[k], scope);
}

ConstituentSpec read_clause(const SExpr& form, const Rule& rule) {
  ConstituentSpec spec;
  const SExpr& name = form.items.front();
  auto it = std::find_if(rule.rhs.begin(), rule.rhs.end(),
                         [&](const auto& n) { return iequals(n, name.text); });
  if (it == rule.rhs.end())
    fail_at(name.line, name.column,
            "unresolved constituent reference '" + name.text + "' in rule " + rule.lhs);
  spec.name = name.text;
  std::size_t k = 1;
  if (k < form.items.size() && !form.items[k].is_keyword()) {
    const SExpr& ctx = form.items[k];
    if (ctx.is_symbol()) {
      spec.form = ContextForm::anchor;
    } else if (ctx.is_list() && contains_hole(ctx)) {
      spec.form = ContextForm::relation;
      check_expr(ctx, Scope{&rule, true, false});
    } else if (ctx.is_list() && ctx.items.size() == 2 && ctx.items[0].is_symbol() &&
               ctx.items[1].is_symbol("context")) {
      spec.form = ContextForm::typed;
    } else {
      fail_at(ctx.line, ctx.column, "unrecognized context form " + ctx.str());
    }
    spec.context = ctx;
    ++k;
  }
  if (k < form.items.size()) {
    const SExpr& kw = form.items[k];
    if (!kw.is_symbol(":constraints") && !kw.is_symbol(":constraint"))
      fail_at(kw.line, kw.column, "expected :constraints in clause for " + spec.name);
    for (++k; k < form.items.size(); ++k) {
      SExpr c = as_constraint(form.items[k]);
      check_expr(c, Scope{&rule, false, false});
      spec.constraints.push_back(std::move(c));
    }
  }
  return spec;
}

void read_body_form(const SExpr& form, Rule& rule) {
  if (form.items.empty() || !form.items.front().is_symbol())
    fail_at(form.line, form.column, "body form must start with a keyword or constituent name");
  const SExpr& key = form.items.front();
  auto rest = [&] { return std::vector<SExpr>(form.items.begin() + 1, form.items.end()); };

  if (!key.is_keyword()) {
    if (rule.kind == RuleKind::set)
      fail_at(key.line, key.column, "set rule " + rule.lhs + " cannot have constituent clauses");
    if (rule.clause_for(key.text)) fail_at(key.line, key.column, "duplicate clause for " + key.text);
    rule.clauses.push_back(read_clause(form, rule));
    return;
  }
  if (key.is_symbol(":constraints") || key.is_symbol(":constraint")) {
    for (const auto& x : rest()) {
      SExpr c = as_constraint(x);
      check_expr(c, Scope{&rule, false, false});
      rule.constraints.push_back(std::move(c));
    }
  } else if (key.is_symbol(":element-constraints") || key.is_symbol(":element-constraint")) {
    if (rule.kind != RuleKind::set)
      fail_at(key.line, key.column, ":element-constraints outside a set rule");
    for (const auto& x : rest()) {
      SExpr c = as_constraint(x);
      check_expr(c, Scope{&rule, false, false});
      rule.element_constraints.push_back(std::move(c));
    }
  } else if (key.is_symbol(":additional-slots")) {
    for (const auto& s : rest()) {
      if (!s.is_list() || s.items.size() != 2 || !s.items[0].is_symbol())
        fail_at(s.line, s.column, "slot must be (name expression)");
      const std::string& name = s.items[0].text;
      if (std::any_of(rule.slots.begin(), rule.slots.end(),
                      [&](const SlotSpec& x) { return iequals(x.name, name); }))
        fail_at(s.line, s.column, "duplicate slot name " + name);
      check_expr(s.items[1], Scope{&rule, false, true});
      rule.slots.push_back({name, s.items[1]});
    }
  } else if (key.is_symbol(":null")) {
    for (const auto& n : rest()) {
      if (!n.is_symbol()) fail_at(n.line, n.column, ":null expects constituent names");
      rule.nullable.push_back(n.text);
    }
  } else if (key.is_symbol(":largest")) {
    const auto args = rest();
    rule.largest = args.empty() || !args.front().is_symbol("nil");
  } else {
    fail_at(key.line, key.column, "unknown body keyword " + key.text);
  }
}

Rule read_rule(Reader& rd) {
  const Token lhs = rd.next();
  if (lhs.kind != Token::Kind::atom) fail_at(lhs.line, lhs.column, "expected rule name");
  const Token arrow = rd.next();
  if (arrow.kind != Token::Kind::atom || arrow.text != "->")
    fail_at(arrow.line, arrow.column, "expected '->' after " + lhs.text);

  std::vector<SExpr> items;
  while (rd.peek().kind != Token::Kind::semi) {
    if (rd.at_end()) fail_at(lhs.line, lhs.column, "rule " + lhs.text + " is missing ';'");
    items.push_back(rd.expr());
  }
  rd.next();

  Rule rule;
  rule.lhs = lhs.text;
  rule.line = lhs.line;
  std::size_t k = 0;
  if (!items.empty() && items[0].is_symbol("set")) {
    rule.kind = RuleKind::set;
    if (items.size() < 2 || !items[1].is_list() || items[1].items.size() != 1 ||
        !items[1].items[0].is_symbol())
      fail_at(items[0].line, items[0].column, "set rule needs exactly one element type");
    rule.element_type = items[1].items[0].text;
    k = 2;
  } else {
    while (k < items.size() && items[k].is_symbol()) rule.rhs.push_back(items[k++].text);
    if (rule.rhs.empty()) fail_at(lhs.line, lhs.column, "rule " + lhs.text + " has no constituents");
  }
  for (; k < items.size(); ++k) {
    if (!items[k].is_list())
      fail_at(items[k].line, items[k].column, "unexpected symbol " + items[k].text + " in body");
    read_body_form(items[k], rule);
  }
  return rule;
}

bool is_type_known(const Grammar& g, std::string_view type) {
  return kind_from_name(type).has_value() || g.defines(type);
}

std::vector<std::string> referenced_names(const SExpr& e, const Rule& rule) {
  std::vector<std::string> out;
  if (e.is_symbol()) {
    for (const auto& n : rule.rhs)
      if (iequals(n, e.text)) out.push_back(n);
    return out;
  }
  for (std::size_t k = e.is_list() && !e.items.empty() ? 1 : 0; k < e.items.size(); ++k) {
    auto sub = referenced_names(e.items[k], rule);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

void check_arity(const SExpr& e, const Rule& rule, std::vector<Diagnostic>& out) {
  if (!e.is_list() || e.items.empty()) return;
  if (const auto* v = find_vocabulary(e.head())) {
    int positional = 0;
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      if (e.items[k].is_keyword()) {
        ++k;
        continue;
      }
      ++positional;
    }
    if (positional < v->min_args || (v->max_args >= 0 && positional > v->max_args))
      out.push_back({rule.lhs, "wrong number of arguments to " + std::string(v->name) + " in " + e.str()});
  }
  for (std::size_t k = 1; k < e.items.size(); ++k) check_arity(e.items[k], rule, out);
}

void print_list(std::ostringstream& os, std::string_view keyword, const std::vector<SExpr>& xs) {
  os << "\n  (" << keyword;
  for (const auto& x : xs) os << ' ' << x.str();
  os << ')';
}

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  Reader rd(lex(text));
  std::vector<SExpr> out;
  while (!rd.at_end()) out.push_back(rd.expr());
  return out;
}

Grammar parse_grammar(std::string_view text) {
  Reader rd(lex(text));
  Grammar g;
  while (!rd.at_end()) g.rules.push_back(read_rule(rd));
  return g;
}

Grammar load_grammar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open grammar file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_grammar(buf.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<Diagnostic> validate_grammar(const Grammar& g) {
  std::vector<Diagnostic> out;
  for (const auto& rule : g.rules) {
    auto diag = [&](std::string reason) { out.push_back({rule.lhs, std::move(reason)}); };

    if (rule.kind == RuleKind::set) {
      if (!is_type_known(g, rule.element_type))
        diag("unresolved element type " + rule.element_type);
      if (iequals(rule.element_type, rule.lhs)) diag("left recursion: " + rule.lhs + " is its own element");
    } else {
      if (rule.largest) diag(":largest is only meaningful on set rules");
      std::set<std::string> seen;
      for (const auto& n : rule.rhs) {
        if (!seen.insert(fold(n)).second) diag("duplicate constituent " + n);
        const std::string type = rule.constituent_type(n);
        if (!is_type_known(g, type)) diag("unresolved constituent type " + type);
        if (iequals(type, rule.lhs)) diag("left recursion: " + rule.lhs + " is its own constituent");
      }
      const auto order = rule.solving_order();
      for (std::size_t k = 0; k < rule.clauses.size(); ++k) {
        const auto& c = rule.clauses[k];
        auto bound_before = [&](const std::string& name, std::size_t limit) {
          for (std::size_t m = 0; m < limit; ++m)
            if (iequals(order[m], name)) return true;
          return false;
        };
        if (c.form == ContextForm::anchor && !bound_before(c.context.text, k))
          diag("context anchor " + c.context.text + " is not bound before " + c.name);
        if (c.form == ContextForm::relation)
          for (const auto& n : referenced_names(c.context, rule))
            if (!bound_before(n, k)) diag("context of " + c.name + " refers to unbound " + n);
        for (const auto& e : c.constraints)
          for (const auto& n : referenced_names(e, rule))
            if (!bound_before(n, k + 1)) diag("constraint on " + c.name + " refers to unbound " + n);
      }
    }
    for (const auto& n : rule.nullable) {
      const bool declared = std::any_of(rule.rhs.begin(), rule.rhs.end(),
                                        [&](const auto& r) { return iequals(r, n); });
      if (!declared) diag(":null names undeclared constituent " + n);
    }
    for (const auto& e : rule.constraints) check_arity(e, rule, out);
    for (const auto& e : rule.element_constraints) check_arity(e, rule, out);
    for (const auto& c : rule.clauses) {
      if (c.form == ContextForm::relation) check_arity(c.context, rule, out);
      for (const auto& e : c.constraints) check_arity(e, rule, out);
    }
    for (const auto& s : rule.slots) check_arity(s.expr, rule, out);
  }
  return out;
}

std::map<std::string, RuleInfo> rule_metadata(const Grammar& g) {
  std::map<std::string, RuleInfo> out;
  for (const auto& sym : g.symbols()) {
    RuleInfo info;
    info.lhs = sym;
    info.alternatives = g.alternatives(sym);
    info.primitive_only = true;
    for (std::size_t idx : info.alternatives) {
      const Rule& r = g.rules[idx];
      for (const auto& s : r.slots)
        if (std::none_of(info.slots.begin(), info.slots.end(),
                         [&](const auto& x) { return iequals(x, s.name); }))
          info.slots.push_back(s.name);
      if (r.kind == RuleKind::set) {
        info.primitive_only = info.primitive_only && kind_from_name(r.element_type).has_value();
      } else {
        for (const auto& n : r.rhs)
          info.primitive_only = info.primitive_only && kind_from_name(r.constituent_type(n)).has_value();
      }
    }
    out.emplace(fold(sym), std::move(info));
  }
  return out;
}

std::string pretty_print(const Rule& r) {
  std::ostringstream os;
  os << r.lhs << " ->";
  if (r.kind == RuleKind::set) {
    os << " Set (" << r.element_type << ")";
  } else {
    for (const auto& n : r.rhs) os << ' ' << n;
  }
  if (!r.nullable.empty()) {
    os << "\n  (:null";
    for (const auto& n : r.nullable) os << ' ' << n;
    os << ')';
  }
  if (!r.slots.empty()) {
    os << "\n  (:additional-slots";
    for (const auto& s : r.slots) os << " (" << s.name << ' ' << s.expr.str() << ')';
    os << ')';
  }
  for (const auto& c : r.clauses) {
    os << "\n  (" << c.name;
    if (c.form != ContextForm::none) os << ' ' << c.context.str();
    if (!c.constraints.empty()) {
      os << " :constraints";
      for (const auto& e : c.constraints) os << ' ' << e.str();
    }
    os << ')';
  }
  if (!r.element_constraints.empty()) print_list(os, ":element-constraints", r.element_constraints);
  if (!r.constraints.empty()) print_list(os, ":constraints", r.constraints);
  if (r.largest) os << "\n  (:largest t)";
  os << ";\n";
  return os.str();
}

std::string pretty_print(const Grammar& g) {
  std::string out;
  for (const auto& r : g.rules) {
    out += pretty_print(r);
    out += '\n';
  }
  return out;
}

}  // namespace diagraph
