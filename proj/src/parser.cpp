#include "diagraph/parser.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "diagraph/error.hpp"
#include "diagraph/names.hpp"
#include "diagraph/vocabulary.hpp"

namespace diagraph {

namespace {

std::string join_tags(std::span<const Tag> tags) {
  std::string out = "{";
  for (std::size_t k = 0; k < tags.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(tags[k]);
  }
  return out + "}";
}

bool is_zero_arg_ger(const SExpr& e) { return e.is_list() && e.items.size() == 1 && is_ger(e.head()); }

TaggedSet of_kind(const Scene& scene, const TaggedSet& context, PrimitiveKind kind) {
  std::vector<Tag> out;
  for (Tag t : context)
    if (scene.kind(t) == ObjectKind::primitive && scene.primitive(t).kind() == kind) out.push_back(t);
  return TaggedSet::adopt_sorted(std::move(out));
}

bool shares_object(const SpatialIndex& index, Tag a, Tag b) {
  std::vector<Tag> da(index.descendants_of(a).begin(), index.descendants_of(a).end());
  std::vector<Tag> db(index.descendants_of(b).begin(), index.descendants_of(b).end());
  da.insert(std::lower_bound(da.begin(), da.end(), a), a);
  db.insert(std::lower_bound(db.begin(), db.end(), b), b);
  return intersects(da, db);
}

Rect union_of(const Scene& scene, std::span<const Tag> tags) {
  Rect r;
  for (Tag t : tags) r.expand(scene.bbox(t));
  return r;
}

const char* kind_label(TraceKind k) {
  switch (k) {
    case TraceKind::enter: return "enter";
    case TraceKind::exit: return "exit";
    case TraceKind::clause: return "clause";
    case TraceKind::group: return "group";
    case TraceKind::reject: return "reject";
    case TraceKind::nullbind: return "null";
    case TraceKind::cached: return "cached";
  }
  return "?";
}

}  // namespace

std::string TraceEvent::str() const {
  std::ostringstream os;
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << kind_label(kind) << ' ' << rule;
  if (!name.empty()) os << '.' << name;
  os << " context=" << context.size();
  if (kind == TraceKind::clause || kind == TraceKind::exit || kind == TraceKind::group ||
      kind == TraceKind::reject || kind == TraceKind::cached)
    os << " objects=" << join_tags(objects);
  if (!detail.empty()) os << " " << detail;
  return os.str();
}

Parser::Parser(const Grammar& grammar, Scene& scene, EngineConfig config, bool trace)
    : grammar_(grammar), scene_(scene), config_(config), env_(scene, config), trace_(trace) {
  env_.notes = &result_.notes;
}

void Parser::emit(TraceEvent ev) {
  if (!trace_) return;
  ev.depth = depth_;
  result_.trace.push_back(std::move(ev));
}

void Parser::count_tuple() {
  if (++result_.stats.tuples_examined > config_.max_tuples)
    throw Error("search space exceeded max_tuples = " + std::to_string(config_.max_tuples));
}

ParseResult Parser::parse(std::string_view start) {
  if (!grammar_.defines(start)) throw Error("unknown start symbol " + std::string(start));
  result_.start = std::string(start);
  if (scene_.primitive_count() > 0) {
    const std::size_t before = scene_.derived_count();
    result_.solutions = solve(start, scene_.base_objects());
    result_.stats.derived_created += scene_.derived_count() - before;
  }
  return result_;
}

std::vector<Tag> Parser::solve(std::string_view symbol, const TaggedSet& context) {
  if (auto kind = kind_from_name(symbol)) return of_kind(scene_, context, *kind).vec();
  const auto alternatives = grammar_.alternatives(symbol);
  if (alternatives.empty()) throw Error("no rule for " + std::string(symbol));

  auto key = std::make_pair(fold(symbol), context.vec());
  if (auto it = cache_.find(key); it != cache_.end()) {
    emit({TraceKind::cached, 0, std::string(symbol), {}, context, it->second, {}});
    return it->second;
  }
  if (std::find(active_.begin(), active_.end(), key) != active_.end()) return {};
  active_.push_back(key);

  emit({TraceKind::enter, 0, std::string(symbol), {}, context, {}, {}});
  ++depth_;
  std::vector<Tag> out;
  for (std::size_t idx : alternatives) {
    auto part = grammar_.rules[idx].kind == RuleKind::set ? solve_set_rule(idx, context)
                                                          : solve_rule(idx, context);
    out.insert(out.end(), part.begin(), part.end());
  }
  out = dedupe(scene_, out);
  --depth_;
  emit({TraceKind::exit, 0, std::string(symbol), {}, context, out, {}});

  active_.pop_back();
  cache_.emplace(std::move(key), out);
  return out;
}

std::vector<Tag> Parser::solve_rule(std::size_t rule_index, const TaggedSet& context) {
  const Rule& rule = grammar_.rules[rule_index];
  Bindings bindings;
  std::vector<Tag> out;
  bind_from(rule_index, rule.solving_order(), 0, context, bindings, out);
  return out;
}

void Parser::bind_from(std::size_t rule_index, const std::vector<std::string>& order, std::size_t k,
                       const TaggedSet& context, Bindings& bindings, std::vector<Tag>& out) {
  const Rule& rule = grammar_.rules[rule_index];
  if (k == order.size()) {
    for (const auto& c : rule.constraints) {
      if (!eval_constraint(c, bindings, env_)) {
        std::vector<Tag> tuple;
        for (const auto& n : rule.rhs) {
          const Value v = bindings.value(n);
          if (const auto* r = std::get_if<ObjectRef>(&v)) tuple.push_back(r->tag);
        }
        emit({TraceKind::reject, 0, rule.lhs, {}, context, tuple, c.str()});
        return;
      }
    }
    out.push_back(make_derived(rule_index, bindings));
    return;
  }

  const std::string& name = order[k];
  const ConstituentSpec* spec = rule.clause_for(name);
  TaggedSet sub = context;
  if (spec && spec->form == ContextForm::relation)
    sub = filter_context(context, spec->context, bindings, env_, &result_.stats.intersection_visits);
  ++result_.stats.monotonicity_checks;
  if (!is_subset(sub, context)) ++result_.stats.monotonicity_violations;

  std::vector<Tag> space = solve(rule.constituent_type(name), sub);

  if (spec && spec->form == ContextForm::anchor) {
    const Value anchor = bindings.value(spec->context.text);
    if (const auto* ref = std::get_if<ObjectRef>(&anchor)) {
      std::erase_if(space, [&](Tag s) { return !shares_object(scene_.index(), s, ref->tag); });
    }
  }

  std::vector<Tag> kept;
  for (Tag s : space) {
    count_tuple();
    bindings.bind(name, s);
    bool ok = true;
    if (spec) {
      for (const auto& c : spec->constraints) {
        if (!eval_constraint(c, bindings, env_)) {
          emit({TraceKind::reject, 0, rule.lhs, name, sub, {s}, c.str()});
          ok = false;
          break;
        }
      }
    }
    if (ok) kept.push_back(s);
  }
  bindings.unbind(name);
  emit({TraceKind::clause, 0, rule.lhs, name, sub, kept, {}});

  if (kept.empty()) {
    if (!rule.is_nullable(name)) return;
    emit({TraceKind::nullbind, 0, rule.lhs, name, sub, {}, {}});
    bindings.bind(name, std::nullopt);
    bind_from(rule_index, order, k + 1, context, bindings, out);
    bindings.unbind(name);
    return;
  }
  for (Tag s : kept) {
    bindings.bind(name, s);
    bind_from(rule_index, order, k + 1, context, bindings, out);
  }
  bindings.unbind(name);
}

Tag Parser::make_derived(std::size_t rule_index, const Bindings& bindings) {
  const Rule& rule = grammar_.rules[rule_index];
  std::vector<Tag> key;
  DerivedObject obj;
  obj.type = rule.lhs;
  obj.rule_index = rule_index;
  for (const auto& n : rule.rhs) {
    const Value v = bindings.value(n);
    const auto* ref = std::get_if<ObjectRef>(&v);
    obj.constituents.push_back({n, ref ? std::optional<Tag>(ref->tag) : std::nullopt});
    key.push_back(ref ? ref->tag : 0);
    if (ref) obj.bbox.expand(scene_.bbox(ref->tag));
  }
  if (auto existing = scene_.find_derived(rule_index, key)) return *existing;
  for (const auto& s : rule.slots) {
    try {
      obj.slots.emplace_back(s.name, eval_slot(s.expr, bindings, env_));
    } catch (const TypeMismatch& e) {
      throw Error("slot " + s.name + " of " + rule.lhs + ": " + e.what());
    }
  }
  return scene_.add_derived(std::move(obj), key);
}

Tag Parser::make_set(std::size_t rule_index, const TaggedSet& group) {
  const Rule& rule = grammar_.rules[rule_index];
  if (auto existing = scene_.find_derived(rule_index, group.vec())) return *existing;
  DerivedObject obj;
  obj.type = rule.lhs;
  obj.rule_index = rule_index;
  obj.is_set = true;
  obj.elements = group.vec();
  obj.bbox = union_of(scene_, group.tags());
  if (!rule.slots.empty()) {
    PendingSet pending{obj.elements, obj.bbox};
    Bindings b;
    b.bind_pending(rule.lhs, &pending);
    for (const auto& s : rule.slots) obj.slots.emplace_back(s.name, eval_slot(s.expr, b, env_));
  }
  return scene_.add_derived(std::move(obj), group.vec());
}

std::vector<Tag> Parser::solve_set_rule(std::size_t rule_index, const TaggedSet& context) {
  const Rule& rule = grammar_.rules[rule_index];
  TaggedSet candidates = kind_from_name(rule.element_type)
                             ? of_kind(scene_, context, *kind_from_name(rule.element_type))
                             : TaggedSet(solve(rule.element_type, context));

  std::vector<Tag> elements;
  Bindings eb;
  for (Tag e : candidates) {
    count_tuple();
    eb.bind(rule.element_type, e);
    bool ok = true;
    for (const auto& c : rule.element_constraints) {
      if (!eval_constraint(c, eb, env_)) {
        ok = false;
        break;
      }
    }
    if (ok) elements.push_back(e);
  }
  const TaggedSet members = TaggedSet::adopt_sorted(std::move(elements));
  if (members.empty()) return {};

  std::vector<std::vector<TaggedSet>> partitions;
  std::vector<const SExpr*> checks;
  for (const auto& c : rule.constraints) {
    if (is_zero_arg_ger(c))
      partitions.push_back(ger_partition(members, c.head(), env_));
    else
      checks.push_back(&c);
  }
  std::vector<TaggedSet> groups =
      partitions.empty() ? std::vector<TaggedSet>{members} : refine_partitions(members, partitions);

  std::vector<TaggedSet> survivors;
  for (const auto& g : groups) {
    emit({TraceKind::group, 0, rule.lhs, {}, context, g.vec(), {}});
    PendingSet pending{g.vec(), union_of(scene_, g.tags())};
    Bindings b;
    b.bind_pending(rule.lhs, &pending);
    bool ok = true;
    for (const SExpr* c : checks) {
      count_tuple();
      if (!eval_constraint(*c, b, env_)) {
        emit({TraceKind::reject, 0, rule.lhs, {}, context, g.vec(), c->str()});
        ok = false;
        break;
      }
    }
    if (ok) survivors.push_back(g);
  }
  if (rule.largest && survivors.size() > 1) {
    // Groups arrive ordered by smallest tag, so the first maximum wins ties.
    auto best = std::max_element(survivors.begin(), survivors.end(),
                                 [](const TaggedSet& a, const TaggedSet& b) { return a.size() < b.size(); });
    survivors = {*best};
  }
  std::vector<Tag> out;
  for (const auto& g : survivors) out.push_back(make_set(rule_index, g));
  return out;
}

ParseResult parse(const Grammar& grammar, Scene& scene, std::string_view start,
                  const EngineConfig& config, bool trace) {
  Parser p(grammar, scene, config, trace);
  return p.parse(start);
}

std::vector<Tag> dedupe(const Scene& scene, const std::vector<Tag>& solutions) {
  std::set<std::pair<std::string, std::vector<Tag>>> seen;
  std::vector<Tag> out;
  for (Tag t : solutions) {
    std::vector<Tag> kids;
    std::string type = scene.type_name(t);
    if (scene.kind(t) == ObjectKind::derived)
      kids = scene.derived(t).children();
    else
      kids = {t};
    std::sort(kids.begin(), kids.end());
    if (seen.emplace(fold(type), std::move(kids)).second) out.push_back(t);
  }
  return out;
}

std::vector<std::string> replay(const Grammar& grammar, const Scene& scene, Tag tag,
                                const EngineConfig& config) {
  std::vector<std::string> failures;
  if (scene.kind(tag) != ObjectKind::derived) return failures;
  const DerivedObject& d = scene.derived(tag);
  const Rule& rule = grammar.rules.at(d.rule_index);
  Environment env(scene, config);

  if (d.is_set) {
    for (Tag e : d.elements) {
      Bindings b;
      b.bind(rule.element_type, e);
      for (const auto& c : rule.element_constraints)
        if (!eval_constraint(c, b, env)) failures.push_back(rule.lhs + ": " + c.str());
    }
    PendingSet pending{d.elements, d.bbox};
    Bindings b;
    b.bind_pending(rule.lhs, &pending);
    for (const auto& c : rule.constraints)
      if (!is_zero_arg_ger(c) && !eval_constraint(c, b, env)) failures.push_back(rule.lhs + ": " + c.str());
  } else {
    Bindings b;
    for (const auto& c : d.constituents) b.bind(c.name, c.value);
    for (const auto& spec : rule.clauses)
      for (const auto& c : spec.constraints)
        if (!eval_constraint(c, b, env)) failures.push_back(rule.lhs + ": " + c.str());
    for (const auto& c : rule.constraints)
      if (!eval_constraint(c, b, env)) failures.push_back(rule.lhs + ": " + c.str());
  }
  for (Tag k : d.children()) {
    auto sub = replay(grammar, scene, k, config);
    failures.insert(failures.end(), sub.begin(), sub.end());
  }
  return failures;
}

}  // namespace diagraph
