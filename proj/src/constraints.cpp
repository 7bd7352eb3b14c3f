#include "diagraph/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "diagraph/error.hpp"
#include "diagraph/names.hpp"
#include "diagraph/union_find.hpp"
#include "diagraph/vocabulary.hpp"

namespace diagraph {

void Bindings::bind(std::string name, std::optional<Tag> tag) {
  for (auto& e : entries_)
    if (iequals(e.name, name)) {
      e.tag = tag;
      return;
    }
  entries_.push_back({std::move(name), tag});
}

void Bindings::bind_pending(std::string name, const PendingSet* set) {
  pending_name_ = std::move(name);
  pending_ = set;
}

void Bindings::unbind(std::string_view name) {
  std::erase_if(entries_, [&](const Entry& e) { return iequals(e.name, name); });
  if (pending_ && iequals(pending_name_, name)) pending_ = nullptr;
}

bool Bindings::has(std::string_view name) const {
  if (pending_ && iequals(pending_name_, name)) return true;
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return iequals(e.name, name); });
}

bool Bindings::is_null(std::string_view name) const {
  for (const auto& e : entries_)
    if (iequals(e.name, name)) return !e.tag.has_value();
  return false;
}

Value Bindings::value(std::string_view name) const {
  if (pending_ && iequals(pending_name_, name)) return ObjectRef{0};
  for (const auto& e : entries_)
    if (iequals(e.name, name)) return e.tag ? Value{ObjectRef{*e.tag}} : Value{};
  throw Error("unbound name " + std::string(name));
}

Environment::Environment(const Scene& s, EngineConfig cfg)
    : scene(s), config(cfg), thresholds(resolve_thresholds(s.lengths(), cfg)) {}

namespace {

struct Args {
  std::vector<const SExpr*> positional;
  bool strip = false;
};

Args split_args(const SExpr& e) {
  Args a;
  for (std::size_t k = 1; k < e.items.size(); ++k) {
    const SExpr& x = e.items[k];
    if (x.is_keyword()) {
      const bool on = k + 1 < e.items.size() && !e.items[k + 1].is_symbol("nil");
      if (x.is_symbol(":strip")) a.strip = on;
      ++k;
      continue;
    }
    a.positional.push_back(&x);
  }
  return a;
}

bool truthy(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  return !is_null(v);
}

double as_number(const Value& v, std::string_view what) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw TypeMismatch(std::string(what) + " expects a number, got " + to_string(v));
}

Tag as_object(const Value& v, std::string_view what) {
  if (const auto* r = std::get_if<ObjectRef>(&v)) return r->tag;
  throw TypeMismatch(std::string(what) + " expects an object, got " + to_string(v));
}

class Evaluator {
 public:
  Evaluator(const Bindings& b, const Environment& env, bool slot_mode)
      : b_(b), env_(env), scene_(env.scene), slot_mode_(slot_mode) {}

  Value eval(const SExpr& e) const {
    if (e.kind == SExpr::Kind::number) return e.number;
    if (e.is_symbol()) return symbol(e);
    const std::string_view head = e.head();
    if (head.empty()) throw Error("malformed expression " + e.str());
    if (slot_mode_ && !find_vocabulary(head) && b_.has(head)) return b_.value(head);
    const auto* voc = find_vocabulary(head);
    if (!voc) throw Error("unknown predicate '" + std::string(head) + "'");
    const Args args = split_args(e);
    switch (voc->kind) {
      case VocabularyKind::logical: return logical(head, args);
      case VocabularyKind::comparison: return compare(head, args);
      case VocabularyKind::predicate: return predicate(head, arg(args, 0));
      case VocabularyKind::function: return function(head, args);
      case VocabularyKind::relation: return relation(head, arg(args, 0), arg(args, 1), args.strip);
      case VocabularyKind::ger:
        if (args.positional.size() != 2)
          throw TypeMismatch(std::string(head) + " partitions a set; it has no value here");
        return ger_related(as_object(arg(args, 0), head), as_object(arg(args, 1), head), head, env_);
    }
    throw Error("unhandled head " + std::string(head));
  }

  Rect bbox(const Value& v) const {
    if (const auto* p = std::get_if<Point>(&v)) return Rect::around(*p);
    const Tag t = as_object(v, "bbox");
    if (t == 0) return pending().bbox;
    return scene_.bbox(t);
  }

  CellSet cells(const Value& v) const {
    const int fine = scene_.index().finest_level();
    if (const auto* p = std::get_if<Point>(&v)) return point_cells(*p, fine);
    const Tag t = as_object(v, "touch");
    if (t != 0) return scene_.index().cells_of(t);
    CellSet out;
    for (Tag e : pending().elements) {
      const auto& c = scene_.index().cells_of(e);
      out.insert(out.end(), c.begin(), c.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const PendingSet& pending() const {
    if (!b_.pending()) throw Error("no pending set in scope");
    return *b_.pending();
  }

  Value arg(const Args& a, std::size_t k) const {
    if (k >= a.positional.size()) throw Error("missing argument");
    return eval(*a.positional[k]);
  }

  Value symbol(const SExpr& e) const {
    if (e.is_symbol("t")) return true;
    if (e.is_symbol("nil")) return false;
    if (e.is_symbol("*tiny*")) return env_.thresholds.tiny;
    if (e.is_symbol("*very-long*")) return env_.thresholds.very_long;
    if (e.is_symbol("self") && slot_mode_) throw TypeMismatch("self is only valid as an accessor argument");
    return b_.value(e.text);
  }

  Value logical(std::string_view head, const Args& a) const {
    if (iequals(head, "or")) {
      for (const auto* x : a.positional) {
        Value v = eval(*x);
        if (truthy(v)) return v;
      }
      return Value{};
    }
    if (iequals(head, "and")) {
      for (const auto* x : a.positional)
        if (!truthy(eval(*x))) return false;
      return true;
    }
    return !truthy(arg(a, 0));
  }

  Value compare(std::string_view head, const Args& a) const {
    const Value x = arg(a, 0), y = arg(a, 1);
    if (head == "=") {
      if (std::holds_alternative<double>(x) && std::holds_alternative<double>(y))
        return std::get<double>(x) == std::get<double>(y);
      return x == y;
    }
    const double l = as_number(x, head), r = as_number(y, head);
    if (head == "<") return l < r;
    if (head == ">") return l > r;
    if (head == "<=") return l <= r;
    return l >= r;
  }

  // Primitive that stands for an object: itself, or the single child of a derived wrapper.
  const Primitive* sole_primitive(Tag t) const {
    while (t != 0) {
      switch (scene_.kind(t)) {
        case ObjectKind::primitive: return &scene_.primitive(t);
        case ObjectKind::endpoint: return nullptr;
        case ObjectKind::derived: {
          const auto kids = scene_.derived(t).children();
          if (kids.size() != 1) return nullptr;
          t = kids.front();
        }
      }
    }
    return nullptr;
  }

  double length_of(Tag t) const {
    if (t != 0) return object_length(t, env_);
    double sum = 0.0;
    for (Tag e : pending().elements) sum += object_length(e, env_);
    return sum;
  }

  Value predicate(std::string_view head, const Value& v) const {
    const Tag t = as_object(v, head);
    const double tol = env_.thresholds.angle_tol_deg;
    const Primitive* p = t ? sole_primitive(t) : nullptr;
    const auto& sz = env_.thresholds.size;

    if (iequals(head, "long") || iequals(head, "short") || iequals(head, "small")) {
      if (p) {
        const SizeClass cls = iequals(head, "long")    ? SizeClass::long_
                              : iequals(head, "short") ? SizeClass::short_
                                                       : SizeClass::small;
        return size_predicate(*p, sz, cls);
      }
      const Rect r = bbox(v);
      const double extent = std::max(r.width(), r.height());
      if (iequals(head, "small")) return extent <= sz.small_max;
      double m = extent;
      try {
        m = length_of(t);
      } catch (const TypeMismatch&) {
      }
      return iequals(head, "long") ? m >= sz.long_min : m <= sz.short_max;
    }
    if (!p) throw TypeMismatch(std::string(head) + " needs a primitive, got " + describe(t));
    if (iequals(head, "horizp")) return horizp(*p, tol);
    if (iequals(head, "vertp")) return vertp(*p, tol);
    if (iequals(head, "rectanglep")) return rectanglep(*p, tol);
    return numeric_textp(*p);
  }

  std::string describe(Tag t) const {
    if (t == 0) return "a pending set";
    return scene_.type_name(t) + " #" + std::to_string(t);
  }

  Value endpoint_of(std::string_view head, const Value& v) const {
    if (const auto* pt = std::get_if<Point>(&v)) return *pt;
    Tag t = as_object(v, head);
    while (t != 0) {
      switch (scene_.kind(t)) {
        case ObjectKind::endpoint: return scene_.endpoint(t).point;
        case ObjectKind::primitive: {
          const auto& p = scene_.primitive(t);
          if (!p.as<Line>()) throw TypeMismatch(std::string(head) + " needs a line, got " + describe(t));
          return iequals(head, "left-endpoint") ? left_endpoint(p) : bottom_endpoint(p);
        }
        case ObjectKind::derived: {
          const auto& d = scene_.derived(t);
          if (const Value* s = d.slot(head)) return *s;
          const auto kids = d.children();
          if (kids.size() != 1) throw TypeMismatch(std::string(head) + " undefined for " + describe(t));
          t = kids.front();
        }
      }
    }
    throw TypeMismatch(std::string(head) + " undefined for a pending set");
  }

  Value function(std::string_view head, const Args& a) const {
    if (iequals(head, "distance")) {
      const Value x = arg(a, 0), y = arg(a, 1);
      if (is_null(x) || is_null(y)) throw TypeMismatch("distance of null");
      const auto* px = std::get_if<Point>(&x);
      const auto* py = std::get_if<Point>(&y);
      if (px && py) return distance(*px, *py);
      return rect_distance(bbox(x), bbox(y));
    }
    if (iequals(head, "left-endpoint") || iequals(head, "bottom-endpoint"))
      return endpoint_of(head, arg(a, 0));
    const Tag t = as_object(arg(a, 0), head);
    if (iequals(head, "a-length")) return length_of(t);
    // size / number-of: cardinality of a set object
    if (t == 0) return static_cast<double>(pending().elements.size());
    if (scene_.kind(t) != ObjectKind::derived)
      throw TypeMismatch(std::string(head) + " needs a set, got " + describe(t));
    return static_cast<double>(scene_.derived(t).children().size());
  }

  Value relation(std::string_view head, const Value& x, const Value& y, bool strip) const {
    if (is_null(x) || is_null(y)) throw TypeMismatch(std::string(head) + " of null");
    if (iequals(head, "touch")) {
      if (env_.config.touch_strict) return rect_distance(bbox(x), bbox(y)) <= env_.thresholds.tiny;
      const CellSet cx = cells(x), cy = cells(y);
      auto i = cx.begin();
      auto j = cy.begin();
      while (i != cx.end() && j != cy.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i;
        else ++j;
      }
      return false;
    }
    const Rect a = bbox(x), b = bbox(y);
    if (iequals(head, "contain")) return a.strictly_contains(b);
    std::string_view dir = head.substr(0, head.find('-'));
    bool beyond = false, overlap = false;
    if (iequals(dir, "above") || iequals(dir, "below")) {
      beyond = iequals(dir, "above") ? a.min.y >= b.max.y : a.max.y <= b.min.y;
      overlap = a.min.x <= b.max.x && a.max.x >= b.min.x;
    } else {
      beyond = iequals(dir, "right") ? a.min.x >= b.max.x : a.max.x <= b.min.x;
      overlap = a.min.y <= b.max.y && a.max.y >= b.min.y;
    }
    return beyond && (!strip || overlap);
  }

  const Bindings& b_;
  const Environment& env_;
  const Scene& scene_;
  bool slot_mode_;
};

std::optional<Direction> direction_of(std::string_view head) {
  const std::string_view d = head.substr(0, head.find('-'));
  if (iequals(d, "left")) return Direction::left;
  if (iequals(d, "right")) return Direction::right;
  if (iequals(d, "above")) return Direction::above;
  if (iequals(d, "below")) return Direction::below;
  return std::nullopt;
}

std::vector<Point> link_points(Tag t, const Scene& scene) {
  switch (scene.kind(t)) {
    case ObjectKind::endpoint: return {};
    case ObjectKind::primitive: {
      const auto& p = scene.primitive(t);
      if (const auto* l = p.as<Line>()) return {l->p1, l->p2};
      if (const auto* c = p.as<Bezier>())
        return {c->segments.front().control.front(), c->segments.back().control.back()};
      return {};
    }
    case ObjectKind::derived: {
      std::vector<Point> out;
      for (Tag k : scene.derived(t).children()) {
        auto sub = link_points(k, scene);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
  }
  return {};
}

std::string type_key(Tag t, const Scene& scene) {
  while (scene.kind(t) == ObjectKind::derived) {
    const auto kids = scene.derived(t).children();
    if (kids.size() != 1) return scene.type_name(t);
    t = kids.front();
  }
  return scene.type_name(t);
}

int align_cell(double coord, const SpatialIndex& index, int level) {
  const int n = index.grid_size(level);
  return std::clamp(static_cast<int>(std::floor(coord / index.cell_size(level))), 0, n - 1);
}

std::vector<TaggedSet> components(const std::vector<Tag>& tags, UnionFind& uf) {
  std::vector<std::vector<Tag>> groups(tags.size());
  for (std::size_t k = 0; k < tags.size(); ++k) groups[uf.find(k)].push_back(tags[k]);
  std::vector<TaggedSet> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(TaggedSet::adopt_sorted(std::move(g)));
  return out;
}

}  // namespace

Value eval_expr(const SExpr& expr, const Bindings& b, const Environment& env) {
  return Evaluator(b, env, false).eval(expr);
}

Value eval_slot(const SExpr& expr, const Bindings& b, const Environment& env) {
  return Evaluator(b, env, true).eval(expr);
}

bool mentions_null(const SExpr& expr, const Bindings& b) {
  if (expr.is_symbol()) return b.is_null(expr.text);
  return std::any_of(expr.items.begin(), expr.items.end(),
                     [&](const SExpr& x) { return mentions_null(x, b); });
}

bool eval_constraint(const SExpr& expr, const Bindings& b, const Environment& env) {
  if (mentions_null(expr, b)) return true;
  try {
    return truthy(eval_expr(expr, b, env));
  } catch (const TypeMismatch& e) {
    if (env.notes) env.notes->push_back(expr.str() + ": " + e.what());
    return false;
  }
}

double object_length(Tag tag, const Environment& env) {
  const Scene& scene = env.scene;
  switch (scene.kind(tag)) {
    case ObjectKind::endpoint: throw TypeMismatch("no arc length for an endpoint");
    case ObjectKind::primitive:
      try {
        return a_length(scene.primitive(tag));
      } catch (const Error& e) {
        throw TypeMismatch(e.what());
      }
    case ObjectKind::derived: {
      double sum = 0.0;
      for (Tag k : scene.derived(tag).children()) sum += object_length(k, env);
      return sum;
    }
  }
  return 0.0;
}

bool ger_related(Tag a, Tag b, std::string_view relation, const Environment& env) {
  const Scene& scene = env.scene;
  const double tiny = env.thresholds.tiny;
  if (a == b) return true;
  if (iequals(relation, "near")) return rect_distance(scene.bbox(a), scene.bbox(b)) <= tiny;
  if (iequals(relation, "connected")) {
    for (const Point& p : link_points(a, scene))
      for (const Point& q : link_points(b, scene))
        if (distance(p, q) <= tiny) return true;
    return false;
  }
  if (iequals(relation, "same-type")) {
    const double tol = env.thresholds.lengths.h / 2.0;
    const Rect& ra = scene.bbox(a);
    const Rect& rb = scene.bbox(b);
    return type_key(a, scene) == type_key(b, scene) && std::abs(ra.width() - rb.width()) <= tol &&
           std::abs(ra.height() - rb.height()) <= tol;
  }
  const bool horiz = iequals(relation, "horiz-aligned");
  if (!horiz && !iequals(relation, "vert-aligned")) throw Error("unknown relation " + std::string(relation));
  const auto& index = scene.index();
  const int level = env.config.align_level;
  for (const Point& p : index.alignment_points(a))
    for (const Point& q : index.alignment_points(b))
      if (horiz ? align_cell(p.y, index, level) == align_cell(q.y, index, level)
                : align_cell(p.x, index, level) == align_cell(q.x, index, level))
        return true;
  return false;
}

std::vector<TaggedSet> ger_partition(const TaggedSet& objects, std::string_view relation,
                                     const Environment& env) {
  const Scene& scene = env.scene;
  if (iequals(relation, "horiz-aligned"))
    return scene.index().aligned_partition(objects, AlignAxis::horizontal, env.config.align_level);
  if (iequals(relation, "vert-aligned"))
    return scene.index().aligned_partition(objects, AlignAxis::vertical, env.config.align_level);

  const auto& tags = objects.vec();
  UnionFind uf(tags.size());
  const double tiny = env.thresholds.tiny;

  if (iequals(relation, "near")) {
    // Sweep on min.x; only pairs whose x-extents come within tiny can be near.
    std::vector<std::size_t> order(tags.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return scene.bbox(tags[x]).min.x < scene.bbox(tags[y]).min.x;
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Rect& a = scene.bbox(tags[order[i]]);
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const Rect& b = scene.bbox(tags[order[j]]);
        if (b.min.x > a.max.x + tiny) break;
        if (rect_distance(a, b) <= tiny) uf.join(order[i], order[j]);
      }
    }
  } else if (iequals(relation, "connected")) {
    struct End {
      Point p;
      std::size_t owner;
    };
    std::vector<End> ends;
    for (std::size_t k = 0; k < tags.size(); ++k)
      for (const Point& p : link_points(tags[k], scene)) ends.push_back({p, k});
    std::sort(ends.begin(), ends.end(), [](const End& x, const End& y) { return x.p.x < y.p.x; });
    for (std::size_t i = 0; i < ends.size(); ++i)
      for (std::size_t j = i + 1; j < ends.size() && ends[j].p.x - ends[i].p.x <= tiny; ++j)
        if (distance(ends[i].p, ends[j].p) <= tiny) uf.join(ends[i].owner, ends[j].owner);
  } else if (iequals(relation, "same-type")) {
    const double tol = env.thresholds.lengths.h / 2.0;
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (std::size_t k = 0; k < tags.size(); ++k) buckets[type_key(tags[k], scene)].push_back(k);
    for (auto& [key, members] : buckets) {
      std::sort(members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
        return scene.bbox(tags[x]).width() < scene.bbox(tags[y]).width();
      });
      for (std::size_t i = 0; i < members.size(); ++i) {
        const Rect& a = scene.bbox(tags[members[i]]);
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          const Rect& b = scene.bbox(tags[members[j]]);
          if (b.width() - a.width() > tol) break;
          if (std::abs(a.height() - b.height()) <= tol) uf.join(members[i], members[j]);
        }
      }
    }
  } else {
    throw Error("unknown relation " + std::string(relation));
  }
  return components(tags, uf);
}

std::vector<TaggedSet> refine_partitions(const TaggedSet& objects,
                                         const std::vector<std::vector<TaggedSet>>& partitions) {
  std::map<Tag, std::vector<std::size_t>> label;
  for (const auto& part : partitions)
    for (std::size_t g = 0; g < part.size(); ++g)
      for (Tag t : part[g]) label[t].push_back(g);
  std::map<std::vector<std::size_t>, std::size_t> slot;
  std::vector<std::vector<Tag>> groups;
  for (Tag t : objects) {
    auto [it, fresh] = slot.emplace(label[t], groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(t);
  }
  std::vector<TaggedSet> out;
  for (auto& g : groups) out.push_back(TaggedSet::adopt_sorted(std::move(g)));
  return out;
}

TaggedSet nearest_band(const TaggedSet& candidates, const Rect& anchor, Direction dir,
                       const Environment& env) {
  std::vector<std::pair<Tag, double>> side;
  double best = std::numeric_limits<double>::infinity();
  for (Tag t : candidates) {
    const Rect& b = env.scene.bbox(t);
    double gap = 0.0;
    switch (dir) {
      case Direction::below: gap = anchor.min.y - b.max.y; break;
      case Direction::above: gap = b.min.y - anchor.max.y; break;
      case Direction::left: gap = anchor.min.x - b.max.x; break;
      case Direction::right: gap = b.min.x - anchor.max.x; break;
    }
    if (gap < 0.0) continue;
    side.emplace_back(t, gap);
    best = std::min(best, gap);
  }
  std::vector<Tag> out;
  for (const auto& [t, gap] : side)
    if (gap <= best + env.thresholds.lengths.h) out.push_back(t);
  return TaggedSet::adopt_sorted(std::move(out));
}

TaggedSet filter_context(const TaggedSet& context, const SExpr& form, const Bindings& b,
                         const Environment& env, std::size_t* visits) {
  if (context.empty()) return {};
  const std::string_view head = form.head();
  const Args args = split_args(form);
  if (args.positional.size() != 2) throw Error("context form needs two arguments: " + form.str());
  const bool hole_first = args.positional[0]->is_symbol("?");
  const SExpr& anchor_expr = *args.positional[hole_first ? 1 : 0];

  Evaluator ev(b, env, false);
  const Value anchor = ev.eval(anchor_expr);
  if (is_null(anchor)) return {};
  const auto& index = env.scene.index();
  const Point* point = std::get_if<Point>(&anchor);
  const Tag tag = point ? 0 : as_object(anchor, head);
  const Rect box = ev.bbox(anchor);

  TaggedSet candidates;
  if (iequals(head, "touch")) {
    candidates = point ? index.objects_at(*point) : index.objects_touching(tag);
    if (env.config.touch_strict) {
      std::vector<Tag> kept;
      for (Tag t : candidates)
        if (rect_distance(env.scene.bbox(t), box) <= env.thresholds.tiny) kept.push_back(t);
      candidates = TaggedSet::adopt_sorted(std::move(kept));
    }
  } else if (iequals(head, "contain")) {
    if (!hole_first) {
      candidates = index.objects_within(box, true, tag);
    } else {
      std::vector<Tag> kept;
      for (Tag t : context)
        if (t != tag && env.scene.bbox(t).strictly_contains(box)) kept.push_back(t);
      candidates = TaggedSet::adopt_sorted(std::move(kept));
    }
  } else if (auto d = direction_of(head)) {
    const Direction dir = hole_first ? *d : opposite(*d);
    candidates = point ? index.directional_query(box, dir, args.strip, 0)
                       : index.directional_query(tag, dir, args.strip);
    if (head.find("-nearest") != std::string_view::npos)
      return nearest_band(intersect(candidates, context, visits), box, dir, env);
  } else {
    throw Error("relation " + std::string(head) + " cannot generate a context");
  }
  return intersect(candidates, context, visits);
}

}  // namespace diagraph
