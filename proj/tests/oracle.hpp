#pragma once

// Brute-force reference implementations used to check the index, the GERs and the parser.
// They deliberately share nothing with the library beyond the primitive data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "diagraph/geometry.hpp"

namespace oracle {

using diagraph::Bezier;
using diagraph::Circle;
using diagraph::Line;
using diagraph::Point;
using diagraph::Polygon;
using diagraph::Primitive;
using diagraph::Tag;
using diagraph::Text;

using Cell = std::pair<int, int>;
using Cells = std::set<Cell>;
using Group = std::set<Tag>;
using Partition = std::set<Group>;

inline constexpr double kExtent = 8192.0;
inline constexpr int kFine = 64;
inline constexpr double kCell = kExtent / kFine;

struct Box {
  double x0, y0, x1, y1;
};

inline Box box_of_points(const std::vector<Point>& pts) {
  Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

inline double text_w(const Text& t) { return 0.6 * t.height * static_cast<double>(t.text.size()); }

// Cubic Bezier by repeated linear interpolation.
inline Point casteljau(const std::array<Point, 4>& c, double t) {
  auto lerp = [t](Point a, Point b) { return Point{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; };
  const Point a = lerp(c[0], c[1]), b = lerp(c[1], c[2]), d = lerp(c[2], c[3]);
  const Point e = lerp(a, b), f = lerp(b, d);
  return lerp(e, f);
}

inline std::vector<Point> curve_points(const Bezier& b, int pieces) {
  std::vector<Point> pts;
  for (const auto& seg : b.segments)
    for (int i = pts.empty() ? 0 : 1; i <= pieces; ++i) pts.push_back(casteljau(seg.control, double(i) / pieces));
  return pts;
}

inline Box box_of(const Primitive& p) {
  if (const auto* l = p.as<Line>()) return box_of_points({l->p1, l->p2});
  if (const auto* c = p.as<Circle>())
    return {c->center.x - c->radius, c->center.y - c->radius, c->center.x + c->radius, c->center.y + c->radius};
  if (const auto* g = p.as<Polygon>()) return box_of_points(g->vertices);
  if (const auto* b = p.as<Bezier>()) return box_of_points(curve_points(*b, 16));
  const auto& t = *p.as<Text>();
  const double w = text_w(t);
  if (t.orientation == diagraph::TextOrientation::horizontal)
    return {t.anchor.x, t.anchor.y, t.anchor.x + w, t.anchor.y + t.height};
  return {t.anchor.x, t.anchor.y, t.anchor.x + t.height, t.anchor.y + w};
}

// Liang-Barsky clip of segment ab against the closed box.
inline bool segment_meets_box(Point a, Point b, const Box& r) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x0, r.x1 - a.x, a.y - r.y0, r.y1 - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 > t1) return false;
  }
  return true;
}

inline Box cell_box(int i, int j) { return {i * kCell, j * kCell, (i + 1) * kCell, (j + 1) * kCell}; }

inline Cell point_cell(Point p) {
  return {std::clamp(int(std::floor(p.x / kCell)), 0, kFine - 1),
          std::clamp(int(std::floor(p.y / kCell)), 0, kFine - 1)};
}

inline Cells polyline_cells(const std::vector<Point>& pts) {
  Cells out;
  if (pts.size() == 1) return {point_cell(pts[0])};
  for (int i = 0; i < kFine; ++i)
    for (int j = 0; j < kFine; ++j)
      for (std::size_t k = 1; k < pts.size(); ++k)
        if (segment_meets_box(pts[k - 1], pts[k], cell_box(i, j))) {
          out.insert({i, j});
          break;
        }
  return out;
}

// Raster of the whole 64x64 finest grid against the shape.
inline Cells raster(const Primitive& p) {
  if (const auto* l = p.as<Line>()) return polyline_cells({l->p1, l->p2});
  if (const auto* b = p.as<Bezier>()) return polyline_cells(curve_points(*b, 16));
  if (const auto* g = p.as<Polygon>()) {
    auto pts = g->vertices;
    if (g->closed) pts.push_back(pts.front());
    return polyline_cells(pts);
  }
  const Box r = box_of(p);
  Cells out;
  for (int i = 0; i < kFine; ++i)
    for (int j = 0; j < kFine; ++j) {
      const Box c = cell_box(i, j);
      if (c.x0 <= r.x1 && r.x0 <= c.x1 && c.y0 <= r.y1 && r.y0 <= c.y1) out.insert({i, j});
    }
  return out;
}

// Every object of a primitive diagram tagged 1..N plus its line endpoints, described
// independently of the index.
struct World {
  std::vector<Tag> tags;
  std::map<Tag, Cells> cells;
  std::map<Tag, Box> box;
  std::map<Tag, std::vector<Point>> align;
  std::map<Tag, int> kind;  // primitive variant index, -1 for endpoints
  std::map<Tag, std::vector<Point>> links;

  explicit World(const std::vector<Primitive>& prims) {
    Tag next = static_cast<Tag>(prims.size()) + 1;
    for (std::size_t k = 0; k < prims.size(); ++k) {
      const Tag t = static_cast<Tag>(k + 1);
      tags.push_back(t);
      cells[t] = raster(prims[k]);
      box[t] = box_of(prims[k]);
      kind[t] = static_cast<int>(prims[k].shape.index());
      if (const auto* l = prims[k].as<Line>()) links[t] = {l->p1, l->p2};
      if (const auto* b = prims[k].as<Bezier>())
        links[t] = {b->segments.front().control[0], b->segments.back().control[3]};
      if (const auto* l = prims[k].as<Line>())
        align[t] = {l->p1, l->p2};
      else
        align[t] = {{(box[t].x0 + box[t].x1) / 2, (box[t].y0 + box[t].y1) / 2}};
    }
    for (const auto& p : prims)
      if (const auto* l = p.as<Line>())
        for (Point e : {l->p1, l->p2}) {
          tags.push_back(next);
          cells[next] = {point_cell(e)};
          box[next] = {e.x, e.y, e.x, e.y};
          align[next] = {e};
          kind[next] = -1;
          ++next;
        }
  }

  std::set<Tag> touching(Tag a) const {
    std::set<Tag> out;
    for (Tag t : tags) {
      if (t == a) continue;
      const auto& ca = cells.at(a);
      for (const auto& c : cells.at(t))
        if (ca.count(c)) {
          out.insert(t);
          break;
        }
    }
    return out;
  }

  // dir: 0 left, 1 right, 2 above, 3 below
  std::set<Tag> directional(Tag a, int dir, bool strip) const {
    const Box& r = box.at(a);
    std::set<Tag> out;
    for (Tag t : tags) {
      if (t == a) continue;
      const Box& b = box.at(t);
      const bool beyond = dir == 0 ? b.x1 <= r.x0 : dir == 1 ? b.x0 >= r.x1 : dir == 2 ? b.y0 >= r.y1 : b.y1 <= r.y0;
      if (!beyond) continue;
      if (strip) {
        const bool overlap = dir < 2 ? (b.y0 <= r.y1 && b.y1 >= r.y0) : (b.x0 <= r.x1 && b.x1 >= r.x0);
        if (!overlap) continue;
      }
      out.insert(t);
    }
    return out;
  }

  bool aligned(Tag a, Tag b, bool horizontal, int level) const {
    const double s = kExtent / (1 << level);
    for (const auto& p : align.at(a))
      for (const auto& q : align.at(b)) {
        const double u = horizontal ? p.y : p.x, v = horizontal ? q.y : q.x;
        if (std::floor(u / s) == std::floor(v / s)) return true;
      }
    return false;
  }
};

// Pairwise generalized equivalence relations, straight from their definitions.
inline bool ger_pair(const World& w, Tag a, Tag b, const std::string& rel, double tiny, double h) {
  if (a == b) return true;
  if (rel == "near") {
    const Box &p = w.box.at(a), &q = w.box.at(b);
    const double dx = std::max({0.0, q.x0 - p.x1, p.x0 - q.x1});
    const double dy = std::max({0.0, q.y0 - p.y1, p.y0 - q.y1});
    return std::sqrt(dx * dx + dy * dy) <= tiny;
  }
  if (rel == "connected") {
    auto la = w.links.find(a), lb = w.links.find(b);
    if (la == w.links.end() || lb == w.links.end()) return false;
    for (const auto& p : la->second)
      for (const auto& q : lb->second)
        if (std::hypot(p.x - q.x, p.y - q.y) <= tiny) return true;
    return false;
  }
  if (rel == "same-type") {
    const Box &p = w.box.at(a), &q = w.box.at(b);
    return w.kind.at(a) == w.kind.at(b) && std::abs((p.x1 - p.x0) - (q.x1 - q.x0)) <= h / 2 &&
           std::abs((p.y1 - p.y0) - (q.y1 - q.y0)) <= h / 2;
  }
  return w.aligned(a, b, rel == "horiz-aligned", 6);
}

// Components of an arbitrary symmetric relation by depth-first search over all pairs.
inline Partition components(const std::vector<Tag>& tags, const std::function<bool(Tag, Tag)>& rel) {
  std::map<Tag, bool> seen;
  Partition out;
  for (Tag root : tags) {
    if (seen[root]) continue;
    Group g;
    std::vector<Tag> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
      const Tag t = stack.back();
      stack.pop_back();
      g.insert(t);
      for (Tag u : tags)
        if (!seen[u] && rel(t, u)) {
          seen[u] = true;
          stack.push_back(u);
        }
    }
    out.insert(g);
  }
  return out;
}

template <class Sets>
Partition as_partition(const Sets& sets) {
  Partition out;
  for (const auto& s : sets) out.insert(Group(s.begin(), s.end()));
  return out;
}

template <class S>
std::set<Tag> as_set(const S& s) {
  return std::set<Tag>(s.begin(), s.end());
}

inline double gap(const Box& a, const Box& b) {
  const double dx = std::max({0.0, b.x0 - a.x1, a.x0 - b.x1});
  const double dy = std::max({0.0, b.y0 - a.y1, a.y0 - b.y1});
  return std::hypot(dx, dy);
}

// Random diagram in grid units, including lines placed on cell boundaries.
inline std::vector<Primitive> random_diagram(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> coord(0.0, 8000.0);
  std::uniform_real_distribution<double> small(5.0, 400.0);
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<int> cellk(1, 60);
  std::vector<Primitive> out;
  for (int k = 0; k < n; ++k) {
    Primitive p;
    p.tag = static_cast<Tag>(k + 1);
    const int c = kind(rng);
    const Point o{coord(rng), coord(rng)};
    auto clampp = [](Point q) { return Point{std::clamp(q.x, 0.0, 8100.0), std::clamp(q.y, 0.0, 8100.0)}; };
    if (c <= 3) {
      p.shape = Line{o, clampp({o.x + small(rng) * 3 - 600, o.y + small(rng) * 3 - 600})};
    } else if (c == 4) {
      const double x = cellk(rng) * kCell;
      p.shape = Line{{x, o.y}, {x, std::min(o.y + small(rng), 8100.0)}};
    } else if (c == 5) {
      const double y = cellk(rng) * kCell;
      p.shape = Line{{o.x, y}, {std::min(o.x + small(rng), 8100.0), y}};
    } else if (c == 6) {
      p.shape = Circle{{std::max(o.x, 60.0), std::max(o.y, 60.0)}, std::uniform_real_distribution<double>(1, 50)(rng)};
    } else if (c == 7) {
      const double s = small(rng) / 2;
      p.shape = Polygon{{o, clampp({o.x + s, o.y}), clampp({o.x + s, o.y + s}), clampp({o.x, o.y + s / 2})}, kind(rng) % 2 == 0};
    } else if (c == 8) {
      const double dx = small(rng), dy = small(rng);
      p.shape = Bezier{{{{o, clampp({o.x, o.y + dy}), clampp({o.x + dx, o.y + dy}), clampp({o.x + dx, o.y})}}}};
    } else {
      p.shape = Text{"t" + std::to_string(k), {std::min(o.x, 7800.0), o.y},
                     std::uniform_real_distribution<double>(8, 40)(rng),
                     kind(rng) % 2 ? diagraph::TextOrientation::horizontal : diagraph::TextOrientation::vertical};
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace oracle
