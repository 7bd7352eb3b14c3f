#include "diagraph/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "diagraph/error.hpp"
#include "diagraph/union_find.hpp"

namespace diagraph {

namespace {

// Lowest cell whose closed interval [k*s, (k+1)*s] contains x.
int lower_cell(double x, double s, int n) {
  const double q = x / s;
  const double f = std::floor(q);
  const int k = (q == f && f > 0) ? static_cast<int>(f) - 1 : static_cast<int>(f);
  return std::clamp(k, 0, n - 1);
}

int upper_cell(double x, double s, int n) {
  return std::clamp(static_cast<int>(std::floor(x / s)), 0, n - 1);
}

void normalize_cells(CellSet& cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}


}  // namespace

Direction opposite(Direction d) {
  switch (d) {
    case Direction::left: return Direction::right;
    case Direction::right: return Direction::left;
    case Direction::above: return Direction::below;
    case Direction::below: return Direction::above;
  }
  return d;
}

std::vector<EndpointRecord> line_endpoints(std::span<const Primitive> primitives) {
  std::vector<EndpointRecord> out;
  Tag next = static_cast<Tag>(primitives.size()) + 1;
  for (std::size_t k = 0; k < primitives.size(); ++k) {
    if (const auto* l = primitives[k].as<Line>()) {
      const Tag owner = static_cast<Tag>(k + 1);
      out.push_back({next++, owner, l->p1});
      out.push_back({next++, owner, l->p2});
    }
  }
  return out;
}

CellSet segment_cells(Point a, Point b, int level) {
  const int n = 1 << level;
  const double s = kGridExtent / n;
  if (a.x > b.x) std::swap(a, b);
  CellSet cells;
  const int i_lo = lower_cell(a.x, s, n), i_hi = upper_cell(b.x, s, n);
  const double dx = b.x - a.x;
  for (int i = i_lo; i <= i_hi; ++i) {
    const double xa = std::max(a.x, i * s), xb = std::min(b.x, (i + 1) * s);
    if (xa > xb) continue;
    double ya, yb;
    if (dx == 0.0) {
      ya = a.y;
      yb = b.y;
    } else {
      ya = a.y + (b.y - a.y) * ((xa - a.x) / dx);
      yb = a.y + (b.y - a.y) * ((xb - a.x) / dx);
    }
    const int j_lo = lower_cell(std::min(ya, yb), s, n), j_hi = upper_cell(std::max(ya, yb), s, n);
    for (int j = j_lo; j <= j_hi; ++j) cells.push_back({level, i, j});
  }
  normalize_cells(cells);
  return cells;
}

CellSet rect_cells(const Rect& r, int level) {
  CellSet cells;
  if (r.is_empty()) return cells;
  const int n = 1 << level;
  const double s = kGridExtent / n;
  for (int i = lower_cell(r.min.x, s, n); i <= upper_cell(r.max.x, s, n); ++i)
    for (int j = lower_cell(r.min.y, s, n); j <= upper_cell(r.max.y, s, n); ++j)
      cells.push_back({level, i, j});
  normalize_cells(cells);
  return cells;
}

CellSet point_cells(Point p, int level) {
  const int n = 1 << level;
  const double s = kGridExtent / n;
  return {{level, upper_cell(p.x, s, n), upper_cell(p.y, s, n)}};
}

CellSet primitive_cells(const Primitive& p, int level) {
  auto polyline = [level](const std::vector<Point>& pts) {
    CellSet cells;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      auto part = segment_cells(pts[k - 1], pts[k], level);
      cells.insert(cells.end(), part.begin(), part.end());
    }
    if (pts.size() == 1) cells = point_cells(pts[0], level);
    normalize_cells(cells);
    return cells;
  };
  if (const auto* l = p.as<Line>()) return segment_cells(l->p1, l->p2, level);
  if (const auto* b = p.as<Bezier>()) return polyline(flatten(*b));
  if (const auto* poly = p.as<Polygon>()) {
    auto pts = poly->vertices;
    if (poly->closed && !pts.empty()) pts.push_back(pts.front());
    return polyline(pts);
  }
  return rect_cells(bbox(p), level);
}

SpatialIndex::SpatialIndex(int depth) : depth_(depth) {
  if (depth < 1 || depth > 13) throw Error("pyramid depth must be in [1, 13]");
  grid_.resize(depth);
  xproj_.resize(depth);
  yproj_.resize(depth);
  for (int n = 0; n < depth; ++n) {
    const auto g = static_cast<std::size_t>(grid_size(n));
    grid_[n].resize(g * g);
    xproj_[n].resize(g);
    yproj_[n].resize(g);
  }
}

SpatialIndex::Entry& SpatialIndex::slot(Tag tag) {
  if (tag == 0) throw Error("tag 0 is reserved");
  if (entries_.size() <= tag) entries_.resize(tag + 1);
  if (entries_[tag].installed) throw Error("duplicate tag " + std::to_string(tag));
  return entries_[tag];
}

const SpatialIndex::Entry& SpatialIndex::entry(Tag tag) const {
  if (tag >= entries_.size() || !entries_[tag].installed)
    throw Error("unknown tag " + std::to_string(tag));
  return entries_[tag];
}

bool SpatialIndex::contains(Tag tag) const {
  return tag < entries_.size() && entries_[tag].installed;
}

void SpatialIndex::check_bounds(const Rect& r) const {
  if (r.is_empty()) return;
  if (!(r.min.x >= 0.0 && r.min.y >= 0.0 && r.max.x < kGridExtent && r.max.y < kGridExtent))
    throw Error("unnormalized input");
}

void SpatialIndex::place(Tag tag, CellSet cells) {
  const int fine = finest_level();
  for (const auto& c : cells) {
    for (int n = 0; n <= fine; ++n) {
      const int shift = fine - n;
      const int ci = c.i >> shift, cj = c.j >> shift;
      grid_[n][static_cast<std::size_t>(cj) * grid_size(n) + ci].insert(tag);
      xproj_[n][ci].insert(tag);
      yproj_[n][cj].insert(tag);
    }
  }
  auto& e = entries_[tag];
  e.cells = std::move(cells);
  e.installed = true;
  installed_.insert(tag);
}

CellSet SpatialIndex::install_primitive(const Primitive& p) {
  const Rect box = bbox(p);
  check_bounds(box);
  auto& e = slot(p.tag);
  e.bbox = box;
  if (const auto* l = p.as<Line>())
    e.align_points = {l->p1, l->p2};
  else
    e.align_points = {box.center()};
  place(p.tag, primitive_cells(p, finest_level()));
  return entries_[p.tag].cells;
}

CellSet SpatialIndex::install_point(Tag tag, Point p) {
  check_bounds(Rect::around(p));
  auto& e = slot(tag);
  e.bbox = Rect::around(p);
  e.align_points = {p};
  place(tag, point_cells(p, finest_level()));
  return entries_[tag].cells;
}

CellSet SpatialIndex::install_derived(Tag tag, const Rect& box, std::span<const Tag> constituents) {
  CellSet cells;
  std::vector<Tag> desc;
  for (Tag c : constituents) {
    const auto& ce = entry(c);
    cells.insert(cells.end(), ce.cells.begin(), ce.cells.end());
    desc.push_back(c);
    desc.insert(desc.end(), ce.descendants.begin(), ce.descendants.end());
  }
  normalize_cells(cells);
  std::sort(desc.begin(), desc.end());
  desc.erase(std::unique(desc.begin(), desc.end()), desc.end());
  auto& e = slot(tag);
  e.bbox = box;
  e.descendants = std::move(desc);
  e.align_points = {box.center()};
  place(tag, std::move(cells));
  return entries_[tag].cells;
}

const CellSet& SpatialIndex::cells_of(Tag tag) const { return entry(tag).cells; }
const Rect& SpatialIndex::bbox_of(Tag tag) const { return entry(tag).bbox; }
std::span<const Tag> SpatialIndex::descendants_of(Tag tag) const { return entry(tag).descendants; }
std::span<const Point> SpatialIndex::alignment_points(Tag tag) const {
  return entry(tag).align_points;
}

bool SpatialIndex::related(Tag a, Tag b) const {
  const auto& da = entry(a).descendants;
  const auto& db = entry(b).descendants;
  return std::binary_search(da.begin(), da.end(), b) || std::binary_search(db.begin(), db.end(), a);
}

const TaggedSet& SpatialIndex::cell(int level, int i, int j) const {
  return grid_.at(level).at(static_cast<std::size_t>(j) * grid_size(level) + i);
}
const TaggedSet& SpatialIndex::xproj(int level, int i) const { return xproj_.at(level).at(i); }
const TaggedSet& SpatialIndex::yproj(int level, int j) const { return yproj_.at(level).at(j); }

TaggedSet SpatialIndex::exclude_related(const TaggedSet& s, Tag anchor) const {
  std::vector<Tag> out;
  out.reserve(s.size());
  for (Tag t : s) {
    if (t == anchor) continue;
    if (anchor != 0 && contains(anchor) && related(anchor, t)) continue;
    out.push_back(t);
  }
  return TaggedSet::adopt_sorted(std::move(out));
}

TaggedSet SpatialIndex::objects_touching(Tag anchor, QueryStats* stats) const {
  const auto& cells = cells_of(anchor);
  std::vector<const TaggedSet*> parts;
  parts.reserve(cells.size());
  for (const auto& c : cells) parts.push_back(&cell(c.level, c.i, c.j));
  std::size_t visits = 0;
  TaggedSet all = unite_all(parts, &visits);
  if (stats) {
    stats->cells_inspected += parts.size();
    stats->elements_visited += visits;
  }
  return exclude_related(all, anchor);
}

TaggedSet SpatialIndex::objects_at(Point p, QueryStats* stats) const {
  const auto c = point_cells(p, finest_level()).front();
  if (stats) ++stats->cells_inspected;
  return cell(c.level, c.i, c.j);
}

std::vector<CellCoord> SpatialIndex::range_cover(int lo, int hi) const {
  std::vector<CellCoord> out;
  int level = finest_level();
  while (lo < hi) {
    if (lo & 1) out.push_back({level, lo++, 0});
    if (hi & 1) out.push_back({level, --hi, 0});
    lo >>= 1;
    hi >>= 1;
    --level;
  }
  return out;
}

TaggedSet SpatialIndex::directional_query(Tag anchor, Direction dir, bool strip,
                                          QueryStats* stats) const {
  return directional_query(bbox_of(anchor), dir, strip, anchor, stats);
}

TaggedSet SpatialIndex::directional_query(const Rect& a, Direction dir, bool strip, Tag exclude,
                                          QueryStats* stats) const {
  const int fine = finest_level();
  const int n = grid_size(fine);
  const double s = cell_size(fine);
  const bool use_x = dir == Direction::left || dir == Direction::right;
  int lo = 0, hi = n;
  switch (dir) {
    case Direction::right: lo = lower_cell(a.max.x, s, n); break;
    case Direction::left: hi = upper_cell(a.min.x, s, n) + 1; break;
    case Direction::above: lo = lower_cell(a.max.y, s, n); break;
    case Direction::below: hi = upper_cell(a.min.y, s, n) + 1; break;
  }
  const auto cover = range_cover(lo, hi);
  std::vector<const TaggedSet*> parts;
  for (const auto& c : cover) parts.push_back(use_x ? &xproj(c.level, c.i) : &yproj(c.level, c.i));
  std::size_t visits = 0;
  const TaggedSet candidates = unite_all(parts, &visits);
  if (stats) {
    stats->cells_inspected += parts.size();
    stats->elements_visited += visits;
  }

  std::vector<Tag> out;
  for (Tag t : candidates) {
    if (t == exclude) continue;
    if (exclude != 0 && contains(exclude) && related(exclude, t)) continue;
    const Rect& b = bbox_of(t);
    bool beyond = false;
    switch (dir) {
      case Direction::right: beyond = b.min.x >= a.max.x; break;
      case Direction::left: beyond = b.max.x <= a.min.x; break;
      case Direction::above: beyond = b.min.y >= a.max.y; break;
      case Direction::below: beyond = b.max.y <= a.min.y; break;
    }
    if (!beyond) continue;
    if (strip) {
      const bool overlap = use_x ? (b.min.y <= a.max.y && b.max.y >= a.min.y)
                                 : (b.min.x <= a.max.x && b.max.x >= a.min.x);
      if (!overlap) continue;
    }
    out.push_back(t);
  }
  return TaggedSet::adopt_sorted(std::move(out));
}

TaggedSet SpatialIndex::objects_within(const Rect& region, bool strict, Tag exclude,
                                       QueryStats* stats) const {
  if (region.is_empty()) return {};
  const int fine = finest_level();
  const int n = grid_size(fine);
  const double s = cell_size(fine);
  const int i0 = lower_cell(region.min.x, s, n), i1 = upper_cell(region.max.x, s, n);
  const int j0 = lower_cell(region.min.y, s, n), j1 = upper_cell(region.max.y, s, n);

  // Cover the finest-level cell range with the coarsest pyramid blocks that fit inside it.
  std::vector<const TaggedSet*> parts;
  auto visit = [&](auto&& self, int level, int bi, int bj) -> void {
    const int span = 1 << (fine - level);
    const int x0 = bi * span, x1 = x0 + span - 1, y0 = bj * span, y1 = y0 + span - 1;
    if (x1 < i0 || x0 > i1 || y1 < j0 || y0 > j1) return;
    if (x0 >= i0 && x1 <= i1 && y0 >= j0 && y1 <= j1) {
      parts.push_back(&cell(level, bi, bj));
      return;
    }
    for (int di = 0; di < 2; ++di)
      for (int dj = 0; dj < 2; ++dj) self(self, level + 1, bi * 2 + di, bj * 2 + dj);
  };
  visit(visit, 0, 0, 0);

  std::size_t visits = 0;
  const TaggedSet candidates = unite_all(parts, &visits);
  if (stats) {
    stats->cells_inspected += parts.size();
    stats->elements_visited += visits;
  }
  std::vector<Tag> out;
  for (Tag t : candidates) {
    if (t == exclude) continue;
    if (exclude != 0 && contains(exclude) && related(exclude, t)) continue;
    const Rect& b = bbox_of(t);
    if (strict ? region.strictly_contains(b) : region.contains(b)) out.push_back(t);
  }
  return TaggedSet::adopt_sorted(std::move(out));
}

std::vector<TaggedSet> SpatialIndex::aligned_partition(const TaggedSet& objects, AlignAxis axis,
                                                       int level) const {
  if (level < 0 || level >= depth_) throw Error("alignment level out of range");
  const int n = grid_size(level);
  const double s = cell_size(level);
  const auto& tags = objects.vec();
  UnionFind uf(tags.size());
  std::vector<std::ptrdiff_t> first_in_cell(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < tags.size(); ++k) {
    for (const Point& p : alignment_points(tags[k])) {
      const double coord = axis == AlignAxis::horizontal ? p.y : p.x;
      const auto c = static_cast<std::size_t>(upper_cell(coord, s, n));
      if (first_in_cell[c] < 0)
        first_in_cell[c] = static_cast<std::ptrdiff_t>(k);
      else
        uf.join(static_cast<std::size_t>(first_in_cell[c]), k);
    }
  }
  std::vector<std::vector<Tag>> groups(tags.size());
  for (std::size_t k = 0; k < tags.size(); ++k) groups[uf.find(k)].push_back(tags[k]);
  std::vector<TaggedSet> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(TaggedSet::adopt_sorted(std::move(g)));
  return out;
}

SpatialIndex build_index(std::span<const Primitive> primitives, int depth) {
  SpatialIndex index(depth);
  for (std::size_t k = 0; k < primitives.size(); ++k) {
    if (primitives[k].tag != k + 1) throw Error("primitives must be tagged 1..N in order");
    index.install_primitive(primitives[k]);
  }
  for (const auto& ep : line_endpoints(primitives)) index.install_point(ep.tag, ep.point);
  return index;
}

}  // namespace diagraph
