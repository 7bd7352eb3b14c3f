#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "diagraph/geometry.hpp"
#include "diagraph/tagged_set.hpp"

namespace diagraph {

struct CellCoord {
  int level = 0;
  int i = 0;  ///< column (x)
  int j = 0;  ///< row (y)

  friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

/// Sorted, duplicate-free list of cells.
using CellSet = std::vector<CellCoord>;

enum class Direction { left, right, above, below };
enum class AlignAxis { horizontal, vertical };

Direction opposite(Direction d);

/// Instrumentation for a single query.
struct QueryStats {
  std::size_t cells_inspected = 0;
  std::size_t elements_visited = 0;
};

/// Line endpoint installed as its own point object.
struct EndpointRecord {
  Tag tag = 0;
  Tag owner = 0;
  Point point;
};

/// Endpoint objects for a primitive list tagged 1..N: line k's endpoints get the next two
/// free tags after N, in primitive order (p1 before p2).
std::vector<EndpointRecord> line_endpoints(std::span<const Primitive> primitives);

/// Finest-level rasterization helpers. A shape occupies every cell whose closed square it
/// meets; a point occupies the single cell floor(p / cell).
CellSet segment_cells(Point a, Point b, int level);
CellSet rect_cells(const Rect& r, int level);
CellSet point_cells(Point p, int level);
CellSet primitive_cells(const Primitive& p, int level);

/// Pyramid of 2^n x 2^n occupancy grids (n = 0 .. depth-1) over [0, 2^13)^2, with per-level
/// X/Y projection arrays and an inverse map from objects to finest-level cells.
///
/// Installs are exclusive-writer operations; queries are const and may run concurrently
/// with each other but not with an install.
class SpatialIndex {
 public:
  explicit SpatialIndex(int depth = 7);

  int depth() const { return depth_; }
  int finest_level() const { return depth_ - 1; }
  int grid_size(int level) const { return 1 << level; }
  double cell_size(int level) const { return kGridExtent / grid_size(level); }

  /// Throws Error("unnormalized input") when geometry leaves the grid space.
  CellSet install_primitive(const Primitive& p);
  CellSet install_point(Tag tag, Point p);
  /// Cells are the union of the constituents' inverse-index cells; no geometry is rescanned.
  CellSet install_derived(Tag tag, const Rect& bbox, std::span<const Tag> constituents);

  bool contains(Tag tag) const;
  std::size_t object_count() const { return installed_.size(); }
  const TaggedSet& installed() const { return installed_; }

  const CellSet& cells_of(Tag tag) const;
  const Rect& bbox_of(Tag tag) const;
  /// Every object reachable through constituent links (sorted).
  std::span<const Tag> descendants_of(Tag tag) const;
  /// True when one object is built from the other.
  bool related(Tag a, Tag b) const;
  std::span<const Point> alignment_points(Tag tag) const;

  const TaggedSet& cell(int level, int i, int j) const;
  const TaggedSet& xproj(int level, int i) const;
  const TaggedSet& yproj(int level, int j) const;

  /// All objects sharing a finest-level cell with `anchor`, excluding the anchor and
  /// objects related to it by construction.
  TaggedSet objects_touching(Tag anchor, QueryStats* stats = nullptr) const;
  /// Contents of the finest cell containing p.
  TaggedSet objects_at(Point p, QueryStats* stats = nullptr) const;

  /// Objects whose bbox lies entirely beyond the anchor's bbox in `dir` (gap >= 0). With
  /// `strip`, results must also overlap the anchor's perpendicular extent. Candidates come
  /// from at most two projection cells per pyramid level.
  TaggedSet directional_query(Tag anchor, Direction dir, bool strip,
                              QueryStats* stats = nullptr) const;
  TaggedSet directional_query(const Rect& anchor, Direction dir, bool strip, Tag exclude,
                              QueryStats* stats = nullptr) const;

  /// Objects whose bbox lies inside `region` (strictly inside when `strict`).
  TaggedSet objects_within(const Rect& region, bool strict, Tag exclude = 0,
                           QueryStats* stats = nullptr) const;

  /// Maximal groups of `objects` whose alignment points share a projection cell at `level`
  /// (Y projection for horizontal alignment, X for vertical), closed transitively.
  std::vector<TaggedSet> aligned_partition(const TaggedSet& objects, AlignAxis axis,
                                           int level) const;

  /// Projection-cell decomposition of the half-open column/row range [lo, hi) at the
  /// finest level: at most two cells per pyramid level.
  std::vector<CellCoord> range_cover(int lo, int hi) const;

 private:
  struct Entry {
    bool installed = false;
    Rect bbox;
    CellSet cells;
    std::vector<Tag> descendants;
    std::vector<Point> align_points;
  };

  Entry& slot(Tag tag);
  const Entry& entry(Tag tag) const;
  void place(Tag tag, CellSet cells);
  void check_bounds(const Rect& r) const;
  TaggedSet exclude_related(const TaggedSet& s, Tag anchor) const;

  int depth_;
  std::vector<Entry> entries_;
  TaggedSet installed_;
  std::vector<std::vector<TaggedSet>> grid_;   // [level][j * size + i]
  std::vector<std::vector<TaggedSet>> xproj_;  // [level][i]
  std::vector<std::vector<TaggedSet>> yproj_;  // [level][j]
};

/// Builds the index for normalized primitives tagged 1..N and their line endpoints.
SpatialIndex build_index(std::span<const Primitive> primitives, int depth = 7);

}  // namespace diagraph
