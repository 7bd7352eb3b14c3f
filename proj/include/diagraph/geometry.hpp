#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace diagraph {

using Tag = std::uint32_t;

/// Side length of the normalized coordinate space (2^13 grid units).
inline constexpr double kGridExtent = 8192.0;

/// Number of polyline pieces each cubic Bezier segment is flattened into.
inline constexpr int kBezierSubdivision = 16;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle; a default-constructed Rect is empty (min > max).
struct Rect {
  Point min{1.0, 1.0};
  Point max{0.0, 0.0};

  static Rect of(Point a, Point b);
  static Rect around(Point p) { return Rect{p, p}; }

  bool is_empty() const { return min.x > max.x || min.y > max.y; }
  double width() const { return is_empty() ? 0.0 : max.x - min.x; }
  double height() const { return is_empty() ? 0.0 : max.y - min.y; }
  Point center() const { return {(min.x + max.x) / 2, (min.y + max.y) / 2}; }

  void expand(Point p);
  void expand(const Rect& r);

  bool contains(Point p) const;
  bool contains(const Rect& r) const;
  bool strictly_contains(const Rect& r) const;
  bool intersects(const Rect& r) const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Euclidean gap between two rectangles (0 when they overlap or touch).
double rect_distance(const Rect& a, const Rect& b);

struct Line {
  Point p1;
  Point p2;
};

struct Circle {
  Point center;
  double radius = 0.0;
};

struct Polygon {
  std::vector<Point> vertices;
  bool closed = true;
};

struct BezierSegment {
  std::array<Point, 4> control;
};

struct Bezier {
  std::vector<BezierSegment> segments;
};

enum class TextOrientation { horizontal, vertical };

/// Horizontal text occupies [anchor.x, anchor.x + width] x [anchor.y, anchor.y + height];
/// vertical text reads bottom-to-top and occupies
/// [anchor.x, anchor.x + height] x [anchor.y, anchor.y + width].
struct Text {
  std::string text;
  Point anchor;
  double height = 0.0;
  TextOrientation orientation = TextOrientation::horizontal;
};

enum class PrimitiveKind { line, circle, polygon, curve, text };

using Shape = std::variant<Line, Circle, Polygon, Bezier, Text>;

struct Primitive {
  Tag tag = 0;
  Shape shape;

  PrimitiveKind kind() const { return static_cast<PrimitiveKind>(shape.index()); }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&shape);
  }
};

std::string_view kind_name(PrimitiveKind kind);
/// Case-insensitive; accepts the grammar names (Line, Circle, Polygon, Curve, Text) and "bezier".
std::optional<PrimitiveKind> kind_from_name(std::string_view name);

/// Throws Error when a primitive breaks its shape invariants.
void validate(const Primitive& p);

/// Glyph-box width estimate for a text string.
double text_width(const Text& t);

std::vector<Point> flatten(const BezierSegment& seg, int pieces = kBezierSubdivision);
std::vector<Point> flatten(const Bezier& curve, int pieces = kBezierSubdivision);

Rect bbox(const Primitive& p);

double distance(Point a, Point b);

/// Sum of segment lengths. Lines, curves (flattened) and polygon outlines are measurable;
/// circles and text throw Error("no arc length").
double a_length(const Primitive& p);

Point left_endpoint(const Primitive& p);
Point bottom_endpoint(const Primitive& p);

inline constexpr double kDefaultAngleTolDeg = 5.0;

bool horizp(const Primitive& p, double angle_tol_deg = kDefaultAngleTolDeg);
bool vertp(const Primitive& p, double angle_tol_deg = kDefaultAngleTolDeg);
bool rectanglep(const Primitive& p, double angle_tol_deg = kDefaultAngleTolDeg);
bool numeric_text(std::string_view s);
bool numeric_textp(const Primitive& p);

struct CharacteristicLengths {
  double h = 0.0;  ///< smallest glyph height
  double W = 0.0;  ///< diagram width
};

/// Throws Error("empty diagram") for an empty span.
CharacteristicLengths characteristic_lengths(std::span<const Primitive> diagram);

/// Multipliers that ground the size vocabulary in the characteristic lengths.
struct SizeRules {
  double short_mult = 3.0;
  double long_mult = 10.0;
  double long_width_frac = 0.25;
  double small_mult = 3.0;
};

struct SizeThresholds {
  double short_max = 0.0;
  double long_min = 0.0;
  double small_max = 0.0;

  static SizeThresholds from(const CharacteristicLengths& cl, const SizeRules& rules = {});
};

enum class SizeClass { short_, long_, small };

/// The measure compared against size thresholds: arc length for lines and curves,
/// the larger bbox dimension for everything else.
double size_measure(const Primitive& p);

bool size_predicate(const Primitive& p, const SizeThresholds& t, SizeClass which);
bool size_predicate(const Primitive& p, const CharacteristicLengths& cl, SizeClass which);

/// Uniform scale + translation taking input coordinates into [0, 2^13).
struct Normalization {
  Point origin;
  double scale = 1.0;

  Point apply(Point p) const { return {(p.x - origin.x) * scale, (p.y - origin.y) * scale}; }
  double apply_length(double d) const { return d * scale; }

  /// Maps `extent` so its larger side spans just under the grid extent.
  static Normalization fitting(const Rect& extent);
};

Primitive transform(const Primitive& p, const Normalization& n);

Rect union_bbox(std::span<const Primitive> diagram);

}  // namespace diagraph
