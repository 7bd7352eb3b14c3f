#include "diagraph/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <regex>

#include "diagraph/error.hpp"

namespace diagraph {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

double polyline_length(const std::vector<Point>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
  return total;
}

std::vector<Point> polygon_outline(const Polygon& poly) {
  std::vector<Point> pts = poly.vertices;
  if (poly.closed && !pts.empty() && !(pts.front() == pts.back())) pts.push_back(pts.front());
  return pts;
}

// Angle of the segment direction to the x axis, folded into [0, 90] degrees.
double axis_angle_deg(Point a, Point b) {
  return std::atan2(std::abs(b.y - a.y), std::abs(b.x - a.x)) * 180.0 / std::numbers::pi;
}

}  // namespace

Rect Rect::of(Point a, Point b) {
  return Rect{{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
}

void Rect::expand(Point p) {
  if (is_empty()) {
    min = max = p;
    return;
  }
  min.x = std::min(min.x, p.x);
  min.y = std::min(min.y, p.y);
  max.x = std::max(max.x, p.x);
  max.y = std::max(max.y, p.y);
}

void Rect::expand(const Rect& r) {
  if (r.is_empty()) return;
  expand(r.min);
  expand(r.max);
}

bool Rect::contains(Point p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
}

bool Rect::contains(const Rect& r) const {
  return !is_empty() && !r.is_empty() && contains(r.min) && contains(r.max);
}

bool Rect::strictly_contains(const Rect& r) const {
  return !is_empty() && !r.is_empty() && r.min.x > min.x && r.max.x < max.x && r.min.y > min.y &&
         r.max.y < max.y;
}

bool Rect::intersects(const Rect& r) const {
  return !is_empty() && !r.is_empty() && r.min.x <= max.x && r.max.x >= min.x &&
         r.min.y <= max.y && r.max.y >= min.y;
}

double rect_distance(const Rect& a, const Rect& b) {
  const double dx = std::max({0.0, b.min.x - a.max.x, a.min.x - b.max.x});
  const double dy = std::max({0.0, b.min.y - a.max.y, a.min.y - b.max.y});
  return std::hypot(dx, dy);
}

std::string_view kind_name(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::line: return "Line";
    case PrimitiveKind::circle: return "Circle";
    case PrimitiveKind::polygon: return "Polygon";
    case PrimitiveKind::curve: return "Curve";
    case PrimitiveKind::text: return "Text";
  }
  return "?";
}

std::optional<PrimitiveKind> kind_from_name(std::string_view name) {
  if (iequals(name, "line")) return PrimitiveKind::line;
  if (iequals(name, "circle")) return PrimitiveKind::circle;
  if (iequals(name, "polygon")) return PrimitiveKind::polygon;
  if (iequals(name, "curve") || iequals(name, "bezier")) return PrimitiveKind::curve;
  if (iequals(name, "text")) return PrimitiveKind::text;
  return std::nullopt;
}

void validate(const Primitive& p) {
  std::visit(overloaded{
                 [](const Line& l) {
                   if (l.p1 == l.p2) throw Error("line endpoints must be distinct");
                 },
                 [](const Circle& c) {
                   if (!(c.radius >= 0.0)) throw Error("circle radius must be non-negative");
                 },
                 [](const Polygon& poly) {
                   if (poly.vertices.size() < 3) throw Error("polygon needs at least 3 vertices");
                 },
                 [](const Bezier& b) {
                   if (b.segments.empty()) throw Error("curve needs at least one segment");
                 },
                 [](const Text& t) {
                   if (!(t.height > 0.0)) throw Error("text height must be positive");
                 },
             },
             p.shape);
}

double text_width(const Text& t) {
  return 0.6 * t.height * static_cast<double>(std::max<std::size_t>(t.text.size(), 1));
}

std::vector<Point> flatten(const BezierSegment& seg, int pieces) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(pieces) + 1);
  const auto& c = seg.control;
  for (int i = 0; i <= pieces; ++i) {
    const double t = static_cast<double>(i) / pieces;
    const double u = 1.0 - t;
    const double b0 = u * u * u, b1 = 3 * u * u * t, b2 = 3 * u * t * t, b3 = t * t * t;
    pts.push_back({b0 * c[0].x + b1 * c[1].x + b2 * c[2].x + b3 * c[3].x,
                   b0 * c[0].y + b1 * c[1].y + b2 * c[2].y + b3 * c[3].y});
  }
  return pts;
}

std::vector<Point> flatten(const Bezier& curve, int pieces) {
  std::vector<Point> pts;
  for (const auto& seg : curve.segments) {
    auto part = flatten(seg, pieces);
    pts.insert(pts.end(), part.begin() + (pts.empty() ? 0 : 1), part.end());
  }
  return pts;
}

Rect bbox(const Primitive& p) {
  return std::visit(
      overloaded{
          [](const Line& l) { return Rect::of(l.p1, l.p2); },
          [](const Circle& c) {
            return Rect{{c.center.x - c.radius, c.center.y - c.radius},
                        {c.center.x + c.radius, c.center.y + c.radius}};
          },
          [](const Polygon& poly) {
            Rect r;
            for (const auto& v : poly.vertices) r.expand(v);
            return r;
          },
          [](const Bezier& b) {
            Rect r;
            for (const auto& v : flatten(b)) r.expand(v);
            return r;
          },
          [](const Text& t) {
            const double w = text_width(t);
            const Point far = t.orientation == TextOrientation::horizontal
                                  ? Point{t.anchor.x + w, t.anchor.y + t.height}
                                  : Point{t.anchor.x + t.height, t.anchor.y + w};
            return Rect{t.anchor, far};
          },
      },
      p.shape);
}

double distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

double a_length(const Primitive& p) {
  return std::visit(overloaded{
                        [](const Line& l) { return distance(l.p1, l.p2); },
                        [](const Bezier& b) { return polyline_length(flatten(b)); },
                        [](const Polygon& poly) { return polyline_length(polygon_outline(poly)); },
                        [](const auto&) -> double { throw Error("no arc length"); },
                    },
                    p.shape);
}

Point left_endpoint(const Primitive& p) {
  const auto* l = p.as<Line>();
  if (!l) throw Error("left-endpoint requires a line");
  if (l->p1.x != l->p2.x) return l->p1.x < l->p2.x ? l->p1 : l->p2;
  return l->p1.y <= l->p2.y ? l->p1 : l->p2;
}

Point bottom_endpoint(const Primitive& p) {
  const auto* l = p.as<Line>();
  if (!l) throw Error("bottom-endpoint requires a line");
  if (l->p1.y != l->p2.y) return l->p1.y < l->p2.y ? l->p1 : l->p2;
  return l->p1.x <= l->p2.x ? l->p1 : l->p2;
}

bool horizp(const Primitive& p, double angle_tol_deg) {
  if (const auto* l = p.as<Line>()) {
    const double tol = std::tan(angle_tol_deg * std::numbers::pi / 180.0);
    return std::abs(l->p2.y - l->p1.y) <= tol * std::abs(l->p2.x - l->p1.x);
  }
  if (const auto* t = p.as<Text>()) return t->orientation == TextOrientation::horizontal;
  return false;
}

bool vertp(const Primitive& p, double angle_tol_deg) {
  if (const auto* l = p.as<Line>()) {
    const double tol = std::tan(angle_tol_deg * std::numbers::pi / 180.0);
    return std::abs(l->p2.x - l->p1.x) <= tol * std::abs(l->p2.y - l->p1.y);
  }
  if (const auto* t = p.as<Text>()) return t->orientation == TextOrientation::vertical;
  return false;
}

bool rectanglep(const Primitive& p, double angle_tol_deg) {
  const auto* poly = p.as<Polygon>();
  if (!poly) return false;
  std::vector<Point> v = poly->vertices;
  if (v.size() > 1 && v.front() == v.back()) v.pop_back();
  if (v.size() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (v[i] == v[j]) return false;

  for (std::size_t i = 0; i < 4; ++i) {
    const Point a = v[i], b = v[(i + 1) % 4], c = v[(i + 2) % 4];
    const double ang = axis_angle_deg(a, b);
    if (ang > angle_tol_deg && ang < 90.0 - angle_tol_deg) return false;
    const double ux = b.x - a.x, uy = b.y - a.y, wx = c.x - b.x, wy = c.y - b.y;
    const double cosang = (ux * wx + uy * wy) / (std::hypot(ux, uy) * std::hypot(wx, wy));
    const double between = std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / std::numbers::pi;
    if (std::abs(between - 90.0) > angle_tol_deg) return false;
  }
  return true;
}

bool numeric_text(std::string_view s) {
  static const std::regex pattern(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return false;
  const auto last = s.find_last_not_of(" \t\r\n");
  const std::string trimmed(s.substr(first, last - first + 1));
  return std::regex_match(trimmed, pattern);
}

bool numeric_textp(const Primitive& p) {
  const auto* t = p.as<Text>();
  return t && numeric_text(t->text);
}

Rect union_bbox(std::span<const Primitive> diagram) {
  Rect r;
  for (const auto& p : diagram) r.expand(bbox(p));
  return r;
}

CharacteristicLengths characteristic_lengths(std::span<const Primitive> diagram) {
  if (diagram.empty()) throw Error("empty diagram");
  const Rect extent = union_bbox(diagram);
  CharacteristicLengths cl;
  cl.W = extent.width() > 0.0 ? extent.width() : std::max(extent.height(), 1.0);
  std::optional<double> h;
  for (const auto& p : diagram)
    if (const auto* t = p.as<Text>()) h = h ? std::min(*h, t->height) : t->height;
  cl.h = h.value_or(cl.W / 64.0);
  return cl;
}

SizeThresholds SizeThresholds::from(const CharacteristicLengths& cl, const SizeRules& rules) {
  return {rules.short_mult * cl.h, std::max(rules.long_mult * cl.h, rules.long_width_frac * cl.W),
          rules.small_mult * cl.h};
}

double size_measure(const Primitive& p) {
  if (p.kind() == PrimitiveKind::line || p.kind() == PrimitiveKind::curve) return a_length(p);
  const Rect r = bbox(p);
  return std::max(r.width(), r.height());
}

bool size_predicate(const Primitive& p, const SizeThresholds& t, SizeClass which) {
  switch (which) {
    case SizeClass::short_: return size_measure(p) <= t.short_max;
    case SizeClass::long_: return size_measure(p) >= t.long_min;
    case SizeClass::small: {
      const Rect r = bbox(p);
      return std::max(r.width(), r.height()) <= t.small_max;
    }
  }
  return false;
}

bool size_predicate(const Primitive& p, const CharacteristicLengths& cl, SizeClass which) {
  return size_predicate(p, SizeThresholds::from(cl), which);
}

Normalization Normalization::fitting(const Rect& extent) {
  Normalization n;
  if (extent.is_empty()) return n;
  n.origin = extent.min;
  const double span = std::max(extent.width(), extent.height());
  n.scale = span > 0.0 ? (kGridExtent - 1.0) / span : 1.0;
  return n;
}

Primitive transform(const Primitive& p, const Normalization& n) {
  Primitive out = p;
  std::visit(overloaded{
                 [&](Line& l) {
                   l.p1 = n.apply(l.p1);
                   l.p2 = n.apply(l.p2);
                 },
                 [&](Circle& c) {
                   c.center = n.apply(c.center);
                   c.radius = n.apply_length(c.radius);
                 },
                 [&](Polygon& poly) {
                   for (auto& v : poly.vertices) v = n.apply(v);
                 },
                 [&](Bezier& b) {
                   for (auto& seg : b.segments)
                     for (auto& c : seg.control) c = n.apply(c);
                 },
                 [&](Text& t) {
                   t.anchor = n.apply(t.anchor);
                   t.height = n.apply_length(t.height);
                 },
             },
             out.shape);
  return out;
}

}  // namespace diagraph
