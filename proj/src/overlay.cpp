#include "diagraph/overlay.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "diagraph/error.hpp"

namespace diagraph {

namespace {

constexpr std::array kPalette{"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#17becf", "#e377c2", "#8c564b"};

// SVG y grows downward; the grid is y-up.
double flip(double y) { return kGridExtent - y; }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void draw_primitive(std::ostream& os, const Primitive& p) {
  if (const auto* l = p.as<Line>()) {
    os << "<line x1=\"" << l->p1.x << "\" y1=\"" << flip(l->p1.y) << "\" x2=\"" << l->p2.x
       << "\" y2=\"" << flip(l->p2.y) << "\"/>\n";
  } else if (const auto* c = p.as<Circle>()) {
    os << "<circle cx=\"" << c->center.x << "\" cy=\"" << flip(c->center.y) << "\" r=\"" << c->radius
       << "\"/>\n";
  } else if (const auto* poly = p.as<Polygon>()) {
    os << (poly->closed ? "<polygon" : "<polyline") << " points=\"";
    for (const auto& v : poly->vertices) os << v.x << ',' << flip(v.y) << ' ';
    os << "\"/>\n";
  } else if (const auto* b = p.as<Bezier>()) {
    os << "<path d=\"";
    for (const auto& s : b->segments) {
      const auto& k = s.control;
      os << 'M' << k[0].x << ',' << flip(k[0].y) << " C" << k[1].x << ',' << flip(k[1].y) << ' '
         << k[2].x << ',' << flip(k[2].y) << ' ' << k[3].x << ',' << flip(k[3].y) << ' ';
    }
    os << "\" fill=\"none\"/>\n";
  } else if (const auto* t = p.as<Text>()) {
    const double x = t->anchor.x, y = flip(t->anchor.y);
    os << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << t->height << '"';
    if (t->orientation == TextOrientation::vertical)
      os << " transform=\"rotate(-90 " << x << ' ' << y << ")\" dy=\"" << t->height << '"';
    os << " stroke=\"none\" fill=\"#888\">" << escape(t->text) << "</text>\n";
  }
}

void outline(std::ostream& os, const Scene& scene, Tag tag, std::set<Tag>& seen) {
  if (!seen.insert(tag).second) return;
  const Rect& r = scene.bbox(tag);
  os << "<rect data-tag=\"" << tag << "\" x=\"" << r.min.x << "\" y=\"" << flip(r.max.y)
     << "\" width=\"" << r.width() << "\" height=\"" << r.height() << "\"/>\n";
  if (scene.kind(tag) != ObjectKind::derived) return;
  os << "<text x=\"" << r.min.x << "\" y=\"" << flip(r.max.y) - 8
     << "\" font-size=\"96\" stroke=\"none\" fill-opacity=\"1\">" << escape(scene.type_name(tag)) << "</text>\n";
  for (Tag k : scene.derived(tag).children()) outline(os, scene, k, seen);
}

}  // namespace

std::string overlay_svg(const Scene& scene, const std::vector<Tag>& solutions) {
  std::ostringstream os;
  os.precision(10);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kGridExtent << ' ' << kGridExtent
     << "\">\n";
  os << "<g id=\"base\" stroke=\"#999\" stroke-width=\"8\" fill=\"none\">\n";
  for (const auto& p : scene.primitives()) draw_primitive(os, p);
  os << "</g>\n";
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    os << "<g class=\"solution\" id=\"solution-" << k + 1 << "\" stroke=\"" << color
       << "\" fill=\"" << color << "\" fill-opacity=\"0\" stroke-width=\"12\">\n";
    std::set<Tag> seen;
    outline(os, scene, solutions[k], seen);
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_overlay(const Scene& scene, const std::vector<Tag>& solutions,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << overlay_svg(scene, solutions);
}

}  // namespace diagraph
