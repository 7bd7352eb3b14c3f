#include "diagraph/fixtures.hpp"

#include <array>
#include <string>

#include "diagraph/error.hpp"

namespace diagraph {

namespace {

class Builder {
 public:
  explicit Builder(std::string units) { d_.units = std::move(units); }

  void line(std::string id, Point a, Point b) { add(std::move(id), Line{a, b}); }
  void circle(std::string id, Point c, double r) { add(std::move(id), Circle{c, r}); }
  void square(std::string id, Point center, double side) {
    const double s = side / 2;
    add(std::move(id), Polygon{{{center.x - s, center.y - s},
                                {center.x + s, center.y - s},
                                {center.x + s, center.y + s},
                                {center.x - s, center.y + s}},
                               true});
  }
  void arch(std::string id, Point start, double dx, double rise) {
    BezierSegment seg{{start, {start.x, start.y + rise}, {start.x + dx, start.y + rise}, {start.x + dx, start.y}}};
    add(std::move(id), Bezier{{seg}});
  }
  void text(std::string id, std::string s, Point anchor, double height,
            TextOrientation o = TextOrientation::horizontal) {
    add(std::move(id), Text{std::move(s), anchor, height, o});
  }

  Diagram take() { return std::move(d_); }
  Diagram& diagram() { return d_; }

 private:
  void add(std::string id, Shape shape) {
    Primitive p;
    p.tag = static_cast<Tag>(d_.primitives.size() + 1);
    p.shape = std::move(shape);
    d_.primitives.push_back(std::move(p));
    d_.ids.push_back(std::move(id));
  }

  Diagram d_;
};

// Five regions of tick structures, 24 lines in all:
//   a  long line y=7000, two detached ticks on the far left, seven attached ticks
//   b  long line y=5500 with four ticks hanging below it
//   c  long line y=4000 with only two ticks
//   d  three long verticals hanging from line c
//   e  three aligned ticks touching nothing
// Region a needs seven attached ticks for the regions to total 24 lines.
Diagram fig2_ticks() {
  Builder b("arbitrary");
  b.line("a.line", {1500, 7000}, {7000, 7000});
  b.line("a.detached1", {300, 7000}, {300, 7200});
  b.line("a.detached2", {700, 7000}, {700, 7200});
  for (int k = 0; k < 7; ++k) {
    const double x = 2000 + 700.0 * k;
    b.line("a.tick" + std::to_string(k + 1), {x, 7000}, {x, 7200});
  }
  b.line("b.line", {1500, 5500}, {7000, 5500});
  for (int k = 0; k < 4; ++k) {
    const double x = 2500 + 700.0 * k;
    b.line("b.tick" + std::to_string(k + 1), {x, 5500}, {x, 5300});
  }
  b.line("c.line", {1500, 4000}, {7800, 4000});
  b.line("c.tick1", {2000, 4000}, {2000, 4200});
  b.line("c.tick2", {2600, 4000}, {2600, 4200});
  for (int k = 0; k < 3; ++k) {
    const double x = 6000 + 700.0 * k;
    b.line("d.vertical" + std::to_string(k + 1), {x, 4000}, {x, 1800});
  }
  for (int k = 0; k < 3; ++k) {
    const double x = 2000 + 500.0 * k;
    b.line("e.tick" + std::to_string(k + 1), {x, 1000}, {x, 1200});
  }
  return b.take();
}

// Lines A..E of the index walkthrough. The frame is the whole grid, so input units are
// grid units (up to the 8191/8192 fit) and D crosses exactly three finest cells.
Diagram fig3_micro() {
  Builder b("grid");
  b.diagram().frame = Rect::of({0, 0}, {kGridExtent, kGridExtent});
  b.line("A", {40, 140}, {40, 400});
  b.line("B", {200, 135}, {200, 120});
  b.line("C", {300, 135}, {300, 120});
  b.line("D", {140, 130}, {440, 130});
  b.line("E", {460, 300}, {560, 400});
  return b.take();
}

// Four x,y panels in a 2x2 layout. Left panels carry y labels and bottom panels carry
// x labels; the right and top panels find theirs across the page, and both axis titles
// serve every panel.
Diagram datagraph4() {
  Builder b("pt");
  constexpr std::array<Point, 4> origins{{{80, 80}, {560, 80}, {80, 500}, {560, 500}}};
  constexpr double xlen = 400, ylen = 320, tick = 8, label_h = 10;
  const std::array<const char*, 5> xlabels{"10", "20", "30", "40", "50"};
  const std::array<const char*, 5> ylabels{"0.2", "0.4", "0.6", "0.8", "1.0"};

  for (int p = 0; p < 4; ++p) {
    const Point o = origins[p];
    const std::string pre = "panel" + std::to_string(p) + ".";
    b.line(pre + "x-axis", o, {o.x + xlen, o.y});
    b.line(pre + "y-axis", o, {o.x, o.y + ylen});
    for (int k = 1; k <= 5; ++k) {
      const double x = o.x + 70.0 * k;
      b.line(pre + "x-tick" + std::to_string(k), {x, o.y}, {x, o.y + tick});
    }
    for (int k = 1; k <= 5; ++k) {
      const double y = o.y + 60.0 * k;
      b.line(pre + "y-tick" + std::to_string(k), {o.x, y}, {o.x + tick, y});
    }
    if (p == 0 || p == 1) {
      for (int k = 1; k <= 5; ++k) {
        const std::string s = xlabels[k - 1];
        const double w = 0.6 * label_h * static_cast<double>(s.size());
        b.text(pre + "x-label" + std::to_string(k), s, {o.x + 70.0 * k - w / 2, o.y - 25}, label_h);
      }
    }
    if (p == 0 || p == 2) {
      for (int k = 1; k <= 5; ++k) {
        const std::string s = ylabels[k - 1];
        const double w = 0.6 * label_h * static_cast<double>(s.size());
        b.text(pre + "y-label" + std::to_string(k), s, {o.x - 12 - w, o.y + 60.0 * k - label_h / 2},
               label_h);
      }
    }
  }
  b.text("y-title", "Fraction Modified", {10, 390}, 12, TextOrientation::vertical);
  b.text("x-title", "Time After Stimulus (min)", {430, 20}, 12);

  for (int p = 0; p < 4; ++p) {
    const Point o = origins[p];
    const std::string pre = "panel" + std::to_string(p) + ".";
    if (p < 2) {
      // Zigzag data curve of eight segments with a marker at each of the first 8 vertices.
      auto vertex = [&](int k) { return Point{o.x + 40 + 40.0 * k, o.y + (k % 2 ? 180.0 : 80.0)}; };
      for (int k = 0; k < 8; ++k)
        b.line(pre + "data-line" + std::to_string(k + 1), vertex(k), vertex(k + 1));
      for (int k = 0; k < 8; ++k) {
        if (p == 0)
          b.circle(pre + "marker" + std::to_string(k + 1), vertex(k), 4);
        else
          b.square(pre + "marker" + std::to_string(k + 1), vertex(k), 8);
      }
    } else {
      for (int k = 0; k < 4; ++k)
        b.arch(pre + "data-curve" + std::to_string(k + 1), {o.x + 40 + 80.0 * k, o.y + 40}, 80, 200);
      for (int k = 0; k < 6; ++k)
        b.circle(pre + "circle" + std::to_string(k + 1), {o.x + 60 + 50.0 * k, o.y + 260}, 4);
      const int squares = p == 2 ? 6 : 5;
      for (int k = 0; k < squares; ++k)
        b.square(pre + "square" + std::to_string(k + 1), {o.x + 60 + 50.0 * k, o.y + 230}, 8);
    }
  }
  return b.take();
}

}  // namespace

std::vector<std::string_view> fixture_names() { return {"fig2-ticks", "fig3-micro", "datagraph4"}; }

Diagram make_fixture(std::string_view name) {
  if (name == "fig2-ticks") return fig2_ticks();
  if (name == "fig3-micro") return fig3_micro();
  if (name == "datagraph4") return datagraph4();
  throw Error("unknown fixture " + std::string(name));
}

}  // namespace diagraph
