#include <doctest.h>

#include <random>

#include "diagraph/constraints.hpp"
#include "diagraph/error.hpp"
#include "diagraph/fixtures.hpp"
#include "diagraph/io.hpp"
#include "diagraph/parser.hpp"
#include "oracle.hpp"

using namespace diagraph;

namespace {

SExpr expr(const char* text) { return read_sexprs(text).at(0); }

Primitive line(Point a, Point b) { return Primitive{0, Line{a, b}}; }
Primitive text(std::string s, Point at, double h) {
  return Primitive{0, Text{std::move(s), at, h, TextOrientation::horizontal}};
}

std::string grammar_path(const char* name) { return std::string(DIAGRAPH_GRAMMAR_DIR) + "/" + name; }

constexpr Tag B = 2, C = 3, D = 4;

}  // namespace

TEST_CASE("cardinality constraint on a two-element group") {
  const Scene s(normalize(make_fixture("fig3-micro")));
  const Environment env(s, {});
  PendingSet group{{B, C}, s.bbox(B)};
  Bindings b;
  b.bind_pending("Ticks", &group);
  CHECK_FALSE(eval_constraint(expr("(> (number-of Ticks) 2)"), b, env));
  CHECK(eval_constraint(expr("(>= (size Ticks) 2)"), b, env));
}

TEST_CASE("distance of a point to itself is below tiny") {
  const Scene s(normalize(make_fixture("fig3-micro")));
  const Environment env(s, {});
  Bindings b;
  b.bind("P", Tag{8});
  b.bind("L", D);
  CHECK(eval_constraint(expr("(< (distance P P) *tiny*)"), b, env));
  CHECK(eval_constraint(expr("(< (distance (left-endpoint L) (left-endpoint L)) *tiny*)"), b, env));
}

TEST_CASE("tiny and very-long resolve from the characteristic lengths") {
  const Scene s({line({0, 0}, {6400, 0}), text("1", {10, 10}, 40)});
  const Environment env(s, {});
  CHECK(env.thresholds.tiny == 20.0);
  CHECK(env.thresholds.very_long == 3200.0);
  const Scene tiny_h({line({0, 0}, {6400, 0}), text("1", {10, 10}, 1)});
  CHECK(Environment(tiny_h, {}).thresholds.tiny == 2.0);
}

TEST_CASE("type mismatch is false and leaves a note") {
  const Scene s({line({0, 0}, {1000, 0}), text("label", {10, 10}, 20)});
  std::vector<std::string> notes;
  Environment env(s, {});
  env.notes = &notes;
  Bindings b;
  b.bind("T", Tag{2});
  CHECK_FALSE(eval_constraint(expr("(> (a-length T) 1)"), b, env));
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("a-length") != std::string::npos);
}

TEST_CASE("constraints naming a null binding hold vacuously") {
  const Scene s({line({0, 0}, {1000, 0})});
  const Environment env(s, {});
  Bindings b;
  b.bind("X", std::nullopt);
  b.bind("L", Tag{1});
  CHECK(mentions_null(expr("(above X L)"), b));
  CHECK(eval_constraint(expr("(above X L)"), b, env));
  CHECK_FALSE(eval_constraint(expr("(vertp L)"), b, env));
}

TEST_CASE("unknown names are hard errors") {
  const Scene s({line({0, 0}, {1000, 0})});
  const Environment env(s, {});
  Bindings b;
  CHECK_THROWS_AS(eval_expr(expr("(horizp Q)"), b, env), Error);
}

TEST_CASE("logical and comparison forms") {
  const Scene s({line({0, 0}, {1000, 0}), line({0, 0}, {0, 10})});
  const Environment env(s, {});
  Bindings b;
  b.bind("H", Tag{1});
  b.bind("V", Tag{2});
  CHECK(eval_constraint(expr("(and (horizp H) (vertp V))"), b, env));
  CHECK(eval_constraint(expr("(or (vertp H) (vertp V))"), b, env));
  CHECK(eval_constraint(expr("(not (vertp H))"), b, env));
  CHECK(eval_constraint(expr("(= (a-length H) 1000)"), b, env));
  CHECK(eval_constraint(expr("(<= (a-length V) 10)"), b, env));
  CHECK(eval_constraint(expr("(touch H V)"), b, env));
  CHECK(eval_constraint(expr("(connected H V)"), b, env));
}

TEST_CASE("directional relations respect the strip option") {
  const Scene s({line({1000, 1000}, {2000, 1000}), text("7", {1400, 900}, 20), text("8", {100, 900}, 20)});
  const Environment env(s, {});
  Bindings b;
  b.bind("Axis", Tag{1});
  b.bind("In", Tag{2});
  b.bind("Out", Tag{3});
  CHECK(eval_constraint(expr("(below In Axis :strip t)"), b, env));
  CHECK(eval_constraint(expr("(below Out Axis)"), b, env));
  CHECK_FALSE(eval_constraint(expr("(below Out Axis :strip t)"), b, env));
  CHECK_FALSE(eval_constraint(expr("(above In Axis)"), b, env));
  CHECK(eval_constraint(expr("(left Out In)"), b, env));
}

TEST_CASE("chain of three lines is one connected component") {
  const Scene s({line({100, 100}, {200, 100}), line({200, 100}, {200, 300}), line({200, 300}, {500, 300}),
                 line({4000, 4000}, {4100, 4100})});
  const Environment env(s, {});
  const auto parts = ger_partition(TaggedSet{1, 2, 3, 4}, "connected", env);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == TaggedSet{1, 2, 3});
  CHECK(parts[1] == TaggedSet{4});
}

TEST_CASE("GER partitions match brute-force components") {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    std::mt19937 rng(seed);
    const auto prims = oracle::random_diagram(rng, 50);
    const Scene s(prims);
    const Environment env(s, {});
    const oracle::World w(prims);
    const TaggedSet all = s.base_objects();
    for (const char* rel : {"near", "connected", "same-type", "horiz-aligned", "vert-aligned"}) {
      CAPTURE(seed);
      CAPTURE(rel);
      const auto got = ger_partition(all, rel, env);
      const auto want = oracle::components(all.vec(), [&](Tag a, Tag b) {
        return oracle::ger_pair(w, a, b, rel, env.thresholds.tiny, env.thresholds.lengths.h);
      });
      CHECK(oracle::as_partition(got) == want);
      for (Tag a : all)
        for (Tag b : all)
          if (a < b && oracle::ger_pair(w, a, b, rel, env.thresholds.tiny, env.thresholds.lengths.h))
            CHECK(ger_related(a, b, rel, env));
    }
  }
}

TEST_CASE("refinement intersects partitions") {
  const std::vector<TaggedSet> p1{{1, 2, 3}, {4, 5}}, p2{{1, 2}, {3, 4, 5}};
  const auto r = refine_partitions(TaggedSet{1, 2, 3, 4, 5}, {p1, p2});
  CHECK(oracle::as_partition(r) == oracle::Partition{{1, 2}, {3}, {4, 5}});
}

TEST_CASE("nearest band keeps the closest candidates") {
  // h is 20; the title sits 30 below the anchor, the caption 600 below.
  const Scene s({line({1000, 2000}, {3000, 2000}), text("Title", {1500, 1950}, 20),
                 text("Caption", {1500, 1380}, 20), text("Side", {5000, 1950}, 20)});
  const Environment env(s, {});
  const double title_gap = s.bbox(1).min.y - s.bbox(2).max.y;
  const double caption_gap = s.bbox(1).min.y - s.bbox(3).max.y;
  REQUIRE(title_gap < caption_gap - env.thresholds.lengths.h);
  CHECK(nearest_band(TaggedSet{2, 3}, s.bbox(1), Direction::below, env) == TaggedSet{2});
  CHECK(nearest_band(TaggedSet{3}, s.bbox(1), Direction::below, env) == TaggedSet{3});
  CHECK(nearest_band(TaggedSet{2, 3}, s.bbox(1), Direction::above, env).empty());
}

TEST_CASE("touch context of line D") {
  const Scene s(normalize(make_fixture("fig3-micro")));
  const Environment env(s, {});
  Bindings b;
  b.bind("X-Line", D);
  CHECK(filter_context(s.base_objects(), expr("(touch X-Line ?)"), b, env) == TaggedSet{B, C, 8, 10, 12, 13});
  CHECK(filter_context(TaggedSet{}, expr("(touch X-Line ?)"), b, env).empty());
  CHECK(filter_context(TaggedSet{B}, expr("(touch X-Line ?)"), b, env) == TaggedSet{B});
}

TEST_CASE("strict touch keeps objects within tiny of the anchor") {
  const Scene s(normalize(make_fixture("fig3-micro")));
  EngineConfig cfg;
  cfg.touch_strict = true;
  cfg.tiny = 1.0;
  const Environment env(s, cfg);
  Bindings b;
  b.bind("X-Line", D);
  const auto ctx = filter_context(s.base_objects(), expr("(touch X-Line ?)"), b, env);
  for (Tag t : ctx) CHECK(rect_distance(s.bbox(t), s.bbox(D)) <= 1.0);
  CHECK(ctx.contains(B));
}

TEST_CASE("data-graph contexts match brute-force scans") {
  Scene s(normalize(make_fixture("datagraph4")));
  const Grammar g = load_grammar(grammar_path("g2.dg"));
  Parser parser(g, s);
  const auto axes = parser.solve("Axis", s.base_objects());
  REQUIRE(axes.size() == 4);
  const Environment env(s, {});
  const TaggedSet base = s.base_objects();

  for (Tag axis : axes) {
    Bindings b;
    b.bind("Axis", axis);
    std::size_t visits = 0;
    const auto got = filter_context(base, expr("(contain Axis ?)"), b, env, &visits);
    std::set<Tag> want;
    for (Tag t : base)
      if (s.bbox(axis).strictly_contains(s.bbox(t))) want.insert(t);
    CHECK(oracle::as_set(got) == want);
    CHECK_FALSE(want.empty());

    const Tag xline = *s.derived(axis).constituent("X-Line");
    Bindings bx;
    bx.bind("X-Axis-Line", xline);
    TaggedSet texts;
    for (Tag t = 1; t <= s.primitive_count(); ++t)
      if (s.primitive(t).kind() == PrimitiveKind::text) texts.insert(t);
    const auto below = filter_context(texts, expr("(below ? X-Axis-Line :strip t)"), bx, env);
    const Rect& a = s.bbox(xline);
    std::set<Tag> band;
    for (Tag t : texts) {
      const Rect& r = s.bbox(t);
      if (r.max.y <= a.min.y && r.min.x <= a.max.x && r.max.x >= a.min.x) band.insert(t);
    }
    CHECK(oracle::as_set(below) == band);
    CHECK_FALSE(below.contains(69));
  }
}

TEST_CASE("additional slots read accessors through self") {
  const Scene s({line({200, 40}, {10, 40})});
  const Environment env(s, {});
  Bindings b;
  b.bind("Line", Tag{1});
  const Value v = eval_slot(expr("(left-endpoint (Line self))"), b, env);
  CHECK(std::get<Point>(v) == Point{10, 40});
}
