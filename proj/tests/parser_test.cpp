#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "diagraph/error.hpp"
#include "diagraph/fixtures.hpp"
#include "diagraph/io.hpp"
#include "diagraph/parser.hpp"

using namespace diagraph;

namespace {

std::string grammar_path(const char* name) { return std::string(DIAGRAPH_GRAMMAR_DIR) + "/" + name; }

std::set<std::string> leaf_ids(const Scene& s, const Diagram& d, Tag t) {
  std::set<std::string> out;
  for (Tag leaf : s.leaves(t)) out.insert(d.ids[leaf - 1]);
  return out;
}

Primitive line(Point a, Point b) { return Primitive{0, Line{a, b}}; }

}  // namespace

TEST_CASE("G1 on fig2 finds the two tick structures") {
  const Diagram d = make_fixture("fig2-ticks");
  Scene s(normalize(d));
  const auto r = parse(load_grammar(grammar_path("g1.dg")), s, "X-Ticks");
  REQUIRE(r.solutions.size() == 2);
  std::set<std::set<std::string>> got;
  for (Tag t : r.solutions) got.insert(leaf_ids(s, d, t));
  std::set<std::string> a{"a.line"}, b{"b.line", "b.tick1", "b.tick2", "b.tick3", "b.tick4"};
  for (int k = 1; k <= 7; ++k) a.insert("a.tick" + std::to_string(k));
  CHECK(got == std::set<std::set<std::string>>{a, b});
  for (Tag t : r.solutions) CHECK(replay(load_grammar(grammar_path("g1.dg")), s, t).empty());
  CHECK(r.stats.monotonicity_violations == 0);
  CHECK(r.stats.monotonicity_checks > 0);
}

TEST_CASE("G1 on fig3 rejects the two-tick candidate") {
  Scene s(normalize(make_fixture("fig3-micro")));
  const auto r = parse(load_grammar(grammar_path("g1.dg")), s, "X-Ticks", {}, true);
  CHECK(r.solutions.empty());

  bool saw_xline = false, saw_group = false, saw_reject = false;
  for (const auto& ev : r.trace) {
    if (ev.kind == TraceKind::clause && ev.rule == "X-Ticks" && ev.name == "X-Line") {
      REQUIRE(ev.objects.size() == 1);
      CHECK(s.leaves(ev.objects[0]) == std::vector<Tag>{4});
      saw_xline = true;
    }
    if (ev.kind == TraceKind::group && ev.rule == "Ticks") {
      CHECK(ev.context == TaggedSet{2, 3, 8, 10, 12, 13});
      CHECK(ev.objects == std::vector<Tag>{2, 3});
      saw_group = true;
    }
    if (ev.kind == TraceKind::reject && ev.name == "Ticks") {
      CHECK(ev.detail == "(> (number-of Ticks) 2)");
      saw_reject = true;
    }
  }
  CHECK(saw_xline);
  CHECK(saw_group);
  CHECK(saw_reject);
}

TEST_CASE("set objects occupy the union of their elements' cells") {
  Scene s(normalize(make_fixture("fig3-micro")));
  Parser p(load_grammar(grammar_path("g1.dg")), s);
  const auto ticks = p.solve("Ticks", TaggedSet{2, 3, 4});
  REQUIRE(ticks.size() == 1);
  CellSet want = s.index().cells_of(2);
  for (const auto& c : s.index().cells_of(3)) want.push_back(c);
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  CHECK(s.index().cells_of(ticks[0]) == want);
  CHECK(p.solve("Ticks", TaggedSet{}).empty());
  CHECK(p.solve("Ticks", TaggedSet{1, 5}).empty());
}

TEST_CASE("one constituent over one matching primitive gives one solution") {
  Scene s({line({10, 40}, {6000, 40}), line({100, 100}, {100, 200})});
  const Grammar g = load_grammar(grammar_path("g2.dg"));
  Parser p(g, s);
  const auto xs = p.solve("X-Line", s.base_objects());
  REQUIRE(xs.size() == 1);
  const Value* slot = s.derived(xs[0]).slot("left-endpoint");
  REQUIRE(slot != nullptr);
  CHECK(std::get<Point>(*slot) == Point{10, 40});
}

TEST_CASE("derived bbox is the union of constituent bboxes") {
  Scene s(normalize(make_fixture("datagraph4")));
  Parser p(load_grammar(grammar_path("g2.dg")), s);
  for (Tag axis : p.solve("Axis", s.base_objects())) {
    Rect want;
    for (Tag leaf : s.leaves(axis)) want.expand(s.bbox(leaf));
    CHECK(s.bbox(axis) == want);
  }
}

TEST_CASE("G2 on datagraph4 gives one graph per panel") {
  const Diagram d = make_fixture("datagraph4");
  Scene s(normalize(d));
  const Grammar g = load_grammar(grammar_path("g2.dg"));
  const auto r = parse(g, s, "XY-Data-Graph");
  REQUIRE(r.solutions.size() == 4);
  std::set<Tag> axes;
  for (Tag sol : r.solutions) {
    axes.insert(*s.derived(sol).constituent("Axis"));
    CHECK(replay(g, s, sol).empty());
  }
  CHECK(axes.size() == 4);
  CHECK(r.stats.monotonicity_violations == 0);
  CHECK(r.notes.empty());
}

TEST_CASE("parsing is deterministic") {
  const Diagram d = make_fixture("datagraph4");
  const Grammar g = load_grammar(grammar_path("g2.dg"));
  Scene s1(normalize(d)), s2(normalize(d));
  const auto r1 = parse(g, s1, "XY-Data-Graph");
  const auto r2 = parse(g, s2, "XY-Data-Graph");
  const auto f1 = make_solution_file(s1, r1.solutions, d.ids, "g2.dg", "XY-Data-Graph", {});
  const auto f2 = make_solution_file(s2, r2.solutions, d.ids, "g2.dg", "XY-Data-Graph", {});
  CHECK(f1 == f2);
}

TEST_CASE("errors and empty input") {
  const Grammar g = load_grammar(grammar_path("g1.dg"));
  Scene empty(std::vector<Primitive>{});
  CHECK(parse(g, empty, "X-Ticks").solutions.empty());

  Scene s(normalize(make_fixture("fig2-ticks")));
  CHECK_THROWS_AS(parse(g, s, "Nope"), Error);

  EngineConfig cfg;
  cfg.max_tuples = 5;
  CHECK_THROWS_WITH_AS(parse(g, s, "X-Ticks", cfg), doctest::Contains("max_tuples"), Error);
}

TEST_CASE("alternatives over disjoint primitives are all kept") {
  Scene s({Primitive{0, Circle{{100, 100}, 5}},
           Primitive{0, Polygon{{{200, 200}, {208, 200}, {208, 208}, {200, 208}}, true}},
           line({0, 0}, {6000, 0})});
  Parser p(load_grammar(grammar_path("g2.dg")), s);
  const auto pts = p.solve("Data-Point", s.base_objects());
  CHECK(pts.size() == 2);
}

TEST_CASE("dedupe drops repeats and keeps first-seen order") {
  Scene s(normalize(make_fixture("fig2-ticks")));
  const auto r = parse(load_grammar(grammar_path("g1.dg")), s, "X-Ticks");
  std::vector<Tag> pool(r.solutions);
  for (Tag t = 1; t <= 10; ++t) pool.push_back(t);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Tag> noisy;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int k = 0; k < 40; ++k) noisy.push_back(pool[pick(rng)]);
    const auto out = dedupe(s, noisy);
    std::vector<Tag> want;
    for (Tag t : noisy)
      if (std::find(want.begin(), want.end(), t) == want.end()) want.push_back(t);
    CHECK(out == want);
  }
}

TEST_CASE("memoized derived objects are shared between parses of the same scene") {
  Scene s(normalize(make_fixture("fig2-ticks")));
  const Grammar g = load_grammar(grammar_path("g1.dg"));
  const auto first = parse(g, s, "X-Ticks");
  const std::size_t created = s.derived_count();
  const auto second = parse(g, s, "X-Ticks");
  CHECK(first.solutions == second.solutions);
  CHECK(s.derived_count() == created);
}

TEST_CASE("replay reports constraints that no longer hold") {
  Scene s(normalize(make_fixture("fig2-ticks")));
  const Grammar g = load_grammar(grammar_path("g1.dg"));
  const auto r = parse(g, s, "X-Ticks");
  REQUIRE_FALSE(r.solutions.empty());
  EngineConfig strict;
  strict.size.long_width_frac = 2.0;
  const auto failures = replay(g, s, r.solutions[0], strict);
  REQUIRE(failures.size() == 1);
  CHECK(failures[0] == "X-Line: (long Line)");
}

TEST_CASE("trace events render one line each") {
  Scene s(normalize(make_fixture("fig3-micro")));
  const auto r = parse(load_grammar(grammar_path("g1.dg")), s, "X-Ticks", {}, true);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.front().str() == "enter X-Ticks context=15");
  for (const auto& ev : r.trace) CHECK(ev.str().find('\n') == std::string::npos);
  CHECK(parse(load_grammar(grammar_path("g1.dg")), s, "X-Ticks").trace.empty());
}
