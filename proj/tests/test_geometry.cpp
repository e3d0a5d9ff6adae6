#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "psp/errors.hpp"
#include "psp/geometry.hpp"
#include "psp/paths.hpp"

using namespace psp;

TEST_CASE("fresh flag geometry has one flag") {
  auto [g, f] = new_flag_geometry();
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.is_flag(f));
  CHECK(g.all_flags().size() == 1);
  CHECK(validate_geometry(g).passed());
  CHECK_FALSE(g.colored());
}

TEST_CASE("fresh colored flag geometry") {
  auto [g, f] = new_flag_geometry(ColorSpec::cyclic(2), 0, 0);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.line_color(f.line) == 0);
  CHECK(g.section_color(f.plane, f.point) == 0);
  CHECK(validate_geometry(g).passed());
  CHECK(audit_universal_axioms(g).passed());
  CHECK_THROWS_AS(new_flag_geometry(ColorSpec::cyclic(3), 5, 0), InvariantError);
}

TEST_CASE("color spec invariants") {
  CHECK_THROWS_AS(ColorSpec::with_shift({0, 1, 2}), InvariantError);  // fixed points
  CHECK_THROWS_AS(ColorSpec::with_shift({1}), InvariantError);        // k < 2
  CHECK_THROWS_AS(ColorSpec::with_shift({1, 5}), InvariantError);     // out of range
  ColorSpec swap2 = ColorSpec::with_shift({1, 0, 3, 2});
  CHECK(swap2.successor(2) == 3);
  CHECK(swap2.predecessors(0) == std::vector<int>{1});
  CHECK_FALSE(swap2.is_cyclic());
  CHECK(ColorSpec::cyclic(3).is_cyclic());
}

TEST_CASE("operations add the vertices and edges of their figure") {
  struct Case {
    Letter s;
    std::size_t dv, de;
  };
  const Case cases[] = {
      {Letter::L0, 1, 1},  {Letter::L1, 1, 2},  {Letter::L2, 1, 1},
      {Letter::L01, 2, 2}, {Letter::L12, 2, 2}, {Letter::L02, 3, 2},
  };
  for (const auto& c : cases) {
    auto [g, f] = new_flag_geometry();
    std::size_t v0 = g.vertex_count();
    std::size_t e0 = g.edge_count();
    Flag h = g.apply_operation(f, c.s);
    CHECK(g.vertex_count() - v0 == c.dv);
    CHECK(g.edge_count() - e0 == c.de);
    CHECK(g.is_flag(h));
    CHECK(validate_geometry(g).passed());
    // the new flag differs from f exactly on the levels of the letter
    for (int lvl = 0; lvl <= 2; ++lvl) {
      CHECK((f.at_level(lvl) != h.at_level(lvl)) == letter_has_level(c.s, lvl));
    }
  }
}

TEST_CASE("operation [1] joins the old plane and point") {
  auto [g, f] = new_flag_geometry();
  Flag h = g.apply_operation(f, Letter::L1);
  CHECK(h.plane == f.plane);
  CHECK(h.point == f.point);
  CHECK(h.line != f.line);
  CHECK(g.has_edge(f.plane, h.line));
  CHECK(g.has_edge(h.line, f.point));
}

TEST_CASE("operation [0,2] creates a disjoint flag") {
  auto [g, f] = new_flag_geometry();
  Flag h = g.apply_operation(f, Letter::L02);
  CHECK(h.plane != f.plane);
  CHECK(h.line != f.line);
  CHECK(h.point != f.point);
  CHECK_FALSE(g.has_edge(f.line, h.point));
  CHECK_FALSE(g.has_edge(h.line, f.point));
}

TEST_CASE("apply_operation rejects bad inputs") {
  auto [g, f] = new_flag_geometry();
  CHECK_THROWS_AS(g.apply_operation(Flag{99, 98, 97}, Letter::L0), InvariantError);
  auto [gc, fc] = new_flag_geometry(ColorSpec::cyclic(2));
  CHECK_THROWS_AS(gc.apply_operation(fc, Letter::L01), InvariantError);
}

TEST_CASE("operation [0] paints the new point per plane") {
  auto [g, f] = new_flag_geometry(ColorSpec::cyclic(3), 1, 1);
  // no exceptional point on (a, b) yet: the new point becomes it
  Flag h1 = g.apply_operation(f, Letter::L0);
  CHECK(g.section_color(f.plane, h1.point) == 2);
  CHECK(g.exceptional_point(f.plane, f.line) == h1.point);
  // second new point is ordinary
  Flag h2 = g.apply_operation(f, Letter::L0);
  CHECK(g.section_color(f.plane, h2.point) == 1);
  CHECK(g.exceptional_point(f.plane, f.line) == h1.point);
  CHECK(audit_universal_axioms(g).passed());
}

TEST_CASE("operation [1] color choices") {
  auto [g, f] = new_flag_geometry(ColorSpec::cyclic(3), 0, 0);
  Flag same = g.apply_operation(f, Letter::L1, ColorChoice{LineColorChoice::same, {}});
  CHECK(g.line_color(same.line) == 0);
  // the point is ordinary on the same-colored line: no exceptional point yet
  CHECK_FALSE(g.exceptional_point(f.plane, same.line).has_value());
  Flag pred = g.apply_operation(f, Letter::L1, ColorChoice{LineColorChoice::predecessor, {}});
  CHECK(g.line_color(pred.line) == 2);  // shift(2) == 0
  // the old point is exceptional for the predecessor-colored line
  CHECK(g.exceptional_point(f.plane, pred.line) == f.point);
  CHECK(audit_universal_axioms(g).passed());
}

TEST_CASE("operation [2] section choices") {
  auto [g, f] = new_flag_geometry(ColorSpec::cyclic(2), 0, 0);
  Flag c2 = g.apply_operation(f, Letter::L0);  // second point on the line
  (void)c2;
  // plain new plane: all points ordinary
  Flag p1 = g.apply_operation(f, Letter::L2);
  CHECK(g.section_color(p1.plane, f.point) == 0);
  CHECK_FALSE(g.exceptional_point(p1.plane, f.line).has_value());
  // new plane with a chosen exceptional point
  Flag p2 = g.apply_operation(f, Letter::L2, ColorChoice{LineColorChoice::same, f.point});
  CHECK(g.section_color(p2.plane, f.point) == 1);
  CHECK(g.exceptional_point(p2.plane, f.line) == f.point);
  CHECK(audit_universal_axioms(g).passed());
  // choosing a vertex that is not on the line is rejected
  CHECK_THROWS_AS(g.apply_operation(f, Letter::L2, ColorChoice{LineColorChoice::same, f.plane}),
                  InvariantError);
}

TEST_CASE("exceptional_point error paths") {
  auto [g, f] = new_flag_geometry(ColorSpec::cyclic(2), 0, 0);
  CHECK_THROWS_AS(g.exceptional_point(f.plane, f.point), InvariantError);
  auto [gu, fu] = new_flag_geometry();
  CHECK_THROWS_AS(gu.exceptional_point(fu.plane, fu.line), InvariantError);
  // invalid hand coloring with two candidates
  auto [g2, f2] = new_flag_geometry(ColorSpec::cyclic(2), 0, 0);
  Flag h = g2.apply_operation(f2, Letter::L0);
  g2.set_section_color(f2.plane, f2.point, 1);
  g2.set_section_color(f2.plane, h.point, 1);
  CHECK_THROWS_AS(g2.exceptional_point(f2.plane, f2.line), InvariantError);
  CHECK_FALSE(audit_universal_axioms(g2).passed());
}

TEST_CASE("validate_geometry flags a point-plane edge") {
  Geometry g;
  VertexId c = g.add_vertex(Level::point);
  VertexId b = g.add_vertex(Level::line);
  VertexId a = g.add_vertex(Level::plane);
  g.add_edge(a, b);
  g.add_edge(b, c);
  CHECK_THROWS_AS(g.add_edge(a, c), InvariantError);
  g.add_edge_unchecked(a, c);
  auto report = validate_geometry(g);
  CHECK_FALSE(report.passed());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("joins levels") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate_geometry flags uncovered vertices and shared pairs") {
  Geometry g;
  VertexId b = g.add_vertex(Level::line);
  (void)b;
  CHECK_FALSE(validate_geometry(g).passed());  // a line in no flag

  // two lines through two common points
  Geometry g2;
  VertexId c1 = g2.add_vertex(Level::point);
  VertexId c2 = g2.add_vertex(Level::point);
  VertexId b1 = g2.add_vertex(Level::line);
  VertexId b2 = g2.add_vertex(Level::line);
  VertexId a = g2.add_vertex(Level::plane);
  for (VertexId bb : {b1, b2}) {
    g2.add_edge(a, bb);
    g2.add_edge(bb, c1);
    g2.add_edge(bb, c2);
  }
  auto report = validate_geometry(g2);
  CHECK_FALSE(report.passed());
  bool share_points = false;
  for (const auto& v : report.violations) {
    if (v.find("share") != std::string::npos) share_points = true;
  }
  CHECK(share_points);
}

TEST_CASE("apply_operation keeps audits clean over random colourless builds") {
  std::mt19937_64 rng(5150);
  for (int run = 0; run < 4; ++run) {
    auto [g, f] = new_flag_geometry();
    std::vector<Flag> flags{f};
    for (int step = 0; step < 40; ++step) {
      Letter s = kAllLetters[rng() % 6];
      Flag target = flags[rng() % flags.size()];
      Flag h = g.apply_operation(target, s);
      flags.push_back(h);
      REQUIRE(validate_geometry(g).passed());
    }
    CHECK(closed_reduced_path_audit(g, 6).passed());
  }
}

TEST_CASE("apply_operation keeps the universal axioms over random colored builds") {
  std::mt19937_64 rng(31337);
  for (int k : {2, 3, 4}) {
    auto [g, f] = new_flag_geometry(ColorSpec::cyclic(k), 0, 0);
    std::vector<Flag> flags{f};
    for (int step = 0; step < 60; ++step) {
      Letter s = kAllLetters[rng() % 3];
      Flag target = flags[rng() % flags.size()];
      ColorChoice choice;
      if (s == Letter::L1) {
        choice.line = (rng() % 2) ? LineColorChoice::same : LineColorChoice::predecessor;
      } else if (s == Letter::L2 && (rng() % 2)) {
        const auto& pts = g.down(target.line);
        choice.exceptional = pts[rng() % pts.size()];
      }
      Flag h = g.apply_operation(target, s, choice);
      flags.push_back(h);
      REQUIRE(validate_geometry(g).passed());
      REQUIRE(audit_universal_axioms(g).passed());
    }
  }
}
