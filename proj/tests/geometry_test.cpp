#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrrp/geometry.hpp"

using namespace rrrp;

TEST_CASE("vec2 basics") {
  Vec2 a{3.0, 4.0};
  CHECK(norm(a) == doctest::Approx(5.0));
  CHECK(dist(a, Vec2{0.0, 0.0}) == doctest::Approx(5.0));
  Vec2 b = a + Vec2{1.0, -1.0};
  CHECK(b.x == doctest::Approx(4.0));
  CHECK(b.y == doctest::Approx(3.0));
  Vec2 c = 2.0 * a;
  CHECK(c.x == doctest::Approx(6.0));
  CHECK(heading_deg({0, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(heading_deg({0, 0}, {0, 5}) == doctest::Approx(90.0));
  CHECK(heading_deg({0, 0}, {-1, 0}) == doctest::Approx(180.0));
  CHECK(heading_deg({0, 0}, {0, -1}) == doctest::Approx(270.0));
}

TEST_CASE("tour validation") {
  CHECK_THROWS_AS(Tour({{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Tour({{0, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Tour({{0, 0}, {1, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("square tour parametrization") {
  Tour t({{0, 0}, {100, 0}, {100, 100}, {0, 100}});
  CHECK(t.length() == doctest::Approx(400.0));
  CHECK(t.node_arc(0) == doctest::Approx(0.0));
  CHECK(t.node_arc(2) == doctest::Approx(200.0));

  Vec2 p = t.point_at(50.0);
  CHECK(p.x == doctest::Approx(50.0));
  CHECK(p.y == doctest::Approx(0.0));
  p = t.point_at(150.0);
  CHECK(p.x == doctest::Approx(100.0));
  CHECK(p.y == doctest::Approx(50.0));
  p = t.point_at(450.0);  // wraps
  CHECK(p.x == doctest::Approx(50.0));
  CHECK(p.y == doctest::Approx(0.0));
  p = t.point_at(-10.0);
  CHECK(p.x == doctest::Approx(0.0));
  CHECK(p.y == doctest::Approx(10.0));

  CHECK(t.wrap(-10.0) == doctest::Approx(390.0));
  CHECK(t.wrap(400.0) == doctest::Approx(0.0));

  CHECK(t.segment_of(0.0) == 0);
  CHECK(t.segment_of(99.999) == 0);
  CHECK(t.segment_of(100.0) == 1);
  CHECK(t.segment_of(399.999) == 3);

  CHECK(t.heading_at(50.0) == doctest::Approx(0.0));
  CHECK(t.heading_at(150.0) == doctest::Approx(90.0));
  CHECK(t.heading_at(250.0) == doctest::Approx(180.0));
  CHECK(t.heading_at(350.0) == doctest::Approx(270.0));

  CHECK(t.forward_to_node(350.0, 0) == doctest::Approx(50.0));
  CHECK(t.forward_to_node(0.0, 3) == doctest::Approx(300.0));
  CHECK(t.forward_to_node(100.0, 1) == doctest::Approx(0.0));

  CHECK(t.next_node_index(0.0) == 1);
  CHECK(t.next_node_index(50.0) == 1);
  CHECK(t.next_node_index(100.0) == 2);  // sitting on node 1
  CHECK(t.next_node_index(399.0) == 0);
}
