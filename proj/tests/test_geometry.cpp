#include "rectilink/geometry.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rectilink;

namespace {

RectilinearPolygon square(Coord x0, Coord y0, Coord x1, Coord y1) {
  return RectilinearPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

// The single-obstacle domain used throughout the suite: outer (0,0)-(100,100),
// obstacle square (40,40)-(60,60), source (10,50).
Domain d1() {
  Domain d;
  d.outer = Rect{0, 0, 100, 100};
  d.obstacles = {square(40, 40, 60, 60)};
  d.source = Point{10, 50};
  return d;
}

TEST(ValidateDomain, AcceptsD1) {
  auto res = validate_domain(d1());
  ASSERT_TRUE(res.ok()) << res.error.message;
  EXPECT_EQ(res.valid->n(), 4u);
  EXPECT_EQ(res.valid->h(), 1u);
}

TEST(ValidateDomain, RejectsDiagonalEdge) {
  Domain d = d1();
  d.obstacles[0].vertices = {{0, 0}, {5, 5}, {5, 0}, {0, 5}};
  auto res = validate_domain(d);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.error.code, DomainErrorCode::NotRectilinear);
}

TEST(ValidateDomain, RejectsSharedXAcrossObstacles) {
  Domain d = d1();
  // Second obstacle reuses x=40: together with the first square, three or
  // more vertices share that x-coordinate.
  d.obstacles.push_back(square(40, 70, 50, 80));
  auto res = validate_domain(d);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.error.code, DomainErrorCode::GeneralPositionViolated);
  EXPECT_EQ(res.error.offending, 40);
}

TEST(ValidateDomain, RejectsOverlapAndNesting) {
  {
    Domain d = d1();
    d.obstacles.push_back(square(50, 30, 70, 52));  // crosses the square
    auto res = validate_domain(d);
    ASSERT_FALSE(res.ok());
    EXPECT_EQ(res.error.code, DomainErrorCode::ObstaclesOverlap);
  }
  {
    Domain d = d1();
    d.obstacles.push_back(square(45, 44, 55, 56));  // nested inside
    auto res = validate_domain(d);
    ASSERT_FALSE(res.ok());
    EXPECT_EQ(res.error.code, DomainErrorCode::ObstaclesOverlap);
  }
}

TEST(ValidateDomain, RejectsSelfIntersection) {
  Domain d = d1();
  // Figure-eight-ish rectilinear cycle that crosses itself.
  d.obstacles[0].vertices = {{40, 40}, {60, 40}, {60, 55}, {45, 55},
                             {45, 35}, {55, 35}, {55, 60}, {40, 60}};
  auto res = validate_domain(d);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.error.code, DomainErrorCode::SelfIntersecting);
}

TEST(ValidateDomain, RejectsSourceInsideObstacle) {
  Domain d = d1();
  d.source = Point{50, 50};
  auto res = validate_domain(d);
  ASSERT_FALSE(res.ok());
  // (50,50) shares no coordinate with obstacle vertices, so this is the
  // inside-obstacle report, not a general-position one.
  EXPECT_EQ(res.error.code, DomainErrorCode::SourceInsideObstacle);
}

TEST(ValidateDomain, AcceptsClockwiseInputByNormalizing) {
  Domain d = d1();
  std::reverse(d.obstacles[0].vertices.begin(), d.obstacles[0].vertices.end());
  auto res = validate_domain(d);
  ASSERT_TRUE(res.ok());
  EXPECT_GT(res.valid->obstacles()[0].twice_signed_area(), 0);
}

TEST(PointInFreeSpace, D1Cases) {
  auto res = validate_domain(d1());
  ASSERT_TRUE(res.ok());
  EXPECT_FALSE(point_in_free_space(*res.valid, {50, 50}));  // obstacle center
  EXPECT_TRUE(point_in_free_space(*res.valid, {40, 50}));   // boundary is free
  EXPECT_TRUE(point_in_free_space(*res.valid, {90, 50}));
  EXPECT_TRUE(point_in_free_space(*res.valid, {0, 0}));     // outer corner
  EXPECT_FALSE(point_in_free_space(*res.valid, {101, 50}));
}

TEST(MakeGeneralPosition, ScalesCleanDomain) {
  auto res = make_general_position(d1());
  ASSERT_TRUE(res.ok()) << res.error.message;
  // n = 4, so everything is scaled by 2*(4+2) = 12 and nothing else moves.
  EXPECT_EQ(res.repaired->outer, (Rect{0, 0, 1200, 1200}));
  EXPECT_EQ(res.repaired->source, (Point{120, 600}));
  EXPECT_EQ(res.repaired->obstacles[0].vertices[0], (Point{480, 480}));
}

TEST(MakeGeneralPosition, SpreadsSharedCoordinates) {
  Domain d = d1();
  d.obstacles.push_back(square(40, 70, 50, 80));  // shares x=40
  ASSERT_FALSE(validate_domain(d).ok());
  auto res = make_general_position(d);
  ASSERT_TRUE(res.ok()) << res.error.message;
  auto check = validate_domain(*res.repaired);
  ASSERT_TRUE(check.ok()) << check.error.message;
  // All previously shared coordinates now live within one original unit:
  // n = 8, scale = 20, and the two perturbed x values sit in [800, 820).
  std::vector<Coord> xs;
  for (const auto& poly : res.repaired->obstacles) {
    for (const auto& p : poly.vertices) {
      if (p.x >= 800 && p.x < 820) xs.push_back(p.x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  EXPECT_EQ(xs.size(), 2u);  // two distinct values, both from original x=40
}

TEST(MakeGeneralPosition, TouchingObstaclesAreInfeasible) {
  Domain d = d1();
  d.obstacles.push_back(square(60, 45, 70, 55));  // shares part of edge x=60
  auto res = make_general_position(d);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.error.code, DomainErrorCode::OffsetInfeasible);
}

TEST(MakeGeneralPosition, RandomizedRepairAlwaysValidates) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    Domain d;
    d.outer = Rect{0, 0, 400, 400};
    std::uniform_int_distribution<Coord> coord(1, 39);
    // A loose grid of squares, many sharing coordinate classes.
    for (Coord gx = 0; gx < 4; ++gx) {
      for (Coord gy = 0; gy < 4; ++gy) {
        if ((rng() & 3) == 0) continue;
        Coord x0 = gx * 100 + coord(rng), y0 = gy * 100 + coord(rng);
        Coord w = 1 + static_cast<Coord>(rng() % 40);
        Coord ht = 1 + static_cast<Coord>(rng() % 40);
        d.obstacles.push_back(square(x0, y0, x0 + w, y0 + ht));
      }
    }
    d.source = Point{50, 399};
    while (true) {
      Point s{static_cast<Coord>(rng() % 399 + 1),
              static_cast<Coord>(rng() % 399 + 1)};
      bool inside = false;
      for (const auto& o : d.obstacles) {
        if (detail::strictly_inside_polygon(o, s) ||
            detail::on_polygon_boundary(o, s))
          inside = true;
      }
      if (!inside) {
        d.source = s;
        break;
      }
    }
    auto res = make_general_position(d);
    if (!res.ok()) {
      EXPECT_EQ(res.error.code, DomainErrorCode::OffsetInfeasible);
      continue;
    }
    EXPECT_TRUE(validate_domain(*res.repaired).ok());
  }
}

TEST(Transpose, RoundTripsAndStaysValid) {
  Domain d = d1();
  Domain tt = transpose(transpose(d));
  ASSERT_EQ(tt.obstacles.size(), d.obstacles.size());
  EXPECT_EQ(tt.source, d.source);
  EXPECT_EQ(tt.outer, d.outer);
  auto res = validate_domain(transpose(d));
  ASSERT_TRUE(res.ok()) << res.error.message;
}

}  // namespace
