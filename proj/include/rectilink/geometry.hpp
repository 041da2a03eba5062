#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rectilink/base.hpp"

namespace rectilink {

struct Point {
  Coord x = 0;
  Coord y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Rect {
  Coord xmin = 0, ymin = 0, xmax = 0, ymax = 0;
  bool contains(const Point& p) const {
    return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax;
  }
  bool contains_strict(const Point& p) const {
    return xmin < p.x && p.x < xmax && ymin < p.y && p.y < ymax;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Simple rectilinear polygon given as a vertex cycle. Obstacles are stored
/// counterclockwise (interior on the left of each directed edge).
struct RectilinearPolygon {
  std::vector<Point> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point& at(std::size_t i) const { return vertices[i % vertices.size()]; }

  /// Twice the signed area; positive for counterclockwise cycles.
  long long twice_signed_area() const {
    long long a = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Point& p = vertices[i];
      const Point& q = at(i + 1);
      a += static_cast<long long>(p.x) * q.y - static_cast<long long>(q.x) * p.y;
    }
    return a;
  }
};

struct Domain {
  Rect outer;
  std::vector<RectilinearPolygon> obstacles;
  Point source;

  std::size_t total_vertices() const {
    std::size_t n = 0;
    for (const auto& o : obstacles) n += o.size();
    return n;
  }
};

enum class DomainErrorCode {
  None,
  BadOuter,
  CoordinateOverflow,
  NotRectilinear,
  SelfIntersecting,
  ObstaclesOverlap,
  ObstacleOutsideOuter,
  SourceOutsideOuter,
  SourceInsideObstacle,
  GeneralPositionViolated,
  OffsetInfeasible,
};

struct DomainError {
  DomainErrorCode code = DomainErrorCode::None;
  std::string message;
  Coord offending = 0;  // offending coordinate for general-position reports
};

inline const char* to_string(DomainErrorCode c) {
  switch (c) {
    case DomainErrorCode::None: return "ok";
    case DomainErrorCode::BadOuter: return "BadOuter";
    case DomainErrorCode::CoordinateOverflow: return "CoordinateOverflow";
    case DomainErrorCode::NotRectilinear: return "NotRectilinear";
    case DomainErrorCode::SelfIntersecting: return "SelfIntersecting";
    case DomainErrorCode::ObstaclesOverlap: return "ObstaclesOverlap";
    case DomainErrorCode::ObstacleOutsideOuter: return "ObstacleOutsideOuter";
    case DomainErrorCode::SourceOutsideOuter: return "SourceOutsideOuter";
    case DomainErrorCode::SourceInsideObstacle: return "SourceInsideObstacle";
    case DomainErrorCode::GeneralPositionViolated: return "GeneralPositionViolated";
    case DomainErrorCode::OffsetInfeasible: return "OffsetInfeasible";
  }
  return "?";
}

namespace detail {

struct VEdge {  // vertical obstacle edge
  Coord x;
  Interval y;         // y.lo < y.hi
  int obstacle;
  std::size_t lower_vertex;  // vertex index of the lower endpoint
  std::size_t upper_vertex;
  bool interior_right;  // obstacle interior on the +x side of the edge
};

struct HEdge {  // horizontal obstacle edge
  Coord y;
  Interval x;
  int obstacle;
  bool interior_above;  // obstacle interior on the +y side
};

struct EdgeSoup {
  std::vector<VEdge> vedges;
  std::vector<HEdge> hedges;
};

/// Splits the (CCW-normalized) obstacles into axis-parallel edge lists.
inline EdgeSoup make_edge_soup(const Domain& d) {
  EdgeSoup soup;
  for (int oi = 0; oi < static_cast<int>(d.obstacles.size()); ++oi) {
    const auto& poly = d.obstacles[oi].vertices;
    const std::size_t k = poly.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Point& p = poly[i];
      const Point& q = poly[(i + 1) % k];
      if (p.x == q.x) {
        // CCW: going up => interior left (-x); going down => interior right.
        bool up = q.y > p.y;
        soup.vedges.push_back(VEdge{p.x,
                                    Interval{std::min(p.y, q.y), std::max(p.y, q.y)},
                                    oi,
                                    up ? i : (i + 1) % k,
                                    up ? (i + 1) % k : i,
                                    !up});
      } else {
        // CCW: going right => interior above (+y)? interior is on the LEFT of
        // the direction of travel, so going right means interior above is
        // false (left of +x is +y ... left of east is north). Going east,
        // left = north = above.
        bool east = q.x > p.x;
        soup.hedges.push_back(HEdge{p.y,
                                    Interval{std::min(p.x, q.x), std::max(p.x, q.x)},
                                    oi, east});
      }
    }
  }
  return soup;
}

}  // namespace detail

/// A Domain that passed validate_domain. Construction is restricted so the
/// algorithms can assume all invariants (rectilinearity, disjointness,
/// general position) hold.
class ValidatedDomain {
 public:
  const Domain& domain() const { return dom_; }
  const Rect& outer() const { return dom_.outer; }
  const std::vector<RectilinearPolygon>& obstacles() const {
    return dom_.obstacles;
  }
  const Point& source() const { return dom_.source; }
  std::size_t n() const { return n_; }
  std::size_t h() const { return dom_.obstacles.size(); }

 private:
  friend struct ValidationAccess;
  Domain dom_;
  std::size_t n_ = 0;
};

struct ValidationResult {
  std::optional<ValidatedDomain> valid;
  DomainError error;
  bool ok() const { return valid.has_value(); }
};

struct ValidationAccess {
  static ValidatedDomain wrap(Domain d) {
    ValidatedDomain v;
    v.n_ = d.total_vertices();
    v.dom_ = std::move(d);
    return v;
  }
};

namespace detail {

inline constexpr Coord kCoordCap = Coord{1} << 40;

inline std::optional<DomainError> check_shapes(Domain& d) {
  if (d.outer.xmin >= d.outer.xmax || d.outer.ymin >= d.outer.ymax) {
    return DomainError{DomainErrorCode::BadOuter, "outer rectangle is empty"};
  }
  auto cap = [](Coord c) { return c > kCoordCap || c < -kCoordCap; };
  if (cap(d.outer.xmin) || cap(d.outer.xmax) || cap(d.outer.ymin) ||
      cap(d.outer.ymax) || cap(d.source.x) || cap(d.source.y)) {
    return DomainError{DomainErrorCode::CoordinateOverflow,
                       "coordinate exceeds 2^40"};
  }
  for (auto& poly : d.obstacles) {
    auto& v = poly.vertices;
    if (v.size() < 4 || v.size() % 2 != 0) {
      return DomainError{DomainErrorCode::NotRectilinear,
                         "obstacle needs an even vertex count >= 4"};
    }
    for (const Point& p : v) {
      if (cap(p.x) || cap(p.y)) {
        return DomainError{DomainErrorCode::CoordinateOverflow,
                           "coordinate exceeds 2^40"};
      }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point& p = v[i];
      const Point& q = v[(i + 1) % v.size()];
      const Point& r = v[(i + 2) % v.size()];
      if (p == q) {
        return DomainError{DomainErrorCode::NotRectilinear, "zero-length edge"};
      }
      if (p.x != q.x && p.y != q.y) {
        return DomainError{DomainErrorCode::NotRectilinear,
                           "edge is neither horizontal nor vertical"};
      }
      bool first_vertical = p.x == q.x;
      bool second_vertical = q.x == r.x;
      if (q == r) continue;  // reported on its own turn
      if (first_vertical == second_vertical) {
        return DomainError{DomainErrorCode::NotRectilinear,
                           "consecutive edges do not alternate"};
      }
    }
    if (poly.twice_signed_area() < 0) {
      std::reverse(v.begin(), v.end());  // normalize to counterclockwise
    }
  }
  return std::nullopt;
}

/// General position: every x hosts at most one vertical edge, every y at most
/// one horizontal edge, and the source shares no coordinate with any obstacle
/// vertex. (This is the operational form of "no three vertices of
/// obstacles + source share an x- or y-coordinate": each vertical edge
/// already contributes a coordinate pair.)
inline std::optional<DomainError> check_general_position(const Domain& d,
                                                         const EdgeSoup& soup) {
  std::map<Coord, int> xs, ys;
  for (const auto& e : soup.vedges) xs[e.x]++;
  for (const auto& e : soup.hedges) ys[e.y]++;
  for (const auto& [x, c] : xs) {
    if (c > 1 || x == d.source.x) {
      return DomainError{DomainErrorCode::GeneralPositionViolated,
                         "shared x-coordinate", x};
    }
  }
  for (const auto& [y, c] : ys) {
    if (c > 1 || y == d.source.y) {
      return DomainError{DomainErrorCode::GeneralPositionViolated,
                         "shared y-coordinate", y};
    }
  }
  return std::nullopt;
}

/// Detects proper crossings between vertical and horizontal edges by a sweep.
/// Assumes general position already holds, under which boundary contacts
/// other than shared polygon corners are impossible, so any hit is a proper
/// crossing.
inline std::optional<DomainError> check_crossings(const EdgeSoup& soup) {
  struct Ev {
    Coord x;
    int kind;  // 0 = h starts, 1 = vertical edge, 2 = h ends
    std::size_t idx;
  };
  std::vector<Ev> evs;
  evs.reserve(soup.hedges.size() * 2 + soup.vedges.size());
  for (std::size_t i = 0; i < soup.hedges.size(); ++i) {
    evs.push_back(Ev{soup.hedges[i].x.lo, 0, i});
    evs.push_back(Ev{soup.hedges[i].x.hi, 2, i});
  }
  for (std::size_t i = 0; i < soup.vedges.size(); ++i) {
    evs.push_back(Ev{soup.vedges[i].x, 1, i});
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.kind < b.kind;  // start, query, end: closed x-span minus corners
  });
  // Active horizontal edges keyed by y. With general position the y values
  // are unique.
  std::map<Coord, std::size_t> active;
  for (const Ev& ev : evs) {
    if (ev.kind == 0) {
      active.emplace(soup.hedges[ev.idx].y, ev.idx);
    } else if (ev.kind == 2) {
      active.erase(soup.hedges[ev.idx].y);
    } else {
      const VEdge& v = soup.vedges[ev.idx];
      auto it = active.upper_bound(v.y.lo);
      if (it != active.end() && it->first < v.y.hi) {
        const HEdge& h = soup.hedges[it->second];
        bool same = h.obstacle == v.obstacle;
        // A horizontal edge ending exactly at this x only shares a corner,
        // not an interior point; with GP it would have equal endpoint coords,
        // which GP excludes for distinct edges, so this is a real crossing.
        return DomainError{same ? DomainErrorCode::SelfIntersecting
                                : DomainErrorCode::ObstaclesOverlap,
                           same ? "obstacle boundary self-crosses"
                                : "obstacle boundaries cross"};
      }
    }
  }
  return std::nullopt;
}

/// With crossings excluded, obstacles are disjoint unless nested. For every
/// obstacle take the lower endpoint of its leftmost vertical edge and shoot a
/// ray downward from just inside; odd parity of other obstacles' horizontal
/// edges below means the obstacle sits inside another one.
inline std::optional<DomainError> check_nesting(const Domain& d,
                                                const EdgeSoup& soup) {
  struct Ev {
    Coord x;
    int kind;  // 0 = h ends (remove), 1 = h starts (add), 2 = query
    std::size_t idx;
  };
  // Leftmost vertical edge of each obstacle.
  std::vector<std::size_t> leftmost(d.obstacles.size(),
                                    std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < soup.vedges.size(); ++i) {
    auto& slot = leftmost[soup.vedges[i].obstacle];
    if (slot == std::numeric_limits<std::size_t>::max() ||
        soup.vedges[i].x < soup.vedges[slot].x) {
      slot = i;
    }
  }
  std::vector<Ev> evs;
  for (std::size_t i = 0; i < soup.hedges.size(); ++i) {
    evs.push_back(Ev{soup.hedges[i].x.lo, 1, i});
    evs.push_back(Ev{soup.hedges[i].x.hi, 0, i});
  }
  for (std::size_t oi = 0; oi < leftmost.size(); ++oi) {
    evs.push_back(Ev{soup.vedges[leftmost[oi]].x, 2, leftmost[oi]});
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.kind < b.kind;  // remove enders, add starters, then query
  });
  std::set<Coord> active;  // y of active horizontal edges (unique under GP)
  for (const Ev& ev : evs) {
    if (ev.kind == 0) {
      active.erase(soup.hedges[ev.idx].y);
    } else if (ev.kind == 1) {
      active.insert(soup.hedges[ev.idx].y);
    } else {
      const VEdge& v = soup.vedges[ev.idx];
      // Count active walls strictly below the lower endpoint. The obstacle's
      // own wall at y.lo starts at this very x and is excluded by strictness.
      std::size_t below = static_cast<std::size_t>(
          std::distance(active.begin(), active.lower_bound(v.y.lo)));
      if (below % 2 == 1) {
        return DomainError{DomainErrorCode::ObstaclesOverlap,
                           "obstacle nested inside another obstacle"};
      }
    }
  }
  return std::nullopt;
}

/// Exact point-vs-obstacle classification by crossing parity (half-open rule
/// on x so vertices are not double counted).
inline bool strictly_inside_polygon(const RectilinearPolygon& poly,
                                    const Point& p) {
  bool inside = false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    if (a.y == b.y) {  // horizontal edge
      if (a.y < p.y && std::min(a.x, b.x) <= p.x && p.x < std::max(a.x, b.x)) {
        inside = !inside;
      }
      if (a.y == p.y && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x)) {
        return false;  // on boundary
      }
    } else if (a.x == p.x && std::min(a.y, b.y) <= p.y &&
               p.y <= std::max(a.y, b.y)) {
      return false;  // on vertical edge
    }
  }
  return inside;
}

inline bool on_polygon_boundary(const RectilinearPolygon& poly, const Point& p) {
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    if (a.y == b.y) {
      if (a.y == p.y && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x))
        return true;
    } else {
      if (a.x == p.x && std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y))
        return true;
    }
  }
  return false;
}

}  // namespace detail

/// Validates all Domain invariants and returns the tagged domain, or the
/// first violation found. Obstacle orientation is normalized to
/// counterclockwise rather than rejected.
inline ValidationResult validate_domain(Domain d) {
  ValidationResult res;
  if (auto err = detail::check_shapes(d)) {
    res.error = *err;
    return res;
  }
  auto soup = detail::make_edge_soup(d);
  for (const auto& poly : d.obstacles) {
    for (const Point& p : poly.vertices) {
      if (!d.outer.contains_strict(p)) {
        res.error = DomainError{DomainErrorCode::ObstacleOutsideOuter,
                                "obstacle not strictly inside the outer rectangle"};
        return res;
      }
    }
  }
  if (auto err = detail::check_general_position(d, soup)) {
    res.error = *err;
    return res;
  }
  if (auto err = detail::check_crossings(soup)) {
    res.error = *err;
    return res;
  }
  if (auto err = detail::check_nesting(d, soup)) {
    res.error = *err;
    return res;
  }
  if (!d.outer.contains_strict(d.source)) {
    res.error =
        DomainError{DomainErrorCode::SourceOutsideOuter,
                    "source must be strictly inside the outer rectangle"};
    return res;
  }
  for (const auto& poly : d.obstacles) {
    if (detail::strictly_inside_polygon(poly, d.source)) {
      res.error = DomainError{DomainErrorCode::SourceInsideObstacle,
                              "source lies inside an obstacle"};
      return res;
    }
  }
  res.valid = ValidationAccess::wrap(std::move(d));
  return res;
}

/// True iff p is inside the outer rectangle and not strictly inside any
/// obstacle; obstacle boundaries count as free space.
inline bool point_in_free_space(const ValidatedDomain& d, const Point& p) {
  if (!d.outer().contains(p)) return false;
  for (const auto& poly : d.obstacles()) {
    if (detail::strictly_inside_polygon(poly, p)) return false;
  }
  return true;
}

/// Swaps the two axes of a domain (obstacle orientation is re-normalized by
/// reversing the cycles). Building the horizontal decomposition of d is the
/// same as building the vertical decomposition of transpose(d).
inline Domain transpose(const Domain& d) {
  Domain t;
  t.outer = Rect{d.outer.ymin, d.outer.xmin, d.outer.ymax, d.outer.xmax};
  t.source = Point{d.source.y, d.source.x};
  t.obstacles.reserve(d.obstacles.size());
  for (const auto& poly : d.obstacles) {
    RectilinearPolygon tp;
    tp.vertices.reserve(poly.size());
    for (auto it = poly.vertices.rbegin(); it != poly.vertices.rend(); ++it) {
      tp.vertices.push_back(Point{it->y, it->x});
    }
    t.obstacles.push_back(std::move(tp));
  }
  return t;
}

namespace detail {

/// Exact contact scan used by make_general_position, which cannot assume
/// general position. Any shared boundary point between two obstacles (or a
/// self-touch) makes the index-offset repair unsafe, because an infinitesimal
/// perturbation could flip which side of an edge another edge lies on.
inline bool has_boundary_contact(const Domain& d, const EdgeSoup& soup) {
  // Collinear overlaps / repeated vertices.
  {
    std::map<Coord, std::vector<std::size_t>> byx;
    for (std::size_t i = 0; i < soup.vedges.size(); ++i)
      byx[soup.vedges[i].x].push_back(i);
    for (auto& [x, ids] : byx) {
      std::vector<Interval> ivs;
      for (auto i : ids) ivs.push_back(soup.vedges[i].y);
      std::sort(ivs.begin(), ivs.end(),
                [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
      for (std::size_t i = 1; i < ivs.size(); ++i) {
        if (ivs[i].lo <= ivs[i - 1].hi) return true;
      }
    }
    std::map<Coord, std::vector<std::size_t>> byy;
    for (std::size_t i = 0; i < soup.hedges.size(); ++i)
      byy[soup.hedges[i].y].push_back(i);
    for (auto& [y, ids] : byy) {
      std::vector<Interval> ivs;
      for (auto i : ids) ivs.push_back(soup.hedges[i].x);
      std::sort(ivs.begin(), ivs.end(),
                [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
      for (std::size_t i = 1; i < ivs.size(); ++i) {
        if (ivs[i].lo <= ivs[i - 1].hi) return true;
      }
    }
  }
  // Perpendicular contacts: sweep with closed x-span actives; a hit is legal
  // only when it is the shared corner of two edges of the same obstacle.
  struct Ev {
    Coord x;
    int kind;  // 0 = h starts, 1 = vertical, 2 = h ends
    std::size_t idx;
  };
  std::vector<Ev> evs;
  for (std::size_t i = 0; i < soup.hedges.size(); ++i) {
    evs.push_back(Ev{soup.hedges[i].x.lo, 0, i});
    evs.push_back(Ev{soup.hedges[i].x.hi, 2, i});
  }
  for (std::size_t i = 0; i < soup.vedges.size(); ++i)
    evs.push_back(Ev{soup.vedges[i].x, 1, i});
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.kind < b.kind;
  });
  std::multimap<Coord, std::size_t> active;
  for (const Ev& ev : evs) {
    if (ev.kind == 0) {
      active.emplace(soup.hedges[ev.idx].y, ev.idx);
    } else if (ev.kind == 2) {
      auto range = active.equal_range(soup.hedges[ev.idx].y);
      for (auto it = range.first; it != range.second; ++it) {
        if (it->second == ev.idx) {
          active.erase(it);
          break;
        }
      }
    } else {
      const VEdge& v = soup.vedges[ev.idx];
      for (auto it = active.lower_bound(v.y.lo);
           it != active.end() && it->first <= v.y.hi; ++it) {
        const HEdge& h = soup.hedges[it->second];
        Point contact{v.x, h.y};
        bool corner_of_v = contact.y == v.y.lo || contact.y == v.y.hi;
        bool corner_of_h = contact.x == h.x.lo || contact.x == h.x.hi;
        if (!(corner_of_v && corner_of_h && h.obstacle == v.obstacle)) {
          return true;
        }
      }
    }
  }
  // Same vertex visited twice (between obstacles, or a pinch in one).
  std::set<std::pair<Coord, Coord>> seen;
  for (const auto& poly : d.obstacles) {
    for (const Point& p : poly.vertices) {
      if (!seen.insert({p.x, p.y}).second) return true;
    }
  }
  for (const auto& poly : d.obstacles) {
    if (on_polygon_boundary(poly, d.source)) return true;
  }
  return false;
}

}  // namespace detail

struct RepairResult {
  std::optional<Domain> repaired;
  DomainError error;
  bool ok() const { return repaired.has_value(); }
};

/// Deterministically rescales the domain by 2*(n+2) and spreads coordinate
/// classes that violate general position by small index-based offsets. The
/// combinatorial structure of the free space is preserved; contacts between
/// obstacles are not repairable and yield OffsetInfeasible.
inline RepairResult make_general_position(Domain d) {
  RepairResult res;
  if (auto err = detail::check_shapes(d)) {
    res.error = *err;
    return res;
  }
  auto soup = detail::make_edge_soup(d);
  for (const auto& poly : d.obstacles) {
    for (const Point& p : poly.vertices) {
      if (!d.outer.contains_strict(p)) {
        res.error = DomainError{DomainErrorCode::ObstacleOutsideOuter,
                                "obstacle not strictly inside the outer rectangle"};
        return res;
      }
    }
  }
  if (!d.outer.contains_strict(d.source)) {
    res.error = DomainError{DomainErrorCode::SourceOutsideOuter,
                            "source must be strictly inside the outer rectangle"};
    return res;
  }
  if (detail::has_boundary_contact(d, soup)) {
    res.error = DomainError{DomainErrorCode::OffsetInfeasible,
                            "obstacles touch; perturbation cannot separate them"};
    return res;
  }
  for (const auto& poly : d.obstacles) {
    if (detail::strictly_inside_polygon(poly, d.source)) {
      res.error = DomainError{DomainErrorCode::SourceInsideObstacle,
                              "source lies inside an obstacle"};
      return res;
    }
  }

  const Coord n = static_cast<Coord>(d.total_vertices());
  const Coord scale = 2 * (n + 2);
  Domain out = d;
  out.outer = Rect{d.outer.xmin * scale, d.outer.ymin * scale,
                   d.outer.xmax * scale, d.outer.ymax * scale};
  out.source = Point{d.source.x * scale, d.source.y * scale};
  for (auto& poly : out.obstacles) {
    for (auto& p : poly.vertices) {
      p.x *= scale;
      p.y *= scale;
    }
  }

  // Spread every x-class with more than one member (vertical edges plus the
  // source, which carries the diagonal through s). Members are ordered by
  // their span so the assignment is deterministic.
  struct Member {
    Interval span;
    int obstacle;   // -1 for the source
    std::size_t a, b;  // vertex indices to shift (ignored for the source)
  };
  auto spread = [&](auto&& members_of, bool is_x) {
    std::map<Coord, std::vector<Member>> classes = members_of();
    for (auto& [c, ms] : classes) {
      if (ms.size() < 2) continue;
      std::sort(ms.begin(), ms.end(), [](const Member& a, const Member& b) {
        if (a.span.lo != b.span.lo) return a.span.lo < b.span.lo;
        if (a.span.hi != b.span.hi) return a.span.hi < b.span.hi;
        return a.obstacle < b.obstacle;
      });
      Coord off = 0;
      for (const Member& m : ms) {
        if (m.obstacle < 0) {
          (is_x ? out.source.x : out.source.y) += off;
        } else {
          auto& vs = out.obstacles[m.obstacle].vertices;
          if (is_x) {
            vs[m.a].x += off;
            vs[m.b].x += off;
          } else {
            vs[m.a].y += off;
            vs[m.b].y += off;
          }
        }
        ++off;
      }
    }
  };
  spread(
      [&] {
        std::map<Coord, std::vector<Member>> cls;
        for (const auto& e : soup.vedges) {
          cls[e.x].push_back(Member{e.y, e.obstacle, e.lower_vertex, e.upper_vertex});
        }
        cls[d.source.x].push_back(
            Member{Interval{d.source.y, d.source.y}, -1, 0, 0});
        return cls;
      },
      true);
  spread(
      [&] {
        std::map<Coord, std::vector<Member>> cls;
        for (int oi = 0; oi < static_cast<int>(d.obstacles.size()); ++oi) {
          const auto& poly = d.obstacles[oi].vertices;
          for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point& p = poly[i];
            const Point& q = poly[(i + 1) % poly.size()];
            if (p.y == q.y) {
              cls[p.y].push_back(Member{
                  Interval{std::min(p.x, q.x), std::max(p.x, q.x)}, oi, i,
                  (i + 1) % poly.size()});
            }
          }
        }
        cls[d.source.y].push_back(
            Member{Interval{d.source.x, d.source.x}, -1, 0, 0});
        return cls;
      },
      false);

  ValidationResult check = validate_domain(out);
  if (!check.ok()) {
    res.error = DomainError{DomainErrorCode::OffsetInfeasible,
                            std::string("perturbation failed re-validation: ") +
                                check.error.message};
    return res;
  }
  res.repaired = std::move(out);
  return res;
}

}  // namespace rectilink
