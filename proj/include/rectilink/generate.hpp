#pragma once

#include <random>
#include <string>
#include <vector>

#include "rectilink/base.hpp"
#include "rectilink/geometry.hpp"

namespace rectilink {

enum class DomainFamily : std::uint8_t {
  RandomRects,  // assorted small obstacles, h roughly n/5
  Serpentine,   // one comb obstacle: h = O(1), n unbounded, winding corridor
  Comb,         // many T-shaped teeth: h about n/8
};

inline const char* to_string(DomainFamily f) {
  switch (f) {
    case DomainFamily::RandomRects: return "random";
    case DomainFamily::Serpentine: return "serpentine";
    case DomainFamily::Comb: return "comb";
  }
  return "?";
}

struct DomainGenConfig {
  std::uint64_t seed = 1;
  std::size_t n_target = 32;
  std::size_t h_target = 4;  // used by RandomRects (cap) and Serpentine (1..4)
  DomainFamily family = DomainFamily::RandomRects;
};

namespace detail {

inline RectilinearPolygon rect_poly(Coord x0, Coord y0, Coord x1, Coord y1) {
  return RectilinearPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

// L / T / staircase obstacles give the random family higher vertex counts
// than plain rectangles. All are built inside [0,w]x[0,t] and translated.
inline RectilinearPolygon shaped_obstacle(std::mt19937_64& rng, Coord w, Coord t) {
  int kind = static_cast<int>(rng() % 3);
  RectilinearPolygon p;
  if (kind == 0 || w < 4 || t < 4) {
    p = rect_poly(0, 0, w, t);
  } else if (kind == 1) {  // L
    Coord mx = 1 + static_cast<Coord>(rng() % (w - 2));
    Coord my = 1 + static_cast<Coord>(rng() % (t - 2));
    p.vertices = {{0, 0}, {w, 0}, {w, my}, {mx, my}, {mx, t}, {0, t}};
  } else {  // T
    Coord a = 1 + static_cast<Coord>(rng() % (w - 3));
    Coord b = a + 1 + static_cast<Coord>(rng() % (w - a - 1));
    Coord my = 1 + static_cast<Coord>(rng() % (t - 2));
    p.vertices = {{a, 0}, {b, 0}, {b, my}, {w, my}, {w, t}, {0, t}, {0, my}, {a, my}};
  }
  return p;
}

inline void translate(RectilinearPolygon& p, Coord dx, Coord dy) {
  for (auto& v : p.vertices) {
    v.x += dx;
    v.y += dy;
  }
}

}  // namespace detail

/// Deterministic domain generator. The result always passes validate_domain
/// (shared coordinates introduced by random placement are repaired by
/// make_general_position as the final step).
inline ValidatedDomain generate_domain(const DomainGenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ull + 12345);
  Domain d;
  switch (cfg.family) {
    case DomainFamily::RandomRects: {
      std::size_t h = std::max<std::size_t>(
          1, std::min(cfg.h_target, std::max<std::size_t>(1, cfg.n_target / 4)));
      // Coarse layout grid; each obstacle gets its own slot so disjointness
      // holds by construction.
      std::size_t side = 1;
      while (side * side < h) ++side;
      const Coord slot = 40;
      const Coord W = static_cast<Coord>(side) * slot + 20;
      d.outer = Rect{0, 0, W, W};
      std::vector<std::size_t> slots(side * side);
      for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
      std::shuffle(slots.begin(), slots.end(), rng);
      std::size_t remaining_vertices = cfg.n_target;
      for (std::size_t i = 0; i < h; ++i) {
        Coord gx = static_cast<Coord>(slots[i] % side) * slot + 12;
        Coord gy = static_cast<Coord>(slots[i] / side) * slot + 12;
        Coord w = 6 + static_cast<Coord>(rng() % 20);
        Coord t = 6 + static_cast<Coord>(rng() % 20);
        auto poly = detail::shaped_obstacle(rng, w, t);
        if (poly.size() > remaining_vertices && i > 0) {
          poly = detail::rect_poly(0, 0, w, t);
        }
        remaining_vertices -= std::min(remaining_vertices, poly.size());
        detail::translate(poly, gx, gy);
        d.obstacles.push_back(std::move(poly));
      }
      break;
    }
    case DomainFamily::Serpentine: {
      std::size_t fingers = std::max<std::size_t>(2, (cfg.n_target - 4) / 4);
      const Coord H = 40;
      const Coord W = static_cast<Coord>(8 * fingers) + 12;
      d.outer = Rect{0, 0, W, 4 * H};
      RectilinearPolygon comb;
      comb.vertices.push_back({4, 4});
      comb.vertices.push_back({W - 4, 4});
      comb.vertices.push_back({W - 4, 8});
      for (std::size_t i = fingers; i-- > 0;) {
        Coord xr = static_cast<Coord>(8 * i) + 12;
        Coord xl = xr - 4;
        comb.vertices.push_back({xr, 8});
        comb.vertices.push_back({xr, 4 * H - 8});
        comb.vertices.push_back({xl, 4 * H - 8});
        comb.vertices.push_back({xl, 8});
      }
      comb.vertices.push_back({4, 8});
      d.obstacles.push_back(std::move(comb));
      // A few extra small obstacles keep h configurable without changing the
      // serpentine character.
      for (std::size_t i = 1; i < std::min<std::size_t>(cfg.h_target, 4); ++i) {
        Coord x0 = 10 + static_cast<Coord>(i) * 9;
        if (x0 + 3 >= W - 4) break;
        d.obstacles.push_back(detail::rect_poly(x0, 4 * H - 6, x0 + 3, 4 * H - 3));
      }
      break;
    }
    case DomainFamily::Comb: {
      std::size_t teeth = std::max<std::size_t>(1, cfg.n_target / 8);
      const Coord W = static_cast<Coord>(32 * teeth) + 16;
      d.outer = Rect{0, 0, W, 64};
      for (std::size_t i = 0; i < teeth; ++i) {
        RectilinearPolygon t;
        Coord x0 = static_cast<Coord>(32 * i) + 8;
        t.vertices = {{x0 + 8, 8},  {x0 + 12, 8},  {x0 + 12, 24}, {x0 + 20, 24},
                      {x0 + 20, 32}, {x0, 32},      {x0, 24},      {x0 + 8, 24}};
        d.obstacles.push_back(std::move(t));
      }
      break;
    }
  }
  // Source: rejection-sample a free point away from all obstacle boundaries.
  std::uniform_int_distribution<Coord> sx(d.outer.xmin + 1, d.outer.xmax - 1);
  std::uniform_int_distribution<Coord> sy(d.outer.ymin + 1, d.outer.ymax - 1);
  if (cfg.family == DomainFamily::Serpentine) {
    d.source = Point{6, 10};
  } else {
    while (true) {
      Point s{sx(rng), sy(rng)};
      bool bad = false;
      for (const auto& o : d.obstacles) {
        if (detail::strictly_inside_polygon(o, s) ||
            detail::on_polygon_boundary(o, s)) {
          bad = true;
          break;
        }
      }
      if (!bad) {
        d.source = s;
        break;
      }
    }
  }
  auto rep = make_general_position(std::move(d));
  RECTILINK_CHECK(rep.ok(), std::string("generator produced an unrepairable domain: ") +
                                rep.error.message);
  auto val = validate_domain(std::move(*rep.repaired));
  RECTILINK_CHECK(val.ok(), "generator output failed validation");
  return std::move(*val.valid);
}

}  // namespace rectilink
