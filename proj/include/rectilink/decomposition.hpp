#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "rectilink/base.hpp"
#include "rectilink/geometry.hpp"

namespace rectilink {

enum class Axis : std::uint8_t { Vertical, Horizontal };
enum class DiagKind : std::uint8_t { EdgeExtension, Source, Fake };

/// All decomposition coordinates are the input coordinates times two. The
/// doubling gives every cell an even width of at least 2, so the fake
/// diagonal at the cell midpoint is always strictly interior and integral.
inline constexpr Coord kDecompScale = 2;

struct Diagonal {
  std::int32_t id = -1;
  Coord x = 0;          // anchor (doubled units)
  Interval extent;      // y-range (doubled units)
  DiagKind kind = DiagKind::EdgeExtension;
  std::int32_t left_cell = -1;
  std::int32_t right_cell = -1;
};

struct CellRect {
  std::int32_t id = -1;
  Coord xl = 0, xr = 0;  // doubled units
  Interval y;
  std::array<std::int32_t, 2> left_diags{-1, -1};
  std::array<std::int32_t, 2> right_diags{-1, -1};
  int n_left = 0;
  int n_right = 0;
  std::int32_t fake = -1;

  long long area2() const {
    return static_cast<long long>(xr - xl) * (y.hi - y.lo);
  }
};

struct VisibilityDecomposition {
  Axis axis = Axis::Vertical;
  Rect outer;  // doubled units
  std::vector<CellRect> cells;
  std::vector<Diagonal> diagonals;
  std::int32_t source_diagonal = -1;
  std::size_t real_diagonal_count = 0;  // fakes, if inserted, come after

  bool is_fake(std::int32_t d) const {
    return static_cast<std::size_t>(d) >= real_diagonal_count;
  }
};

namespace detail {

struct WallRec {
  Coord y = 0;
  bool free_above = false;
  bool free_below = false;
};

struct SweepEvent {
  Coord x = 0;
  Interval band;  // blocked interval of the vertical feature ([sy,sy] for s)
  bool is_source = false;
  std::vector<WallRec> adds;
  std::vector<WallRec> removes;
};

inline std::vector<SweepEvent> make_events(const ValidatedDomain& d) {
  std::map<Coord, SweepEvent> byx;
  auto soup = make_edge_soup(d.domain());
  for (const auto& v : soup.vedges) {
    SweepEvent& ev = byx[2 * v.x];
    ev.x = 2 * v.x;
    ev.band = Interval{2 * v.y.lo, 2 * v.y.hi};
  }
  for (const auto& h : soup.hedges) {
    WallRec w{2 * h.y, !h.interior_above, h.interior_above};
    auto lo = byx.find(2 * h.x.lo);
    auto hi = byx.find(2 * h.x.hi);
    RECTILINK_CHECK(lo != byx.end() && hi != byx.end(),
                    "horizontal edge endpoint without a vertical event");
    lo->second.adds.push_back(w);
    hi->second.removes.push_back(w);
  }
  {
    SweepEvent& ev = byx[2 * d.source().x];
    ev.x = 2 * d.source().x;
    ev.band = Interval{2 * d.source().y, 2 * d.source().y};
    ev.is_source = true;
    RECTILINK_CHECK(ev.adds.empty() && ev.removes.empty(),
                    "source event collides with an obstacle event");
  }
  std::vector<SweepEvent> evs;
  evs.reserve(byx.size());
  for (auto& [x, ev] : byx) evs.push_back(std::move(ev));
  return evs;
}

/// Shared cell/diagonal assembly used by both the incremental sweep and the
/// naive O(n^2) rebuild: given the free bands adjacent to an event before and
/// after the wall change, closes/opens cells and emits the diagonals (the
/// connected pieces free on both sides of the event line).
class CellAssembler {
 public:
  explicit CellAssembler(VisibilityDecomposition* out) : out_(out) {}

  void begin(Coord xmin, const Interval& full) {
    open_cells_.clear();
    open_left_.clear();
    open_at(full, xmin, {});
  }

  void process(const SweepEvent& ev, const std::vector<Interval>& old_bands,
               const std::vector<Interval>& new_bands) {
    // Diagonals = components of the intersection of the two band unions.
    std::vector<std::int32_t> diag_ids;
    for (const Interval& a : old_bands) {
      for (const Interval& b : new_bands) {
        Interval c = a.clipped(b);
        if (!c.valid() || c.lo == c.hi) continue;
        Diagonal d;
        d.id = static_cast<std::int32_t>(out_->diagonals.size());
        d.x = ev.x;
        d.extent = c;
        d.kind = ev.is_source ? DiagKind::Source : DiagKind::EdgeExtension;
        if (ev.is_source) {
          RECTILINK_CHECK(out_->source_diagonal < 0, "duplicate source diagonal");
          out_->source_diagonal = d.id;
        }
        out_->diagonals.push_back(d);
        diag_ids.push_back(d.id);
      }
    }
    for (const Interval& band : old_bands) close_band(band, ev.x, diag_ids);
    for (const Interval& band : new_bands) {
      std::vector<std::int32_t> mine;
      for (auto id : diag_ids) {
        if (band.contains(out_->diagonals[id].extent)) mine.push_back(id);
      }
      open_at(band, ev.x, mine);
    }
  }

  void finish(Coord xmax) {
    while (!open_cells_.empty()) {
      auto it = open_cells_.begin();
      close_band(Interval{it->first, it->second}, xmax, {});
    }
  }

 private:
  void open_at(const Interval& band, Coord x, std::vector<std::int32_t> diags) {
    RECTILINK_CHECK(!open_cells_.count(band.lo), "band already open");
    open_cells_[band.lo] = band.hi;
    open_left_[band.lo] = {x, std::move(diags)};
  }

  void close_band(const Interval& band, Coord x,
                  const std::vector<std::int32_t>& event_diags) {
    auto it = open_cells_.find(band.lo);
    RECTILINK_CHECK(it != open_cells_.end() && it->second == band.hi,
                    "closing a band that is not open");
    auto& left = open_left_[band.lo];
    CellRect cell;
    cell.id = static_cast<std::int32_t>(out_->cells.size());
    cell.xl = left.x;
    cell.xr = x;
    cell.y = band;
    for (auto id : left.diags) {
      RECTILINK_CHECK(cell.n_left < 2, "more than two diagonals on a left side");
      cell.left_diags[cell.n_left++] = id;
      out_->diagonals[id].right_cell = cell.id;
    }
    for (auto id : event_diags) {
      if (!band.contains(out_->diagonals[id].extent)) continue;
      RECTILINK_CHECK(cell.n_right < 2, "more than two diagonals on a right side");
      cell.right_diags[cell.n_right++] = id;
      out_->diagonals[id].left_cell = cell.id;
    }
    // Keep side diagonals ordered bottom-to-top.
    auto order = [&](std::array<std::int32_t, 2>& ds, int n) {
      if (n == 2 &&
          out_->diagonals[ds[0]].extent.lo > out_->diagonals[ds[1]].extent.lo) {
        std::swap(ds[0], ds[1]);
      }
    };
    order(cell.left_diags, cell.n_left);
    order(cell.right_diags, cell.n_right);
    out_->cells.push_back(cell);
    open_cells_.erase(it);
    open_left_.erase(band.lo);
  }

  struct LeftInfo {
    Coord x = 0;
    std::vector<std::int32_t> diags;
  };
  VisibilityDecomposition* out_;
  std::map<Coord, Coord> open_cells_;  // band lo -> band hi
  std::map<Coord, LeftInfo> open_left_;
};

}  // namespace detail

/// Builds the vertical visibility decomposition by a plane sweep over the
/// vertical obstacle edges plus the source. O(n log n).
inline VisibilityDecomposition build_vertical_decomposition(
    const ValidatedDomain& d) {
  VisibilityDecomposition vd;
  vd.axis = Axis::Vertical;
  vd.outer = Rect{2 * d.outer().xmin, 2 * d.outer().ymin, 2 * d.outer().xmax,
                  2 * d.outer().ymax};

  auto evs = detail::make_events(d);
  detail::CellAssembler cells(&vd);
  cells.begin(vd.outer.xmin, Interval{vd.outer.ymin, vd.outer.ymax});

  std::map<Coord, detail::WallRec> active;
  active[vd.outer.ymin] = detail::WallRec{vd.outer.ymin, true, false};
  active[vd.outer.ymax] = detail::WallRec{vd.outer.ymax, false, true};

  auto bands_around = [&](const Interval& blocked) {
    // Free bands whose closure touches [blocked.lo, blocked.hi].
    std::vector<Interval> res;
    auto hi_it = active.lower_bound(blocked.lo);
    RECTILINK_CHECK(hi_it != active.begin(), "no wall below the event band");
    auto lo_it = std::prev(hi_it);
    while (true) {
      auto next = std::next(lo_it);
      RECTILINK_CHECK(next != active.end(), "no wall above the event band");
      Interval band{lo_it->first, next->first};
      bool free = lo_it->second.free_above && next->second.free_below;
      RECTILINK_CHECK(lo_it->second.free_above == next->second.free_below,
                      "inconsistent wall sides (domain not disjoint?)");
      if (free && band.hi >= blocked.lo && band.lo <= blocked.hi) {
        res.push_back(band);
      }
      if (next->first > blocked.hi) break;
      lo_it = next;
    }
    return res;
  };

  for (const auto& ev : evs) {
    std::vector<Interval> old_bands = bands_around(ev.band);
    for (const auto& w : ev.removes) {
      RECTILINK_CHECK(active.erase(w.y) == 1, "removing an inactive wall");
    }
    for (const auto& w : ev.adds) {
      RECTILINK_CHECK(active.emplace(w.y, w).second, "wall y occupied");
    }
    std::vector<Interval> new_bands = bands_around(ev.band);
    cells.process(ev, old_bands, new_bands);
  }
  cells.finish(vd.outer.xmax);
  vd.real_diagonal_count = vd.diagonals.size();
  RECTILINK_CHECK(vd.source_diagonal >= 0, "source diagonal missing");
  return vd;
}

/// The horizontal decomposition is the vertical decomposition of the
/// transposed domain; it stays in transposed coordinates and callers
/// transpose query points instead.
inline VisibilityDecomposition build_horizontal_decomposition(
    const ValidatedDomain& d) {
  auto tres = validate_domain(transpose(d.domain()));
  RECTILINK_CHECK(tres.ok(), "transposed domain failed validation");
  VisibilityDecomposition vd = build_vertical_decomposition(*tres.valid);
  vd.axis = Axis::Horizontal;
  return vd;
}

/// Adds one fake diagonal per cell, spanning the cell's full height at its
/// x-midpoint. Fake diagonals are swept like ordinary diagonals so cells get
/// labeled, but they never bound corridors.
inline VisibilityDecomposition insert_fake_diagonals(VisibilityDecomposition vd) {
  RECTILINK_CHECK(vd.real_diagonal_count == vd.diagonals.size(),
                  "fake diagonals already inserted");
  for (auto& cell : vd.cells) {
    Diagonal f;
    f.id = static_cast<std::int32_t>(vd.diagonals.size());
    f.x = (cell.xl + cell.xr) / 2;
    f.extent = cell.y;
    f.kind = DiagKind::Fake;
    f.left_cell = cell.id;
    f.right_cell = cell.id;
    cell.fake = f.id;
    vd.diagonals.push_back(f);
  }
  return vd;
}

/// Refined view of a decomposition with fake diagonals: every cell is split
/// by its fake diagonal into two subcells, so each sweep step crosses exactly
/// one rectangle between two vertical sides.
class RefinedView {
 public:
  struct SideInfo {
    Interval extent;
    std::array<std::int32_t, 2> diags{-1, -1};  // bottom-to-top
    std::array<Interval, 2> exts{};
    int count = 0;
  };

  explicit RefinedView(const VisibilityDecomposition& vd) : vd_(&vd) {
    RECTILINK_CHECK(vd.diagonals.size() > vd.real_diagonal_count,
                    "refined view needs fake diagonals");
  }

  const VisibilityDecomposition& decomposition() const { return *vd_; }
  std::size_t subcell_count() const { return vd_->cells.size() * 2; }
  std::size_t diagonal_count() const { return vd_->diagonals.size(); }

  std::int32_t cell_of(std::int32_t subcell) const { return subcell / 2; }

  /// Subcell on the given side of a diagonal.
  std::int32_t subcell_beside(std::int32_t diag, Dir dir) const {
    const Diagonal& d = vd_->diagonals[diag];
    if (d.kind == DiagKind::Fake) {
      return dir == Dir::Right ? d.left_cell * 2 + 1 : d.left_cell * 2;
    }
    return dir == Dir::Right ? d.right_cell * 2 : d.left_cell * 2 + 1;
  }

  /// The side of `subcell` facing `dir` (the far side when sweeping toward dir).
  SideInfo side(std::int32_t subcell, Dir dir) const {
    const CellRect& c = vd_->cells[subcell / 2];
    bool left_half = subcell % 2 == 0;
    SideInfo s;
    s.extent = c.y;
    bool want_left_side = dir == Dir::Left;
    if (left_half) {
      if (want_left_side) {
        for (int i = 0; i < c.n_left; ++i) s.diags[s.count++] = c.left_diags[i];
      } else {
        s.diags[s.count++] = c.fake;
      }
    } else {
      if (want_left_side) {
        s.diags[s.count++] = c.fake;
      } else {
        for (int i = 0; i < c.n_right; ++i) s.diags[s.count++] = c.right_diags[i];
      }
    }
    for (int i = 0; i < s.count; ++i) s.exts[i] = vd_->diagonals[s.diags[i]].extent;
    return s;
  }

  Coord subcell_xl(std::int32_t subcell) const {
    const CellRect& c = vd_->cells[subcell / 2];
    return subcell % 2 == 0 ? c.xl : vd_->diagonals[c.fake].x;
  }
  Coord subcell_xr(std::int32_t subcell) const {
    const CellRect& c = vd_->cells[subcell / 2];
    return subcell % 2 == 0 ? vd_->diagonals[c.fake].x : c.xr;
  }

 private:
  const VisibilityDecomposition* vd_;
};

/// O(n^2) reference construction: identical event loop, but the free
/// structure around every event is recomputed from scratch against all
/// obstacle edges instead of being maintained incrementally.
inline VisibilityDecomposition naive_vertical_decomposition(
    const ValidatedDomain& d) {
  VisibilityDecomposition vd;
  vd.axis = Axis::Vertical;
  vd.outer = Rect{2 * d.outer().xmin, 2 * d.outer().ymin, 2 * d.outer().xmax,
                  2 * d.outer().ymax};
  auto evs = detail::make_events(d);
  auto soup = detail::make_edge_soup(d.domain());

  auto bands_at = [&](Coord probe_x2, const Interval& blocked) {
    // Free bands of the vertical line x = probe_x2 (odd, so never on an
    // edge), clipped to those touching `blocked`.
    std::vector<detail::WallRec> walls;
    walls.push_back({vd.outer.ymin, true, false});
    walls.push_back({vd.outer.ymax, false, true});
    for (const auto& h : soup.hedges) {
      if (2 * h.x.lo < probe_x2 && probe_x2 < 2 * h.x.hi) {
        walls.push_back({2 * h.y, !h.interior_above, h.interior_above});
      }
    }
    std::sort(walls.begin(), walls.end(),
              [](const detail::WallRec& a, const detail::WallRec& b) {
                return a.y < b.y;
              });
    std::vector<Interval> res;
    for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
      if (!walls[i].free_above || !walls[i + 1].free_below) continue;
      Interval band{walls[i].y, walls[i + 1].y};
      if (band.hi >= blocked.lo && band.lo <= blocked.hi) res.push_back(band);
    }
    return res;
  };

  detail::CellAssembler cells(&vd);
  cells.begin(vd.outer.xmin, Interval{vd.outer.ymin, vd.outer.ymax});
  for (const auto& ev : evs) {
    cells.process(ev, bands_at(ev.x - 1, ev.band), bands_at(ev.x + 1, ev.band));
  }
  cells.finish(vd.outer.xmax);
  vd.real_diagonal_count = vd.diagonals.size();
  return vd;
}

/// Fully independent diagonal derivation: extend every vertical edge beyond
/// each endpoint when the continuation is locally free (the attached
/// horizontal edge leaves toward the obstacle side), scanning all edges for
/// the nearest blocker. Returns (x, extent) pairs in doubled units, without
/// the source diagonal.
inline std::vector<std::pair<Coord, Interval>> naive_endpoint_extensions(
    const ValidatedDomain& d) {
  auto soup = detail::make_edge_soup(d.domain());
  std::vector<std::pair<Coord, Interval>> out;
  for (const auto& v : soup.vedges) {
    const auto& poly = d.obstacles()[v.obstacle].vertices;
    auto hdir_east = [&](std::size_t vertex_idx) {
      // The horizontal edge incident to this vertex; one neighbor shares y.
      const Point& p = poly[vertex_idx];
      const Point& prev = poly[(vertex_idx + poly.size() - 1) % poly.size()];
      const Point& next = poly[(vertex_idx + 1) % poly.size()];
      const Point& other = (prev.y == p.y) ? prev : next;
      return other.x > p.x;
    };
    auto extend = [&](Coord from_y, bool upward, std::size_t vertex_idx) {
      bool east = hdir_east(vertex_idx);
      if (east != v.interior_right) return;  // continuation blocked by interior
      Coord best = upward ? 2 * d.outer().ymax : 2 * d.outer().ymin;
      for (const auto& h : soup.hedges) {
        if (!(2 * h.x.lo < 2 * v.x && 2 * v.x < 2 * h.x.hi)) continue;
        if (upward && 2 * h.y > 2 * from_y) best = std::min(best, 2 * h.y);
        if (!upward && 2 * h.y < 2 * from_y) best = std::max(best, 2 * h.y);
      }
      Interval ext = upward ? Interval{2 * from_y, best} : Interval{best, 2 * from_y};
      if (ext.lo < ext.hi) out.emplace_back(2 * v.x, ext);
    };
    extend(v.y.hi, true, v.upper_vertex);
    extend(v.y.lo, false, v.lower_vertex);
  }
  return out;
}

}  // namespace rectilink
