#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "rectilink/base.hpp"
#include "rectilink/geometry.hpp"

namespace rectilink {

/// The four typed maps: first letter = orientation of the first link at s,
/// second = orientation of the last link at t.
enum class MapType : std::uint8_t { VV = 0, HV = 1, HH = 2, VH = 3 };

inline const char* to_string(MapType m) {
  switch (m) {
    case MapType::VV: return "vv";
    case MapType::HV: return "hv";
    case MapType::HH: return "hh";
    case MapType::VH: return "vh";
  }
  return "?";
}

/// Brute-force minimum-link oracle: 0/1-BFS over the Hanan grid induced by
/// all obstacle vertices, the source, the outer corners and any extra points
/// registered up front. States are (grid vertex, orientation of the current
/// link); continuing straight is free, turning costs one link.
class HananOracle {
 public:
  explicit HananOracle(const ValidatedDomain& d,
                       const std::vector<Point>& extra = {})
      : dom_(&d) {
    xs_.push_back(d.outer().xmin);
    xs_.push_back(d.outer().xmax);
    ys_.push_back(d.outer().ymin);
    ys_.push_back(d.outer().ymax);
    xs_.push_back(d.source().x);
    ys_.push_back(d.source().y);
    for (const auto& poly : d.obstacles()) {
      for (const auto& p : poly.vertices) {
        xs_.push_back(p.x);
        ys_.push_back(p.y);
      }
    }
    for (const auto& p : extra) {
      xs_.push_back(p.x);
      ys_.push_back(p.y);
    }
    auto uniq = [](std::vector<Coord>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(xs_);
    uniq(ys_);
    nx_ = xs_.size();
    ny_ = ys_.size();
    classify();
    for (int first = 0; first < 2; ++first) run_bfs(first);
  }

  /// Minimum link count of any rectilinear s-t path (no type constraint).
  Dist min_links(const Point& t) const {
    RECTILINK_CHECK(point_in_free_space(*dom_, t), "query point not in free space");
    if (t == dom_->source()) return 0;
    Dist best = kUnreached;
    for (int f = 0; f < 2; ++f)
      for (int l = 0; l < 2; ++l) best = std::min(best, genuine(f, l, t));
    return best;
  }

  /// Typed distance with the zero-length-link conventions applied: a path of
  /// the "wrong" genuine type pays +1 per mismatched end.
  Dist typed(const Point& t, MapType m) const {
    RECTILINK_CHECK(point_in_free_space(*dom_, t), "query point not in free space");
    int want_first = (m == MapType::HV || m == MapType::HH) ? kH : kV;
    int want_last = (m == MapType::HH || m == MapType::VH) ? kH : kV;
    if (t == dom_->source()) return want_first == want_last ? 1 : 2;
    Dist best = kUnreached;
    for (int f = 0; f < 2; ++f) {
      for (int l = 0; l < 2; ++l) {
        Dist g = genuine(f, l, t);
        if (g == kUnreached) continue;
        best = std::min(best, g + (f != want_first) + (l != want_last));
      }
    }
    return best;
  }

  bool on_grid(const Point& t) const {
    return std::binary_search(xs_.begin(), xs_.end(), t.x) &&
           std::binary_search(ys_.begin(), ys_.end(), t.y);
  }

 private:
  static constexpr int kH = 0;
  static constexpr int kV = 1;

  std::size_t vid(std::size_t i, std::size_t j) const { return j * nx_ + i; }

  void classify() {
    free_.assign(nx_ * ny_, false);
    right_ok_.assign(nx_ * ny_, false);
    up_ok_.assign(nx_ * ny_, false);
    for (std::size_t j = 0; j < ny_; ++j) {
      for (std::size_t i = 0; i < nx_; ++i) {
        free_[vid(i, j)] = point_in_free_space(*dom_, {xs_[i], ys_[j]});
      }
    }
    auto blocked = [&](Coord px2, Coord py2) {
      // Doubled-coordinate midpoint test against every obstacle.
      for (const auto& poly : dom_->obstacles()) {
        bool inside = false;
        const auto& v = poly.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const Point& a = v[i];
          const Point& b = v[(i + 1) % v.size()];
          if (a.y != b.y) continue;
          Coord ay2 = 2 * a.y;
          Coord xlo2 = 2 * std::min(a.x, b.x), xhi2 = 2 * std::max(a.x, b.x);
          if (ay2 < py2 && xlo2 <= px2 && px2 < xhi2) inside = !inside;
          if (ay2 == py2 && xlo2 <= px2 && px2 <= xhi2) return false;  // on edge
        }
        if (inside) return true;
      }
      return false;
    };
    for (std::size_t j = 0; j < ny_; ++j) {
      for (std::size_t i = 0; i + 1 < nx_; ++i) {
        if (free_[vid(i, j)] && free_[vid(i + 1, j)]) {
          right_ok_[vid(i, j)] = !blocked(xs_[i] + xs_[i + 1], 2 * ys_[j]);
        }
      }
    }
    for (std::size_t j = 0; j + 1 < ny_; ++j) {
      for (std::size_t i = 0; i < nx_; ++i) {
        if (free_[vid(i, j)] && free_[vid(i, j + 1)]) {
          up_ok_[vid(i, j)] = !blocked(2 * xs_[i], ys_[j] + ys_[j + 1]);
        }
      }
    }
  }

  void run_bfs(int first) {
    auto& dist = dist_[first];
    dist.assign(nx_ * ny_ * 2, kUnreached);
    std::size_t si = static_cast<std::size_t>(
        std::lower_bound(xs_.begin(), xs_.end(), dom_->source().x) - xs_.begin());
    std::size_t sj = static_cast<std::size_t>(
        std::lower_bound(ys_.begin(), ys_.end(), dom_->source().y) - ys_.begin());
    std::deque<std::size_t> dq;  // state id = vertex*2 + orientation
    auto relax = [&](std::size_t state, Dist nd, bool straight) {
      if (nd < dist[state]) {
        dist[state] = nd;
        if (straight)
          dq.push_front(state);
        else
          dq.push_back(state);
      }
    };
    // Seed: the first link must have positive length in its orientation.
    std::size_t s = vid(si, sj);
    if (first == kH) {
      if (si + 1 < nx_ && right_ok_[s]) relax(vid(si + 1, sj) * 2 + kH, 1, true);
      if (si > 0 && right_ok_[vid(si - 1, sj)])
        relax(vid(si - 1, sj) * 2 + kH, 1, true);
    } else {
      if (sj + 1 < ny_ && up_ok_[s]) relax(vid(si, sj + 1) * 2 + kV, 1, true);
      if (sj > 0 && up_ok_[vid(si, sj - 1)])
        relax(vid(si, sj - 1) * 2 + kV, 1, true);
    }
    while (!dq.empty()) {
      std::size_t state = dq.front();
      dq.pop_front();
      std::size_t v = state / 2;
      int orient = static_cast<int>(state % 2);
      Dist dcur = dist[state];
      std::size_t i = v % nx_, j = v / nx_;
      auto step = [&](std::size_t w, int o) {
        relax(w * 2 + o, dcur + (o != orient), o == orient);
      };
      if (i + 1 < nx_ && right_ok_[v]) step(vid(i + 1, j), kH);
      if (i > 0 && right_ok_[vid(i - 1, j)]) step(vid(i - 1, j), kH);
      if (j + 1 < ny_ && up_ok_[v]) step(vid(i, j + 1), kV);
      if (j > 0 && up_ok_[vid(i, j - 1)]) step(vid(i, j - 1), kV);
    }
  }

  Dist genuine(int first, int last, const Point& t) const {
    auto ix = std::lower_bound(xs_.begin(), xs_.end(), t.x);
    auto iy = std::lower_bound(ys_.begin(), ys_.end(), t.y);
    RECTILINK_CHECK(ix != xs_.end() && *ix == t.x && iy != ys_.end() && *iy == t.y,
                    "query point was not registered with the oracle");
    std::size_t v = vid(static_cast<std::size_t>(ix - xs_.begin()),
                        static_cast<std::size_t>(iy - ys_.begin()));
    return dist_[first][v * 2 + last];
  }

  const ValidatedDomain* dom_;
  std::vector<Coord> xs_, ys_;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<bool> free_, right_ok_, up_ok_;
  std::vector<Dist> dist_[2];
};

}  // namespace rectilink
