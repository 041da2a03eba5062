#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "rectilink/base.hpp"
#include "rectilink/beams.hpp"
#include "rectilink/decomposition.hpp"
#include "rectilink/labels.hpp"

namespace rectilink {

struct SidePropagation {
  std::array<BeamTree, 2> to;  // aligned with SideInfo.diags, bottom-to-top
  int splits = 0;
};

namespace detail {

/// Beams meeting a side-part whose diagonal occupies the top ([e.lo, e.hi])
/// and whose obstacle edge occupies everything below e.lo: beams below die.
/// Constant time unless several beams die at once, which costs one split.
inline BeamTree take_upper_diag(BeamTree&& t, const Interval& e, int& splits) {
  if (t.empty()) return {};
  const Beam b = t.lowest();
  if (b.span.lo >= e.lo) return std::move(t);
  if (b.span.hi > e.lo) {
    t.trim_lowest_to(e.lo);
    return std::move(t);
  }
  if (t.size() == 1) return {};
  ++splits;
  auto [inside, outside] = std::move(t).split_interval(e);
  return std::move(inside);
}

/// Mirror: diagonal at the bottom of its side-part, obstacle edge above.
inline BeamTree take_lower_diag(BeamTree&& t, const Interval& e, int& splits) {
  if (t.empty()) return {};
  const Beam b = t.highest();
  if (b.span.hi <= e.hi) return std::move(t);
  if (b.span.lo < e.hi) {
    t.trim_highest_to(e.hi);
    return std::move(t);
  }
  if (t.size() == 1) return {};
  ++splits;
  auto [inside, outside] = std::move(t).split_interval(e);
  return std::move(inside);
}

}  // namespace detail

/// Propagates a beam set across a cell onto its far side, distributing the
/// surviving beams over the side's diagonals; beams hitting obstacle-edge
/// portions of the side terminate. Implements the door-processing case
/// analysis: everything is constant time except the cases where a proper
/// split is unavoidable, and every split strands at least one beam.
inline SidePropagation propagate_through_side(BeamTree in,
                                              const RefinedView::SideInfo& side) {
  SidePropagation out;
  if (in.empty() || side.count == 0) return out;

  if (side.count == 1) {
    const Interval e = side.exts[0];
    if (e.lo <= side.extent.lo && e.hi >= side.extent.hi) {
      out.to[0] = std::move(in);  // the diagonal is the whole side
    } else if (e.hi >= side.extent.hi) {
      out.to[0] = detail::take_upper_diag(std::move(in), e, out.splits);
    } else {
      RECTILINK_CHECK(e.lo <= side.extent.lo,
                      "one-diagonal side with edges on both ends");
      out.to[0] = detail::take_lower_diag(std::move(in), e, out.splits);
    }
    return out;
  }

  // Two diagonals: lower one touches the side's bottom, upper one its top,
  // with an obstacle edge strictly between them.
  const Interval e0 = side.exts[0];
  const Interval e1 = side.exts[1];
  RECTILINK_CHECK(e0.lo <= side.extent.lo && e1.hi >= side.extent.hi &&
                      e0.hi < e1.lo,
                  "unexpected two-diagonal side layout");
  BeamTree rest;
  const Beam low = in.lowest();
  if (low.span.lo >= e0.hi) {
    rest = std::move(in);  // everything misses the lower diagonal
  } else if (low.span.hi > e0.hi) {
    // The lowest beam straddles the lower diagonal's top; nothing else
    // reaches it.
    out.to[0].insert(Beam{Interval{low.span.lo, e0.hi}, low.gen});
    in.trim_lowest_to(e0.hi);
    rest = std::move(in);
  } else {
    const Beam high = in.highest();
    if (high.span.hi <= e0.hi) {
      out.to[0] = std::move(in);  // everything inside the lower diagonal
    } else if (high.span.lo < e0.hi) {
      rest.insert(Beam{Interval{e0.hi, high.span.hi}, high.gen});
      in.trim_highest_to(e0.hi);
      out.to[0] = std::move(in);
    } else {
      ++out.splits;
      auto [inside, outside] = std::move(in).split_interval(
          Interval{side.extent.lo, e0.hi});
      out.to[0] = std::move(inside);
      rest = std::move(outside);
    }
  }
  out.to[1] = detail::take_upper_diag(std::move(rest), e1, out.splits);
  return out;
}

/// Mutable labeling state shared by the plain sweep engine and the corridor
/// algorithm: per-diagonal labels, pending beam fronts, locally-outmost
/// marks, and per-(subcell, facing) side values.
class LabelState {
 public:
  struct DiagState {
    Dist dis = kUnreached;
    PathRecord rec;
    std::array<BeamTree, 2> pending;
    std::array<Dist, 2> pending_value{kUnreached, kUnreached};
    std::array<bool, 2> has_pending{false, false};
    std::array<bool, 2> in_heap{false, false};
    std::array<bool, 2> marked{false, false};
    std::array<bool, 2> popped{false, false};
    std::array<std::vector<Beam>, 2> frozen;
    std::array<bool, 2> has_frozen{false, false};
    int pops = 0;
  };
  struct SideState {
    Dist dis = kUnreached;
    std::array<bool, 2> lit{false, false};
  };

  explicit LabelState(const RefinedView& view)
      : view_(&view),
        diag_(view.diagonal_count()),
        side_(view.subcell_count()) {}

  const RefinedView& view() const { return *view_; }
  DiagState& diag(std::int32_t d) { return diag_[d]; }
  const DiagState& diag(std::int32_t d) const { return diag_[d]; }
  SideState& side(std::int32_t subcell, Dir facing) {
    return side_[subcell][static_cast<int>(facing)];
  }

  bool illuminated(std::int32_t d) const {
    const DiagState& s = diag_[d];
    auto lit = [&](int k) {
      return s.has_pending[k] || (s.has_frozen[k] && !s.frozen[k].empty());
    };
    return lit(0) || lit(1);
  }

  /// Assigns dis/rec (first label or a strict improvement) and propagates the
  /// value to both sides of the diagonal, tagging the sweep direction.
  void label(std::int32_t d, Dist v, const PathRecord& rec, Dir litdir) {
    DiagState& s = diag_[d];
    RECTILINK_CHECK(s.dis == kUnreached || v < s.dis,
                    "relabeling a diagonal without improvement");
    s.dis = v;
    s.rec = rec;
    touch_sides(d, v, litdir);
  }

  /// Updates the two side records of d for value v (used on label and also
  /// when an equal-value sweep reaches the side from the other direction).
  void touch_sides(std::int32_t d, Dist v, Dir litdir) {
    for (Dir dd : {Dir::Right, Dir::Left}) {
      std::int32_t sub = view_->subcell_beside(d, dd);
      SideState& ss = side(sub, opposite(dd));
      if (v < ss.dis) {
        ss.dis = v;
        ss.lit = {false, false};
      }
      if (v <= ss.dis) ss.lit[static_cast<int>(litdir)] = true;
    }
  }

  void freeze(std::int32_t d, Dir dir, const BeamTree& beams) {
    DiagState& s = diag_[d];
    s.frozen[static_cast<int>(dir)] = beams.to_pieces();
    s.has_frozen[static_cast<int>(dir)] = true;
  }

 private:
  const RefinedView* view_;
  std::vector<DiagState> diag_;
  std::vector<std::array<SideState, 2>> side_;
};

/// Record for a diagonal lit by arriving beams: any lit piece works; the
/// lowest is a deterministic choice.
inline PathRecord beam_record(const BeamTree& t) {
  const Beam& b = t.lowest();
  return PathRecord{RecKind::BeamArrival, b.span, b.gen};
}

/// Record for a diagonal whose side was lit but which no beam reached: pick
/// the arriving piece closest to the diagonal; the path slides along the
/// (free) side from the diagonal to that piece.
inline PathRecord side_record(const std::vector<Beam>& arrived,
                              const Interval& target) {
  RECTILINK_CHECK(!arrived.empty(), "side record without arriving beams");
  const Beam* best = &arrived.front();
  Coord best_gap = std::numeric_limits<Coord>::max();
  for (const Beam& b : arrived) {
    Coord gap = 0;
    if (b.span.hi < target.lo) gap = target.lo - b.span.hi;
    if (b.span.lo > target.hi) gap = b.span.lo - target.hi;
    if (gap < best_gap) {
      best_gap = gap;
      best = &b;
    }
  }
  return PathRecord{RecKind::SideArrival, best->span, best->gen};
}

/// Companion rule record: the side containing the popped diagonal d was
/// reached by d's own arrival; the companion slides along the shared line to
/// that same piece.
inline PathRecord companion_record(const PathRecord& of_popped) {
  RECTILINK_CHECK(of_popped.kind == RecKind::BeamArrival ||
                      of_popped.kind == RecKind::SideArrival,
                  "companion next to the source diagonal");
  return PathRecord{RecKind::SideArrival, of_popped.span, of_popped.gen};
}

/// The DN-style sweep engine over a refined decomposition: per-phase
/// right-sweep then left-sweep guided by x-ordered heaps. Runs the whole map
/// when seeded with the source, and doubles as the local sweep for dead-end
/// appendix trees (restricted by an allowed-subcell filter and seeded with a
/// door front).
class SweepEngine {
 public:
  SweepEngine(LabelState& state, BuildCounters& counters,
              const std::vector<char>* allowed_subcells = nullptr)
      : st_(&state), cnt_(&counters), allowed_(allowed_subcells) {}

  /// Labels the source diagonal and marks it as the generator of the first
  /// phase in both directions.
  void seed_source(SourceInit init, Coord source_y2) {
    const auto& vd = st_->view().decomposition();
    std::int32_t ds = vd.source_diagonal;
    source_y2_ = source_y2;
    init_ = init;
    st_->label(ds, init == SourceInit::FullExtent ? 1 : 0,
               PathRecord{init == SourceInit::FullExtent ? RecKind::Source
                                                         : RecKind::Ray,
                          Interval{source_y2, source_y2}, -1},
               Dir::Right);
    st_->touch_sides(ds, st_->diag(ds).dis, Dir::Left);
    set_mark(ds, Dir::Right);
    set_mark(ds, Dir::Left);
  }

  /// Resumes a sweep at a labeled diagonal with beams heading toward `dir`
  /// (used when labeling appendix trees from their door).
  void seed_resume(std::int32_t d, Dir dir, BeamTree beams) {
    RECTILINK_CHECK(st_->diag(d).dis != kUnreached, "resume seed not labeled");
    deliver(d, dir, st_->diag(d).dis, std::move(beams));
  }

  /// Marks a labeled diagonal locally-outmost toward `dir`; it will generate
  /// a full beam worth dis+2 at the next phase.
  void seed_mark(std::int32_t d, Dir dir) {
    RECTILINK_CHECK(st_->diag(d).dis != kUnreached, "mark seed not labeled");
    set_mark(d, dir);
  }

  void run() {
    while (true) {
      drain(Dir::Right);
      drain(Dir::Left);
      if (!start_next_phase()) break;
    }
  }

 private:
  struct HeapEntry {
    Coord x;
    std::int32_t diag;
  };
  struct RightFirst {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      return a.x != b.x ? a.x > b.x : a.diag > b.diag;
    }
  };
  struct LeftFirst {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      return a.x != b.x ? a.x < b.x : a.diag > b.diag;
    }
  };

  bool allowed(std::int32_t subcell) const {
    return allowed_ == nullptr || (*allowed_)[subcell] != 0;
  }

  void set_mark(std::int32_t d, Dir dir) {
    auto& s = st_->diag(d);
    if (!s.marked[static_cast<int>(dir)]) {
      s.marked[static_cast<int>(dir)] = true;
      marks_.push_back({d, dir});
    }
  }

  void push_heap(std::int32_t d, Dir dir) {
    auto& s = st_->diag(d);
    if (s.in_heap[static_cast<int>(dir)]) return;
    s.in_heap[static_cast<int>(dir)] = true;
    Coord x = st_->view().decomposition().diagonals[d].x;
    if (dir == Dir::Right)
      right_.push(HeapEntry{x, d});
    else
      left_.push(HeapEntry{x, d});
    cnt_->sweep_heap_ops++;
  }

  /// Sets or merges an arriving front on d and schedules it.
  void deliver(std::int32_t d, Dir dir, Dist v, BeamTree beams) {
    auto& s = st_->diag(d);
    int k = static_cast<int>(dir);
    RECTILINK_CHECK(!s.popped[k], "beams arrived after the target was processed");
    if (s.has_pending[k]) {
      RECTILINK_CHECK(s.pending_value[k] == v, "merging fronts of unequal value");
      s.pending[k].merge_from(std::move(beams));
      cnt_->beam_merges++;
    } else {
      s.pending[k] = std::move(beams);
      s.pending_value[k] = v;
      s.has_pending[k] = true;
      push_heap(d, dir);
    }
    s.marked = {false, false};  // illuminated: clear locally-outmost marks
  }

  void drain(Dir dir) {
    auto pop = [&]() -> std::int32_t {
      if (dir == Dir::Right) {
        auto e = right_.top();
        right_.pop();
        return e.diag;
      }
      auto e = left_.top();
      left_.pop();
      return e.diag;
    };
    while (dir == Dir::Right ? !right_.empty() : !left_.empty()) {
      std::int32_t d = pop();
      cnt_->sweep_heap_ops++;
      process(d, dir);
    }
  }

  void process(std::int32_t d, Dir dir) {
    auto& s = st_->diag(d);
    int k = static_cast<int>(dir);
    RECTILINK_CHECK(s.has_pending[k] && s.in_heap[k], "stale heap entry");
    s.in_heap[k] = false;
    BeamTree beams = std::move(s.pending[k]);
    Dist v = s.pending_value[k];
    s.has_pending[k] = false;
    s.popped[k] = true;
    s.pops++;
    cnt_->diagonal_pops++;
    RECTILINK_CHECK(s.pops <= 2, "diagonal processed more than twice");
    st_->freeze(d, dir, beams);

    std::int32_t sub = st_->view().subcell_beside(d, dir);
    if (!allowed(sub)) return;

    auto near = st_->view().side(sub, opposite(dir));
    auto far = st_->view().side(sub, dir);

    // Companion rule: the other diagonal on the near side gets the side's
    // value with an empty beam set pointing backward.
    for (int i = 0; i < near.count; ++i) {
      std::int32_t hd = near.diags[i];
      if (hd == d) continue;
      auto& hs = st_->diag(hd);
      if (hs.dis == kUnreached) {
        st_->label(hd, v, companion_record(s.rec), dir);
        if (!st_->illuminated(hd)) set_mark(hd, opposite(dir));
      } else {
        RECTILINK_CHECK(hs.dis <= v, "companion holds a larger label");
      }
    }

    auto& fs = st_->side(sub, dir);
    if (fs.dis != kUnreached && fs.dis < v) return;  // everything ahead is closer
    RECTILINK_CHECK(fs.dis == kUnreached || fs.dis == v,
                    "side ahead holds a larger finite value in a plain sweep");

    std::vector<Beam> arrived = s.frozen[k];
    auto prop = propagate_through_side(std::move(beams), far);
    cnt_->beam_splits += prop.splits;
    for (int i = 0; i < far.count; ++i) {
      std::int32_t d2 = far.diags[i];
      auto& t2 = prop.to[i];
      auto& s2 = st_->diag(d2);
      Interval ext = st_->view().decomposition().diagonals[d2].extent;
      if (s2.dis == kUnreached) {
        st_->label(d2, v,
                   t2.empty() ? side_record(arrived, ext) : beam_record(t2), dir);
      } else {
        RECTILINK_CHECK(s2.dis == v, "far diagonal re-lit at a different value");
        st_->touch_sides(d2, v, dir);
      }
      if (!t2.empty()) {
        deliver(d2, dir, v, std::move(t2));
      } else if (!st_->illuminated(d2)) {
        set_mark(d2, dir);
      }
    }
    if (far.count == 0 && fs.dis == kUnreached) {
      fs.dis = v;
      fs.lit[static_cast<int>(dir)] = true;
    }
  }

  bool start_next_phase() {
    std::vector<std::pair<std::int32_t, Dir>> gen;
    for (auto [d, dir] : marks_) {
      if (st_->diag(d).marked[static_cast<int>(dir)]) gen.push_back({d, dir});
    }
    marks_.clear();
    if (gen.empty()) return false;
    Dist base = st_->diag(gen.front().first).dis;
    for (auto [d, dir] : gen) {
      auto& s = st_->diag(d);
      RECTILINK_CHECK(s.dis == base, "phase generators disagree on distance");
      s.marked[static_cast<int>(dir)] = false;
      BeamTree g;
      const Diagonal& dg = st_->view().decomposition().diagonals[d];
      bool ray = init_ == SourceInit::Rays &&
                 d == st_->view().decomposition().source_diagonal;
      g.insert(Beam{ray ? Interval{source_y2_, source_y2_} : dg.extent, d});
      deliver(d, dir, base + 2, std::move(g));
    }
    return true;
  }

  LabelState* st_;
  BuildCounters* cnt_;
  const std::vector<char>* allowed_;
  SourceInit init_ = SourceInit::FullExtent;
  Coord source_y2_ = 0;
  std::vector<std::pair<std::int32_t, Dir>> marks_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, RightFirst> right_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, LeftFirst> left_;
};

}  // namespace rectilink
