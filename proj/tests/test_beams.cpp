#include "rectilink/beams.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rectilink;

namespace {

BeamTree make(std::initializer_list<Beam> pieces) {
  BeamTree t;
  for (const Beam& b : pieces) t.insert(b);
  return t;
}

std::vector<Interval> ivals(const BeamTree& t) { return t.normalized_intervals(); }

// Naive mirror of the beam-set semantics on a plain sorted vector.
struct NaiveSet {
  std::vector<Beam> pieces;  // disjoint, sorted

  void insert(const Beam& nb) {
    std::vector<Beam> all = pieces;
    all.push_back(nb);
    rebuild(all);
  }
  void merge_from(const NaiveSet& o) {
    std::vector<Beam> all = pieces;
    for (const Beam& b : o.pieces) all.push_back(b);
    rebuild(all);
  }
  void rebuild(const std::vector<Beam>& cover) {
    std::vector<Coord> cuts;
    for (const Beam& b : cover) {
      cuts.push_back(b.span.lo);
      cuts.push_back(b.span.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Beam> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Interval seg{cuts[i], cuts[i + 1]};
      std::int32_t owner = -1;
      for (const Beam& b : cover) {
        if (b.span.lo <= seg.lo && seg.hi <= b.span.hi) {
          owner = owner < 0 ? b.gen : std::min(owner, b.gen);
        }
      }
      if (owner < 0) continue;
      if (!out.empty() && out.back().gen == owner &&
          out.back().span.hi == seg.lo) {
        out.back().span.hi = seg.hi;
      } else {
        out.push_back(Beam{seg, owner});
      }
    }
    pieces = std::move(out);
  }
  void clip_to(const Interval& r) {
    std::vector<Beam> out;
    for (Beam b : pieces) {
      Interval c = b.span.clipped(r);
      if (c.valid() && c.lo < c.hi) out.push_back(Beam{c, b.gen});
    }
    pieces = std::move(out);
  }
  // owner of the unit segment [y, y+1], or -1
  std::int32_t owner_at(Coord y) const {
    for (const Beam& b : pieces) {
      if (b.span.lo <= y && y + 1 <= b.span.hi) return b.gen;
    }
    return -1;
  }
  bool covered(Coord y) const {
    for (const Beam& b : pieces)
      if (b.span.contains(y)) return true;
    return false;
  }
};

void expect_same(const BeamTree& t, const NaiveSet& n, Coord lo, Coord hi,
                 const char* ctx) {
  NaiveSet from_tree;
  from_tree.pieces = t.to_pieces();
  for (Coord y = lo; y < hi; ++y) {
    EXPECT_EQ(from_tree.owner_at(y), n.owner_at(y)) << ctx << " segment " << y;
  }
  for (Coord y = lo; y <= hi; ++y) {
    EXPECT_EQ(from_tree.covered(y), n.covered(y)) << ctx << " point " << y;
  }
}

TEST(Project, SpecExamples) {
  {
    BeamSet b{Dir::Right, make({{{0, 40}, 1}, {{60, 100}, 2}})};
    auto out = project(b, Interval{0, 40});
    EXPECT_EQ(out.tree.normalized_intervals(), (std::vector<Interval>{{0, 40}}));
  }
  {
    BeamSet b{Dir::Right, make({{{10, 90}, 1}})};
    auto out = project(b, Interval{60, 100});
    EXPECT_EQ(out.tree.normalized_intervals(), (std::vector<Interval>{{60, 90}}));
  }
  {
    BeamSet b{Dir::Right, make({{{0, 30}, 1}, {{35, 65}, 2}, {{70, 100}, 3}})};
    auto out = project(b, Interval{32, 68});
    EXPECT_EQ(out.tree.normalized_intervals(), (std::vector<Interval>{{35, 65}}));
    EXPECT_EQ(out.tree.lowest().gen, 2);
  }
}

TEST(Merge, SpecExamples) {
  {
    auto m = merge(BeamSet{Dir::Right, make({{{0, 10}, 1}})},
                   BeamSet{Dir::Right, BeamTree{}});
    EXPECT_EQ(m.tree.normalized_intervals(), (std::vector<Interval>{{0, 10}}));
  }
  {
    auto m = merge(BeamSet{Dir::Right, make({{{0, 10}, 1}})},
                   BeamSet{Dir::Right, make({{{5, 20}, 2}})});
    EXPECT_EQ(m.tree.normalized_intervals(), (std::vector<Interval>{{0, 20}}));
    // The overlap [5,10] survives with the smaller generator id.
    NaiveSet probe;
    probe.pieces = m.tree.to_pieces();
    EXPECT_EQ(probe.owner_at(6), 1);
    EXPECT_EQ(probe.owner_at(12), 2);
  }
  {
    auto m = merge(BeamSet{Dir::Right, make({{{0, 10}, 1}, {{20, 30}, 1}})},
                   BeamSet{Dir::Right, make({{{10, 20}, 1}})});
    // Touching intervals coalesce.
    EXPECT_EQ(m.tree.normalized_intervals(), (std::vector<Interval>{{0, 30}}));
    EXPECT_EQ(m.tree.size(), 1u);
  }
  EXPECT_THROW(merge(BeamSet{Dir::Right, {}}, BeamSet{Dir::Left, {}}),
               InternalInvariantViolation);
}

TEST(SplitAt, SpecExamples) {
  {
    auto [in, out] = split_at(BeamSet{Dir::Right, make({{{0, 100}, 1}})},
                              Interval{40, 60});
    EXPECT_EQ(in.tree.normalized_intervals(), (std::vector<Interval>{{40, 60}}));
    EXPECT_EQ(out.tree.normalized_intervals(),
              (std::vector<Interval>{{0, 40}, {60, 100}}));
  }
  {
    auto [in, out] = split_at(BeamSet{Dir::Right, make({{{5, 9}, 1}})},
                              Interval{0, 100});
    EXPECT_EQ(in.tree.normalized_intervals(), (std::vector<Interval>{{5, 9}}));
    EXPECT_TRUE(out.tree.empty());
  }
  {
    auto [in, out] = split_at(
        BeamSet{Dir::Right, make({{{0, 10}, 1}, {{20, 30}, 2}, {{40, 50}, 3}})},
        Interval{25, 45});
    EXPECT_EQ(in.tree.normalized_intervals(),
              (std::vector<Interval>{{25, 30}, {40, 45}}));
    EXPECT_EQ(out.tree.normalized_intervals(),
              (std::vector<Interval>{{0, 10}, {20, 25}, {45, 50}}));
  }
}

TEST(Extremes, BasicAndAfterMerge) {
  BeamTree t = make({{{7, 9}, 1}});
  EXPECT_EQ(t.lowest().span, (Interval{7, 9}));
  EXPECT_EQ(t.highest().span, (Interval{7, 9}));
  auto m = merge(BeamSet{Dir::Right, make({{{30, 40}, 1}})},
                 BeamSet{Dir::Right, make({{{5, 12}, 2}, {{60, 70}, 3}})});
  EXPECT_EQ(m.tree.lowest().span.lo, 5);
  EXPECT_EQ(m.tree.highest().span.hi, 70);
  BeamTree empty;
  EXPECT_THROW(empty.lowest(), InternalInvariantViolation);
}

TEST(BeamTree, RandomizedDifferentialAgainstNaive) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 60; ++round) {
    BeamTree t;
    NaiveSet n;
    std::uniform_int_distribution<Coord> c(0, 59);
    for (int op = 0; op < 40; ++op) {
      int kind = static_cast<int>(rng() % 10);
      if (kind < 5) {
        Coord a = c(rng), b = c(rng);
        if (a > b) std::swap(a, b);
        if (a == b) b = a + 1;
        Beam nb{Interval{a, b}, static_cast<std::int32_t>(rng() % 6)};
        t.insert(nb);
        n.insert(nb);
      } else if (kind < 7) {
        Coord a = c(rng), b = c(rng);
        if (a > b) std::swap(a, b);
        t.clip_to(Interval{a, b});
        n.clip_to(Interval{a, b});
      } else if (kind == 7 && !t.empty()) {
        Beam popped = t.pop_lowest();
        ASSERT_EQ(popped, n.pieces.front());
        n.pieces.erase(n.pieces.begin());
      } else if (kind == 8) {
        BeamTree other;
        NaiveSet nother;
        for (int i = 0; i < 3; ++i) {
          Coord a = c(rng), b = c(rng);
          if (a > b) std::swap(a, b);
          if (a == b) continue;
          Beam nb{Interval{a, b}, static_cast<std::int32_t>(rng() % 6)};
          other.insert(nb);
          nother.insert(nb);
        }
        t.merge_from(std::move(other));
        n.merge_from(nother);
      } else if (!t.empty()) {
        // lowest/highest agree with a full scan
        ASSERT_EQ(t.lowest(), n.pieces.front());
        ASSERT_EQ(t.highest(), n.pieces.back());
      }
      t.validate();
      expect_same(t, n, 0, 60, "after op");
      ASSERT_EQ(t.empty(), n.pieces.empty());
    }
  }
}

TEST(BeamTree, SplitMatchesNaive) {
  std::mt19937_64 rng(123);
  for (int round = 0; round < 200; ++round) {
    BeamTree t;
    NaiveSet n;
    std::uniform_int_distribution<Coord> c(0, 59);
    for (int i = 0; i < 6; ++i) {
      Coord a = c(rng), b = c(rng);
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      Beam nb{Interval{a, b}, static_cast<std::int32_t>(rng() % 5)};
      t.insert(nb);
      n.insert(nb);
    }
    Coord a = c(rng), b = c(rng);
    if (a > b) std::swap(a, b);
    std::size_t before = t.size();
    auto [in, out] = std::move(t).split_interval(Interval{a, b});
    EXPECT_LE(in.size() + out.size(), before + 2);
    NaiveSet nin = n, nout = n;
    nin.clip_to(Interval{a, b});
    // outside = pieces minus the inside parts
    nout.pieces.clear();
    for (Beam p : n.pieces) {
      if (p.span.hi <= a || p.span.lo >= b) {
        nout.pieces.push_back(p);
        continue;
      }
      if (p.span.lo < a) nout.pieces.push_back(Beam{{p.span.lo, a}, p.gen});
      if (p.span.hi > b) nout.pieces.push_back(Beam{{b, p.span.hi}, p.gen});
    }
    expect_same(in, nin, 0, 60, "inside");
    expect_same(out, nout, 0, 60, "outside");
    in.validate();
    out.validate();
  }
}

TEST(BeamTree, ProjectDistributesOverMerge) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Coord> c(0, 59);
  for (int round = 0; round < 300; ++round) {
    BeamSet A{Dir::Right, {}}, B{Dir::Right, {}};
    for (int i = 0; i < 4; ++i) {
      Coord a = c(rng), b = c(rng);
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      (i % 2 ? A : B).tree.insert(Beam{{a, b}, static_cast<std::int32_t>(rng() % 5)});
    }
    Coord a = c(rng), b = c(rng);
    if (a > b) std::swap(a, b);
    Interval target{a, b};
    auto lhs = project(merge(A, B), target);
    auto rhs = merge(project(A, target), project(B, target));
    EXPECT_EQ(lhs.tree.normalized_intervals(), rhs.tree.normalized_intervals());
  }
}

}  // namespace
