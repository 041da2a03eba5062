#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rectilink/base.hpp"

namespace rectilink {

/// One directed light piece on a diagonal. `gen` is the locally-outmost
/// diagonal that emitted it; every stored piece interval is fully lit by its
/// own generator, which is what makes the recorded witnesses usable for path
/// retrieval.
struct Beam {
  Interval span;
  std::int32_t gen = -1;
  friend bool operator==(const Beam&, const Beam&) = default;
};

/// Ordered set of disjoint beams (adjacent pieces may share an endpoint),
/// stored as a treap keyed by span.lo. Split and merge run in logarithmic
/// time per touched piece; the lowest/highest beams are cached for O(1)
/// reads.
class BeamTree {
 public:
  BeamTree() = default;
  BeamTree(BeamTree&&) = default;
  BeamTree& operator=(BeamTree&&) = default;
  BeamTree(const BeamTree& o) { root_ = clone(o.root_.get()); ends_dirty_ = true; }
  BeamTree& operator=(const BeamTree& o) {
    if (this != &o) {
      root_ = clone(o.root_.get());
      ends_dirty_ = true;
    }
    return *this;
  }

  static BeamTree from_pieces(const std::vector<Beam>& pieces) {
    BeamTree t;
    for (const Beam& b : pieces) t.append(b);
    return t;
  }

  bool empty() const { return root_ == nullptr; }
  std::size_t size() const { return count(root_.get()); }

  const Beam& lowest() const {
    RECTILINK_CHECK(root_ != nullptr, "lowest() on an empty beam set");
    refresh_ends();
    return lo_->beam;
  }
  const Beam& highest() const {
    RECTILINK_CHECK(root_ != nullptr, "highest() on an empty beam set");
    refresh_ends();
    return hi_->beam;
  }

  /// Shrinks the lowest beam from below; removes it if nothing remains.
  void trim_lowest_to(Coord new_lo) {
    refresh_ends();
    RECTILINK_CHECK(lo_ != nullptr, "trim on empty set");
    if (new_lo >= lo_->beam.span.hi) {
      pop_lowest();
    } else if (new_lo > lo_->beam.span.lo) {
      lo_->beam.span.lo = new_lo;
    }
  }
  void trim_highest_to(Coord new_hi) {
    refresh_ends();
    RECTILINK_CHECK(hi_ != nullptr, "trim on empty set");
    if (new_hi <= hi_->beam.span.lo) {
      pop_highest();
    } else if (new_hi < hi_->beam.span.hi) {
      hi_->beam.span.hi = new_hi;
    }
  }

  Beam pop_lowest() {
    refresh_ends();
    Beam b = lo_->beam;
    auto [l, r] = split_lo_lt(std::move(root_), b.span.lo);
    // l is empty (b was the minimum); drop b from r.
    r = erase_min(std::move(r));
    root_ = join(std::move(l), std::move(r));
    ends_dirty_ = true;
    return b;
  }
  Beam pop_highest() {
    refresh_ends();
    Beam b = hi_->beam;
    root_ = erase_max(std::move(root_));
    ends_dirty_ = true;
    return b;
  }

  /// Splits into (pieces inside `range`, pieces outside). Beams straddling a
  /// boundary are cut; both halves keep their generator. This is the
  /// logarithmic "split" operation of the complexity analysis.
  std::pair<BeamTree, BeamTree> split_interval(const Interval& range) && {
    cut_at(range.lo);
    cut_at(range.hi);
    auto [low, rest] = split_lo_lt(std::move(root_), range.lo);
    // In `rest` every piece has lo >= range.lo; straddlers at range.hi were
    // cut, so pieces are fully inside iff hi <= range.hi.
    auto [mid, high] = split_lo_lt(std::move(rest), range.hi);
    // A point piece exactly at range.hi belongs inside.
    if (high) {
      NodePtr h = std::move(high);
      Node* mn = min_node(h.get());
      if (mn->beam.span.lo == range.hi && mn->beam.span.hi == range.hi) {
        Beam b = mn->beam;
        h = erase_min(std::move(h));
        mid = join(std::move(mid), make_node(b));
      }
      high = std::move(h);
    }
    BeamTree inside, outside;
    inside.root_ = std::move(mid);
    outside.root_ = join(std::move(low), std::move(high));
    inside.ends_dirty_ = outside.ends_dirty_ = true;
    return {std::move(inside), std::move(outside)};
  }

  /// Keeps only the portion inside `range` (dropping everything else).
  void clip_to(const Interval& range) {
    auto [inside, outside] = std::move(*this).split_interval(range);
    *this = std::move(inside);
  }

  /// Inserts one beam, trimming overlaps so that every point keeps a valid
  /// generator: where intervals overlap, the beam with the smaller generator
  /// id owns the region; touching pieces with equal generator coalesce.
  void insert(const Beam& nb) {
    if (nb.span.lo > nb.span.hi) return;
    // Pull out every piece touching nb.
    auto [low, rest] = split_lo_lt(std::move(root_), nb.span.lo);
    // Pieces in `low` have lo < nb.lo; the last ones may still touch nb.
    std::vector<Beam> affected;
    while (low) {
      Node* mx = max_node(low.get());
      if (mx->beam.span.hi < nb.span.lo) break;
      affected.push_back(mx->beam);
      low = erase_max(std::move(low));
    }
    std::reverse(affected.begin(), affected.end());
    while (rest) {
      Node* mn = min_node(rest.get());
      if (mn->beam.span.lo > nb.span.hi) break;
      affected.push_back(mn->beam);
      rest = erase_min(std::move(rest));
    }
    // Rebuild the covered region. At every coordinate the cover is nb plus
    // at most one old piece; on overlap the smaller generator id owns the
    // region, and touching same-generator pieces coalesce.
    std::vector<Beam> out;
    auto push = [&out](Beam b) {
      if (!b.span.valid()) return;
      if (!out.empty() && out.back().span.hi >= b.span.lo) {
        if (b.span.length() == 0) return;  // point swallowed by neighbor
        if (out.back().gen == b.gen) {
          out.back().span.hi = std::max(out.back().span.hi, b.span.hi);
          return;
        }
      }
      out.push_back(b);
    };
    Coord cursor = nb.span.lo;
    for (const Beam& old : affected) {
      if (old.span.lo < nb.span.lo) {  // prefix of old before nb
        push(Beam{Interval{old.span.lo, std::min(old.span.hi, nb.span.lo)},
                  old.gen});
      }
      Coord ostart = std::max(old.span.lo, nb.span.lo);
      if (ostart > cursor) {  // gap covered by nb alone
        push(Beam{Interval{cursor, ostart}, nb.gen});
        cursor = ostart;
      }
      Interval ov = old.span.clipped(nb.span);
      if (ov.valid() && ov.lo < ov.hi) {
        push(Beam{ov, std::min(old.gen, nb.gen)});
        cursor = ov.hi;
      }
      if (old.span.hi > nb.span.hi) {  // suffix of old after nb
        push(Beam{Interval{std::max(old.span.lo, nb.span.hi), old.span.hi},
                  old.gen});
        cursor = nb.span.hi;
      }
    }
    if (cursor < nb.span.hi || (nb.span.length() == 0 && affected.empty())) {
      push(Beam{Interval{cursor, nb.span.hi}, nb.gen});
    }
    for (const Beam& b : out) {
      low = join(std::move(low), make_node(b));
    }
    root_ = join(std::move(low), std::move(rest));
    ends_dirty_ = true;
  }

  /// Set union with `other` (same carrier, same direction). Pieces of the
  /// smaller set are inserted one by one.
  void merge_from(BeamTree&& other) {
    if (other.size() > size()) std::swap(*this, other);
    for (const Beam& b : other.to_pieces()) insert(b);
  }

  std::vector<Beam> to_pieces() const {
    std::vector<Beam> out;
    out.reserve(size());
    walk(root_.get(), out);
    return out;
  }

  /// Pieces coalesced into maximal intervals (generator-blind point set view).
  std::vector<Interval> normalized_intervals() const {
    std::vector<Interval> out;
    for (const Beam& b : to_pieces()) {
      if (!out.empty() && out.back().hi >= b.span.lo) {
        out.back().hi = std::max(out.back().hi, b.span.hi);
      } else {
        out.push_back(b.span);
      }
    }
    return out;
  }

  void validate() const {
    std::vector<Beam> ps = to_pieces();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      RECTILINK_CHECK(ps[i].span.valid(), "invalid beam span");
      if (i > 0) {
        RECTILINK_CHECK(ps[i - 1].span.hi <= ps[i].span.lo,
                        "beam pieces overlap");
      }
    }
  }

 private:
  struct Node;
  using NodePtr = std::unique_ptr<Node>;
  struct Node {
    Beam beam;
    std::uint64_t prio;
    std::uint32_t cnt = 1;
    NodePtr left, right;
  };

  static std::uint64_t next_prio() {
    static thread_local std::uint64_t state = 0x853c49e6748fea9bull;
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state;
  }

  static NodePtr make_node(const Beam& b) {
    auto n = std::make_unique<Node>();
    n->beam = b;
    n->prio = next_prio();
    return n;
  }

  static std::uint32_t count(const Node* n) { return n ? n->cnt : 0; }
  static void pull(Node* n) {
    n->cnt = 1 + count(n->left.get()) + count(n->right.get());
  }

  static NodePtr clone(const Node* n) {
    if (!n) return nullptr;
    auto c = std::make_unique<Node>();
    c->beam = n->beam;
    c->prio = n->prio;
    c->cnt = n->cnt;
    c->left = clone(n->left.get());
    c->right = clone(n->right.get());
    return c;
  }

  static std::pair<NodePtr, NodePtr> split_lo_lt(NodePtr n, Coord key) {
    if (!n) return {nullptr, nullptr};
    if (n->beam.span.lo < key) {
      auto [l, r] = split_lo_lt(std::move(n->right), key);
      n->right = std::move(l);
      pull(n.get());
      return {std::move(n), std::move(r)};
    }
    auto [l, r] = split_lo_lt(std::move(n->left), key);
    n->left = std::move(r);
    pull(n.get());
    return {std::move(l), std::move(n)};
  }

  static NodePtr join(NodePtr a, NodePtr b) {
    if (!a) return b;
    if (!b) return a;
    if (a->prio > b->prio) {
      a->right = join(std::move(a->right), std::move(b));
      pull(a.get());
      return a;
    }
    b->left = join(std::move(a), std::move(b->left));
    pull(b.get());
    return b;
  }

  static Node* min_node(Node* n) {
    while (n && n->left) n = n->left.get();
    return n;
  }
  static Node* max_node(Node* n) {
    while (n && n->right) n = n->right.get();
    return n;
  }

  static NodePtr erase_min(NodePtr n) {
    if (!n) return nullptr;
    if (!n->left) return std::move(n->right);
    n->left = erase_min(std::move(n->left));
    pull(n.get());
    return n;
  }
  static NodePtr erase_max(NodePtr n) {
    if (!n) return nullptr;
    if (!n->right) return std::move(n->left);
    n->right = erase_max(std::move(n->right));
    pull(n.get());
    return n;
  }

  /// Cuts the piece straddling y (strictly inside it) into two same-gen
  /// pieces meeting at y.
  void cut_at(Coord y) {
    Node* n = root_.get();
    Node* hit = nullptr;
    while (n) {
      if (n->beam.span.lo < y) {
        if (n->beam.span.hi > y) hit = n;
        n = n->right.get();
      } else {
        n = n->left.get();
      }
    }
    if (!hit || hit->beam.span.hi <= y) return;
    Beam upper{Interval{y, hit->beam.span.hi}, hit->beam.gen};
    hit->beam.span.hi = y;
    auto [l, r] = split_lo_lt(std::move(root_), y);
    root_ = join(std::move(l), join(make_node(upper), std::move(r)));
    ends_dirty_ = true;
  }

  void append(const Beam& b) {  // strictly increasing order only
    root_ = join(std::move(root_), make_node(b));
    ends_dirty_ = true;
  }

  static void walk(const Node* n, std::vector<Beam>& out) {
    if (!n) return;
    walk(n->left.get(), out);
    out.push_back(n->beam);
    walk(n->right.get(), out);
  }

  void refresh_ends() const {
    if (!ends_dirty_) return;
    lo_ = min_node(root_.get());
    hi_ = max_node(root_.get());
    ends_dirty_ = false;
  }

  NodePtr root_;
  mutable Node* lo_ = nullptr;
  mutable Node* hi_ = nullptr;
  mutable bool ends_dirty_ = true;
};

/// Direction-tagged beam set (the public BeamSet of the design): all beams on
/// one carrier travel the same way.
struct BeamSet {
  Dir dir = Dir::Right;
  BeamTree tree;

  bool empty() const { return tree.empty(); }
  std::size_t size() const { return tree.size(); }
};

/// Rightward/leftward projection of a beam set onto a target segment of the
/// opposite cell side: the portion B(d) ∩ d'. Tangency (a fat beam reduced to
/// a single point) produces no beam.
inline BeamSet project(const BeamSet& b, const Interval& target) {
  BeamSet out;
  out.dir = b.dir;
  BeamTree copy = b.tree;
  copy.clip_to(target);
  // Drop fat beams that degenerated to points (grazing contact does not pass
  // a positive-width beam).
  while (!copy.empty() && copy.lowest().span.length() == 0 &&
         copy.lowest().span.lo == target.lo) {
    copy.pop_lowest();
  }
  while (!copy.empty() && copy.highest().span.length() == 0 &&
         copy.highest().span.hi == target.hi) {
    copy.pop_highest();
  }
  out.tree = std::move(copy);
  return out;
}

inline BeamSet merge(BeamSet a, BeamSet b) {
  RECTILINK_CHECK(a.dir == b.dir, "DirectionMismatch: merging opposite beams");
  a.tree.merge_from(std::move(b.tree));
  return a;
}

inline std::pair<BeamSet, BeamSet> split_at(BeamSet b, const Interval& range) {
  auto [inside, outside] = std::move(b.tree).split_interval(range);
  BeamSet in{b.dir, std::move(inside)}, out{b.dir, std::move(outside)};
  return {std::move(in), std::move(out)};
}

}  // namespace rectilink
