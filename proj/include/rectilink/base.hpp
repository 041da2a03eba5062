#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rectilink {

using Coord = std::int64_t;
using Dist = std::int64_t;

inline constexpr Dist kUnreached = std::numeric_limits<Dist>::max();

/// Sweep/beam direction along the decomposition axis. In a vertical
/// decomposition Right/Left are geometric; the horizontal decomposition is
/// handled by transposing the domain, so the same two values are reused.
enum class Dir : std::uint8_t { Right = 0, Left = 1 };

inline Dir opposite(Dir d) { return d == Dir::Right ? Dir::Left : Dir::Right; }

/// Thrown when one of the algorithm's structural invariants fails, e.g. the
/// corridor case analysis reaches the branch that is provably unreachable.
class InternalInvariantViolation : public std::logic_error {
 public:
  explicit InternalInvariantViolation(const std::string& what)
      : std::logic_error(what) {}
};

#define RECTILINK_CHECK(cond, msg)                                     \
  do {                                                                 \
    if (!(cond)) {                                                     \
      throw ::rectilink::InternalInvariantViolation(                   \
          std::string("invariant failed: ") + (msg) + " [" #cond "]"); \
    }                                                                  \
  } while (0)

/// Closed integer interval. Used for diagonal extents and beams.
struct Interval {
  Coord lo = 0;
  Coord hi = 0;

  bool valid() const { return lo <= hi; }
  Coord length() const { return hi - lo; }
  bool contains(Coord y) const { return lo <= y && y <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  /// Overlap with positive length (shared endpoints do not count).
  bool overlaps_interior(const Interval& o) const {
    return lo < o.hi && o.lo < hi;
  }
  bool touches(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  Interval clipped(const Interval& o) const {
    return Interval{lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Operation counters for one map build. These are the primary evidence for
/// the complexity probes: wall time is machine dependent, counts are not.
struct BuildCounters {
  std::int64_t global_heap_ops = 0;  // insert/extract/decrease/remove on H
  std::int64_t sweep_heap_ops = 0;   // pushes+pops on the per-phase x-heaps
  std::int64_t beam_splits = 0;
  std::int64_t beam_merges = 0;
  std::int64_t corridor_runs = 0;    // corridor-processing walk executions
  std::int64_t corridor_posts = 0;   // two-direction post-processing merges
  std::int64_t appendix_sweeps = 0;
  std::int64_t diagonal_pops = 0;

  BuildCounters& operator+=(const BuildCounters& o) {
    global_heap_ops += o.global_heap_ops;
    sweep_heap_ops += o.sweep_heap_ops;
    beam_splits += o.beam_splits;
    beam_merges += o.beam_merges;
    corridor_runs += o.corridor_runs;
    corridor_posts += o.corridor_posts;
    appendix_sweeps += o.appendix_sweeps;
    diagonal_pops += o.diagonal_pops;
    return *this;
  }
};

}  // namespace rectilink
