#pragma once

#include <array>
#include <memory>
#include <vector>

#include "rectilink/base.hpp"
#include "rectilink/beams.hpp"
#include "rectilink/decomposition.hpp"
#include "rectilink/oracle.hpp"

namespace rectilink {

/// How a diagonal was first reached; enough to walk an actual min-link path
/// backward to the source.
///
/// BeamArrival: a beam lit the diagonal itself; span is the lit piece on this
/// diagonal and gen its generator. SideArrival: beams lit the cell side
/// containing the diagonal but missed it; span is a lit piece elsewhere on
/// that side (the path slides along the side, which is free space). Source /
/// Ray terminate the walk at s (vertical-start maps end with a vertical link
/// on the source diagonal; horizontal-start maps end on the ray through s).
enum class RecKind : std::uint8_t { None, Source, Ray, BeamArrival, SideArrival };

struct PathRecord {
  RecKind kind = RecKind::None;
  Interval span{0, 0};
  std::int32_t gen = -1;
};

/// Which initialization a map uses: vertical-start maps label the source
/// diagonal 1 and emit full-extent beams; horizontal-start maps label it 0
/// and emit the two horizontal rays through s (distances come out even).
enum class SourceInit : std::uint8_t { FullExtent, Rays };

inline SourceInit source_init_for(MapType m) {
  return (m == MapType::VV || m == MapType::HH) ? SourceInit::FullExtent
                                                : SourceInit::Rays;
}

/// True if the map lives on the transposed (horizontal) decomposition.
inline bool on_horizontal_decomposition(MapType m) {
  return m == MapType::HH || m == MapType::VH;
}

struct LabeledDecomposition {
  MapType map_type = MapType::VV;
  std::shared_ptr<const VisibilityDecomposition> vd;
  std::vector<Dist> diag_dis;
  std::vector<PathRecord> diag_rec;
  // Final beam sets per diagonal and direction, frozen when the diagonal was
  // processed (normalized to maximal intervals; used by the differential
  // tests and by nothing at query time).
  std::vector<std::array<std::vector<Interval>, 2>> diag_beams;
  std::vector<Dist> cell_dis;
  BuildCounters counters;

  Dist cell_distance(std::int32_t cell) const { return cell_dis[cell]; }
  const PathRecord& cell_record(std::int32_t cell) const {
    return diag_rec[vd->cells[cell].fake];
  }
};

/// Copies the per-cell distances out of a built map (cells inherit their fake
/// diagonal's label) and checks the diagonal/cell consistency identity
/// dis(d) = min(dis(C_l), dis(C_r)) for every real non-source diagonal.
inline std::vector<Dist> dn_label_cells(const LabeledDecomposition& m) {
  const auto& vd = *m.vd;
  for (std::size_t i = 0; i < vd.real_diagonal_count; ++i) {
    const Diagonal& d = vd.diagonals[i];
    if (d.kind == DiagKind::Source) continue;  // dis(d_s) is 1, below its cells
    Dist want = std::min(m.cell_dis[d.left_cell], m.cell_dis[d.right_cell]);
    RECTILINK_CHECK(m.diag_dis[i] == want,
                    "diagonal label differs from min of adjacent cells");
  }
  return m.cell_dis;
}

}  // namespace rectilink
