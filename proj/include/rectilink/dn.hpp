#pragma once

#include <memory>

#include "rectilink/labels.hpp"
#include "rectilink/sweep.hpp"

namespace rectilink {

/// Exports the engine state into the public label structure and checks the
/// terminal invariants (everything labeled, parity per map flavor).
inline LabeledDecomposition export_labels(
    MapType map_type, std::shared_ptr<const VisibilityDecomposition> vd,
    LabelState& st, const BuildCounters& counters) {
  LabeledDecomposition out;
  out.map_type = map_type;
  out.vd = std::move(vd);
  const auto& dec = *out.vd;
  out.diag_dis.resize(dec.diagonals.size());
  out.diag_rec.resize(dec.diagonals.size());
  out.diag_beams.resize(dec.diagonals.size());
  const Dist parity = source_init_for(map_type) == SourceInit::FullExtent ? 1 : 0;
  for (std::size_t i = 0; i < dec.diagonals.size(); ++i) {
    const auto& s = st.diag(static_cast<std::int32_t>(i));
    RECTILINK_CHECK(s.dis != kUnreached, "unlabeled diagonal after build");
    RECTILINK_CHECK(s.dis % 2 == parity % 2, "distance parity mismatch");
    out.diag_dis[i] = s.dis;
    out.diag_rec[i] = s.rec;
    for (int k = 0; k < 2; ++k) {
      if (!s.has_frozen[k]) continue;
      BeamTree t = BeamTree::from_pieces(s.frozen[k]);
      out.diag_beams[i][k] = t.normalized_intervals();
    }
  }
  out.cell_dis.resize(dec.cells.size());
  for (const auto& c : dec.cells) out.cell_dis[c.id] = out.diag_dis[c.fake];
  out.counters = counters;
  return out;
}

/// The baseline map builder: runs the full phase-by-phase sweep over the
/// refined decomposition (fake diagonals included) and labels every diagonal
/// and cell with its exact typed link distance. `source_y2` is the source's
/// doubled cross-axis coordinate (2*s.y for maps on the vertical
/// decomposition, 2*s.x for maps on the transposed one), which seeds the
/// horizontal-start ray.
inline LabeledDecomposition dn_build_map(
    std::shared_ptr<const VisibilityDecomposition> vd, MapType map_type,
    Coord source_y2) {
  RECTILINK_CHECK(
      (vd->axis == Axis::Horizontal) == on_horizontal_decomposition(map_type),
      "map type does not match the decomposition axis");
  RefinedView view(*vd);
  LabelState st(view);
  BuildCounters counters;
  SweepEngine engine(st, counters);
  engine.seed_source(source_init_for(map_type), source_y2);
  engine.run();
  return export_labels(map_type, std::move(vd), st, counters);
}

}  // namespace rectilink
