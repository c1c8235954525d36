#pragma once

#include <string>
#include <vector>

#include "vartrot/circuit.hpp"

namespace vartrot {

enum class GlueRegion { left, bulk, right };

std::string to_string(GlueRegion r);
GlueRegion glue_region_from_string(const std::string& s);

// One target term and the trained block feeding its angles. source_site is
// the origin-site index inside the source block's lattice; -1 when the
// block is shared (translation invariant).
struct GlueAssignment {
  Term term;
  GlueRegion region = GlueRegion::bulk;
  int source_block = 0;
  int source_site = -1;
};

// Parameter-assignment map for a composite lattice. assignments run in the
// canonical term order of the target, so plans built from the map share the
// gate order of build_variational. Carries copies of the source tables to
// stay self-contained.
struct GlueMap {
  LatticeSpec target;
  Model model = Model::tfim;
  std::vector<std::string> block_names;
  std::vector<ParamTable> blocks;
  std::vector<GlueAssignment> assignments;
  int n_open = 0;     // trained open extent along the open axis (lines)
  int inserted = 0;   // bulk qubits spliced in
};

// Shared parameters applied verbatim to a larger fully periodic lattice.
CircuitPlan upscale_periodic(const ParamTable& params,
                             const LatticeSpec& target);

// Open-boundary gluing. The trained open block is cut in half; the target
// keeps the left half at its place and the right half shifted outward, with
// `inserted` bulk qubits (whole lines for 2d) spliced in between carrying
// the shared periodic angles. Bonds straddling a seam take bulk angles by
// default; seam_from_boundary instead lets them copy the adjacent
// open-block bond (sensitivity check). inserted == 0 reproduces the open
// block's own circuit.
GlueMap glue_open_map(const ParamTable& open_params,
                      const ParamTable& bulk_params, int n_open, int inserted,
                      const LatticeSpec& target,
                      bool seam_from_boundary = false);

CircuitPlan plan_from_map(const GlueMap& map);

CircuitPlan glue_open(const ParamTable& open_params,
                      const ParamTable& bulk_params, int n_open, int inserted,
                      const LatticeSpec& target,
                      bool seam_from_boundary = false);

// Fully open 2d target assembled from three trained blocks: an open
// (Wo x Ho) corner block cut into quarters, a half-open (Wh x Ho) block cut
// into top and bottom halves filling the center columns, and a shared
// periodic block for the middle of the bulk. One row is inserted between
// the halves; the extra open-column row copies the innermost half row.
// Minimal blocks 4x4, 3x4 and 3x3 give the minimal 5x7 target. The map is
// construction only: evaluating its plan still obeys the simulation caps.
GlueMap glue_open_2d_map(const ParamTable& open_block,
                         const ParamTable& half_open_block,
                         const ParamTable& periodic_block);

}  // namespace vartrot
