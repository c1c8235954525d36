#include "vartrot/upscale.hpp"

#include <stdexcept>

namespace vartrot {

std::string to_string(GlueRegion r) {
  switch (r) {
    case GlueRegion::left: return "left";
    case GlueRegion::bulk: return "bulk";
    case GlueRegion::right: return "right";
  }
  return "?";
}

GlueRegion glue_region_from_string(const std::string& s) {
  if (s == "left") return GlueRegion::left;
  if (s == "bulk") return GlueRegion::bulk;
  if (s == "right") return GlueRegion::right;
  throw std::invalid_argument("unknown glue region: " + s);
}

namespace {

CouplingSet unit_couplings(Model model) {
  CouplingSet cs;
  cs.model = model;
  cs.jz = 1.0;
  cs.hx = 1.0;
  cs.jy = model == Model::tfxy ? 1.0 : 0.0;
  return cs;
}

void check_block_pair(const ParamTable& a, const ParamTable& b) {
  if (a.model != b.model)
    throw std::invalid_argument("blocks trained on different models");
  if (a.layers != b.layers)
    throw std::invalid_argument("blocks trained with different layer counts");
  if (a.tau != b.tau)
    throw std::invalid_argument("blocks trained at different time steps");
}

}  // namespace

CircuitPlan upscale_periodic(const ParamTable& params,
                             const LatticeSpec& target) {
  params.validate();
  target.validate();
  if (params.mode != ParamMode::shared)
    throw std::invalid_argument("periodic upscaling needs shared parameters");
  if (target.dimension != params.trained_on.dimension)
    throw std::invalid_argument("target dimension differs from training");
  for (int a = 0; a < target.dimension; ++a)
    if (target.boundary[a] != Boundary::periodic ||
        params.trained_on.boundary[a] != Boundary::periodic)
      throw std::invalid_argument("periodic upscaling needs periodic axes");
  return build_variational(params, target);
}

GlueMap glue_open_map(const ParamTable& open_params,
                      const ParamTable& bulk_params, int n_open, int inserted,
                      const LatticeSpec& target, bool seam_from_boundary) {
  open_params.validate();
  bulk_params.validate();
  check_block_pair(open_params, bulk_params);
  if (open_params.mode != ParamMode::site_resolved)
    throw std::invalid_argument("open block must be site resolved");
  if (bulk_params.mode != ParamMode::shared)
    throw std::invalid_argument("bulk block must be shared");

  const LatticeSpec& block = open_params.trained_on;
  const int d = block.dimension;
  int open_axis = 0;
  if (d == 1) {
    if (block.boundary[0] != Boundary::open)
      throw std::invalid_argument("open block lattice is not open");
  } else {
    bool o0 = block.boundary[0] == Boundary::open;
    bool o1 = block.boundary[1] == Boundary::open;
    if (o0 == o1)
      throw std::invalid_argument("2d gluing needs exactly one open axis");
    open_axis = o0 ? 0 : 1;
  }
  if (bulk_params.trained_on.dimension != d)
    throw std::invalid_argument("bulk block dimension differs");
  for (int a = 0; a < d; ++a)
    if (bulk_params.trained_on.boundary[a] != Boundary::periodic)
      throw std::invalid_argument("bulk block must be trained periodic");

  const int open_lines = block.extents[open_axis];
  if (n_open != open_lines)
    throw std::invalid_argument("n_open disagrees with the trained block");
  if (open_lines % 2 != 0)
    throw std::invalid_argument("open extent must be even to cut in half");
  const int transverse = d == 1 ? 1 : block.extents[1 - open_axis];
  if (inserted < 0 || inserted % transverse != 0)
    throw std::invalid_argument("inserted qubits must form whole lines");
  const int ins_lines = inserted / transverse;

  LatticeSpec expect = block;
  expect.extents[open_axis] = open_lines + ins_lines;
  if (!(target == expect))
    throw std::invalid_argument("target does not match the glued geometry");

  GlueMap map;
  map.target = target;
  map.model = open_params.model;
  map.block_names = {"open", "bulk"};
  map.blocks = {open_params, bulk_params};
  map.n_open = open_lines;
  map.inserted = inserted;

  const int half = open_lines / 2;
  auto line_of = [&](int site) {
    auto [r, c] = target.coords(site);
    return open_axis == 0 ? c : r;
  };
  auto to_block_site = [&](int site, int shift) {
    auto [r, c] = target.coords(site);
    if (open_axis == 0)
      c -= shift;
    else
      r -= shift;
    return block.site(r, c);
  };

  TermList tl = build_terms(target, unit_couplings(map.model));
  for (const Term& t : tl.terms) {
    GlueAssignment ga;
    ga.term = t;
    if (ins_lines == 0) {
      ga.region = line_of(t.sites[0]) < half ? GlueRegion::left
                                             : GlueRegion::right;
      ga.source_block = 0;
      ga.source_site = to_block_site(t.sites[0], 0);
      map.assignments.push_back(ga);
      continue;
    }
    bool all_left = true, all_right = true;
    int left_site = -1, right_site = -1;
    for (int s : {t.sites[0], t.sites[1]}) {
      if (s < 0) continue;
      int p = line_of(s);
      if (p < half) {
        if (left_site < 0) left_site = s;
      } else {
        all_left = false;
      }
      if (p >= half + ins_lines) {
        if (right_site < 0) right_site = s;
      } else {
        all_right = false;
      }
    }
    if (all_left) {
      ga.region = GlueRegion::left;
      ga.source_block = 0;
      ga.source_site = to_block_site(t.sites[0], 0);
    } else if (all_right) {
      ga.region = GlueRegion::right;
      ga.source_block = 0;
      ga.source_site = to_block_site(t.sites[0], ins_lines);
    } else if (seam_from_boundary && left_site >= 0) {
      // sensitivity variant: a seam bond copies the trained bond that
      // starts at its boundary-side endpoint
      ga.region = GlueRegion::left;
      ga.source_block = 0;
      ga.source_site = to_block_site(left_site, 0);
    } else if (seam_from_boundary && right_site >= 0) {
      ga.region = GlueRegion::right;
      ga.source_block = 0;
      ga.source_site = to_block_site(right_site, ins_lines);
    } else {
      ga.region = GlueRegion::bulk;
      ga.source_block = 1;
      ga.source_site = -1;
    }
    map.assignments.push_back(ga);
  }
  return map;
}

CircuitPlan plan_from_map(const GlueMap& map) {
  if (map.blocks.empty() || map.blocks.size() != map.block_names.size())
    throw std::invalid_argument("glue map carries no blocks");
  const int m = map.blocks[0].layers;
  for (const ParamTable& b : map.blocks) {
    b.validate();
    if (b.layers != m)
      throw std::invalid_argument("glue map blocks disagree on layers");
  }
  CircuitPlan plan;
  plan.lattice = map.target;
  plan.model = map.model;
  plan.family = PlanFamily::glued;
  plan.layers = m;
  plan.gates.reserve(static_cast<size_t>(m) * map.assignments.size());
  for (int r = 0; r < m; ++r)
    for (const GlueAssignment& ga : map.assignments) {
      const ParamTable& src = map.blocks[ga.source_block];
      int a = type_index(map.model, ga.term.kind);
      double angle = src.mode == ParamMode::shared
                         ? src.at(r, a)
                         : src.at(r, ga.source_site, a);
      plan.gates.push_back({ga.term.kind, ga.term.sites, angle});
    }
  plan.validate();
  return plan;
}

CircuitPlan glue_open(const ParamTable& open_params,
                      const ParamTable& bulk_params, int n_open, int inserted,
                      const LatticeSpec& target, bool seam_from_boundary) {
  return plan_from_map(glue_open_map(open_params, bulk_params, n_open,
                                     inserted, target, seam_from_boundary));
}

GlueMap glue_open_2d_map(const ParamTable& open_block,
                         const ParamTable& half_open_block,
                         const ParamTable& periodic_block) {
  open_block.validate();
  half_open_block.validate();
  periodic_block.validate();
  check_block_pair(open_block, half_open_block);
  check_block_pair(open_block, periodic_block);
  if (open_block.mode != ParamMode::site_resolved ||
      half_open_block.mode != ParamMode::site_resolved)
    throw std::invalid_argument("corner and edge blocks must be site resolved");
  if (periodic_block.mode != ParamMode::shared)
    throw std::invalid_argument("periodic block must be shared");

  const LatticeSpec& ob = open_block.trained_on;
  const LatticeSpec& hb = half_open_block.trained_on;
  const LatticeSpec& pb = periodic_block.trained_on;
  if (ob.dimension != 2 || hb.dimension != 2 || pb.dimension != 2)
    throw std::invalid_argument("2d gluing needs 2d blocks");
  if (ob.boundary[0] != Boundary::open || ob.boundary[1] != Boundary::open)
    throw std::invalid_argument("corner block must be fully open");
  if (hb.boundary[0] != Boundary::periodic || hb.boundary[1] != Boundary::open)
    throw std::invalid_argument(
        "edge block must be periodic in width, open in height");
  if (pb.boundary[0] != Boundary::periodic ||
      pb.boundary[1] != Boundary::periodic)
    throw std::invalid_argument("bulk block must be fully periodic");

  const int wo = ob.extents[0], ho = ob.extents[1];
  const int wh = hb.extents[0], hh = hb.extents[1];
  if (wo < 4 || ho < 4 || wo % 2 != 0 || ho % 2 != 0)
    throw std::invalid_argument("corner block must be even and at least 4x4");
  if (wh < 3 || hh < 4 || hh % 2 != 0)
    throw std::invalid_argument("edge block must be at least 3x4, even height");
  if (hh != ho)
    throw std::invalid_argument("corner and edge blocks disagree on height");
  if (pb.extents[0] < 3 || pb.extents[1] < 3)
    throw std::invalid_argument("bulk block must be at least 3x3");

  GlueMap map;
  map.target = grid(wo + wh, ho + 1, Boundary::open, Boundary::open);
  map.model = open_block.model;
  map.block_names = {"open", "half_open", "periodic"};
  map.blocks = {open_block, half_open_block, periodic_block};
  map.n_open = ho;
  map.inserted = wh;  // bulk qubits of the inserted middle row

  const int w = map.target.extents[0];

  // Block and source site of one target coordinate. Columns split into the
  // corner halves and the center strip; the inserted middle row duplicates
  // the innermost top row for corner columns and takes bulk angles in the
  // center.
  struct SiteSrc {
    int block;
    int site;
  };
  auto classify = [&](int r, int c) -> SiteSrc {
    bool center = c >= wo / 2 && c < w - wo / 2;
    int cb = c < wo / 2 ? c : (center ? c - wo / 2 : c - wh);
    bool middle = r == ho / 2;
    int rb = r < ho / 2 ? r : r - 1;
    if (center) {
      if (middle) return {2, -1};
      return {1, rb * wh + cb};
    }
    int rr = middle ? ho / 2 - 1 : rb;
    return {0, rr * wo + cb};
  };

  TermList tl = build_terms(map.target, unit_couplings(map.model));
  for (const Term& t : tl.terms) {
    GlueAssignment ga;
    ga.term = t;
    auto [r0, c0] = map.target.coords(t.sites[0]);
    SiteSrc best = classify(r0, c0);
    if (t.support() == 2) {
      auto [r1, c1] = map.target.coords(t.sites[1]);
      SiteSrc other = classify(r1, c1);
      if (other.block > best.block) best = other;  // bulk-most block wins
    }
    ga.source_block = best.block;
    ga.source_site = best.site;
    // region is a coarse tag here; the block name is authoritative
    ga.region = best.block == 2 ? GlueRegion::bulk
                                : (best.block == 0 ? GlueRegion::left
                                                   : GlueRegion::right);
    map.assignments.push_back(ga);
  }
  return map;
}

}  // namespace vartrot
