#include "vartrot/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vartrot {

std::string to_string(Model m) { return m == Model::tfim ? "tfim" : "tfxy"; }

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "open";
}

std::string to_string(TermKind k) {
  switch (k) {
    case TermKind::yy: return "yy";
    case TermKind::zz: return "zz";
    case TermKind::x: return "x";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  if (s == "tfim") return Model::tfim;
  if (s == "tfxy") return Model::tfxy;
  throw std::invalid_argument("unknown model: " + s);
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary: " + s);
}

TermKind term_kind_from_string(const std::string& s) {
  if (s == "yy") return TermKind::yy;
  if (s == "zz") return TermKind::zz;
  if (s == "x") return TermKind::x;
  throw std::invalid_argument("unknown term kind: " + s);
}

void LatticeSpec::validate() const {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("lattice dimension must be 1 or 2");
  int axes = dimension;
  for (int a = 0; a < axes; ++a) {
    int min_extent = boundary[a] == Boundary::periodic ? 3 : 2;
    if (extents[a] < min_extent)
      throw std::invalid_argument(
          "axis " + std::to_string(a) + " extent " + std::to_string(extents[a]) +
          " below minimum " + std::to_string(min_extent) + " for " +
          to_string(boundary[a]) + " boundary");
  }
  if (dimension == 1 && extents[1] != 1)
    throw std::invalid_argument("1d lattice must have extents[1] == 1");
}

LatticeSpec chain(int n, Boundary b) {
  LatticeSpec s;
  s.dimension = 1;
  s.extents = {n, 1};
  s.boundary = {b, Boundary::periodic};
  s.validate();
  return s;
}

LatticeSpec grid(int width, int height, Boundary bx, Boundary by) {
  LatticeSpec s;
  s.dimension = 2;
  s.extents = {width, height};
  s.boundary = {bx, by};
  s.validate();
  return s;
}

std::vector<TermKind> CouplingSet::kinds() const {
  if (model == Model::tfim) return {TermKind::zz, TermKind::x};
  return {TermKind::yy, TermKind::zz, TermKind::x};
}

double CouplingSet::coefficient(TermKind k) const {
  switch (k) {
    case TermKind::yy: return jy;
    case TermKind::zz: return jz;
    case TermKind::x: return hx;
  }
  return 0.0;
}

void CouplingSet::validate() const {
  if (!std::isfinite(jz) || !std::isfinite(hx) || !std::isfinite(jy))
    throw std::invalid_argument("couplings must be finite");
  if (model == Model::tfim && jy != 0.0)
    throw std::invalid_argument("tfim does not take a Jy coupling");
}

namespace {

// Bonds of one kind in canonical sublayer order. Horizontal bonds come in
// column-parity groups, vertical bonds in row-parity groups after them; a
// 1d chain only has the horizontal groups. Origin site first, so a wrap
// bond reads (last, first).
void append_bonds(const LatticeSpec& spec, TermKind kind, double coef,
                  std::vector<Term>& out) {
  const int w = spec.width();
  const int h = spec.height();
  for (int parity = 0; parity < 2; ++parity) {
    for (int r = 0; r < h; ++r)
      for (int c = parity; c < w; c += 2) {
        if (c + 1 >= w && spec.boundary[0] == Boundary::open) continue;
        out.push_back({kind, {spec.site(r, c), spec.site(r, (c + 1) % w)},
                       coef, parity});
      }
  }
  if (spec.dimension == 1) return;
  for (int parity = 0; parity < 2; ++parity) {
    for (int r = parity; r < h; r += 2)
      for (int c = 0; c < w; ++c) {
        if (r + 1 >= h && spec.boundary[1] == Boundary::open) continue;
        out.push_back({kind, {spec.site(r, c), spec.site((r + 1) % h, c)},
                       coef, 2 + parity});
      }
  }
}

int term_rank_kind(TermKind k) { return static_cast<int>(k); }

// Canonical ordering used by build_terms and restorable after edits.
void canonicalize(std::vector<Term>& terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.kind != b.kind) return term_rank_kind(a.kind) < term_rank_kind(b.kind);
    if (a.sublayer != b.sublayer) return a.sublayer < b.sublayer;
    if (a.sites[0] != b.sites[0]) return a.sites[0] < b.sites[0];
    return a.sites[1] < b.sites[1];
  });
}

}  // namespace

TermList build_terms(const LatticeSpec& spec, const CouplingSet& couplings) {
  spec.validate();
  couplings.validate();
  TermList tl;
  tl.lattice = spec;
  tl.model = couplings.model;
  for (TermKind k : couplings.kinds()) {
    double c = couplings.coefficient(k);
    if (k == TermKind::x) {
      for (int n = 0; n < spec.site_count(); ++n)
        tl.terms.push_back({k, {n, -1}, c, 0});
    } else {
      append_bonds(spec, k, c, tl.terms);
    }
  }
  return tl;
}

std::pair<LatticeSpec, TermList> extend_hamiltonian(const LatticeSpec& spec,
                                                    const CouplingSet& couplings,
                                                    int added_sites, int axis) {
  spec.validate();
  couplings.validate();
  if (axis < 0 || axis >= spec.dimension)
    throw std::invalid_argument("extension axis out of range");
  if (spec.boundary[axis] != Boundary::periodic)
    throw std::invalid_argument("only a periodic axis can be extended");
  const int transverse = spec.dimension == 1 ? 1 : spec.extents[1 - axis];
  if (added_sites < 0 || added_sites % transverse != 0)
    throw std::invalid_argument(
        "added sites must be a nonnegative multiple of the transverse extent");
  const int added_lines = added_sites / transverse;

  LatticeSpec target = spec;
  target.extents[axis] += added_lines;
  target.validate();

  const TermList base = build_terms(spec, couplings);
  if (added_lines == 0) return {target, base};

  const int old_len = spec.extents[axis];
  const int new_len = target.extents[axis];

  // Old terms in axis coordinates; seam wrap bonds dropped, the rest keep
  // their coordinates. A site's axis coordinate is col for axis 0, row for
  // axis 1.
  auto axis_coord = [&](int site, const LatticeSpec& s) {
    auto [r, c] = s.coords(site);
    return axis == 0 ? c : r;
  };
  auto remap = [&](int site) {
    auto [r, c] = spec.coords(site);
    return target.site(r, c);
  };

  TermList out;
  out.lattice = target;
  out.model = couplings.model;
  for (const Term& t : base.terms) {
    if (t.support() == 2) {
      int a0 = axis_coord(t.sites[0], spec);
      int a1 = axis_coord(t.sites[1], spec);
      bool along_axis = (axis == 0) ? (t.sublayer < 2) : (t.sublayer >= 2);
      if (along_axis && a0 == old_len - 1 && a1 == 0) continue;  // seam bond
      out.terms.push_back({t.kind, {remap(t.sites[0]), remap(t.sites[1])},
                           t.coefficient, t.sublayer});
    } else {
      out.terms.push_back({t.kind, {remap(t.sites[0]), -1}, t.coefficient, 0});
    }
  }

  // Splice: fields on new sites, axis bonds stitching old_len-1 .. new wrap,
  // transverse bonds inside the new lines.
  auto site_at = [&](int along, int across) {
    return axis == 0 ? target.site(across, along) : target.site(along, across);
  };
  auto bond_sublayer = [&](int along) {
    int parity = along % 2;
    return axis == 0 ? parity : 2 + parity;
  };
  std::vector<TermKind> bond_kinds = couplings.kinds();
  bond_kinds.pop_back();  // x is always last
  for (TermKind k : bond_kinds) {
    double c = couplings.coefficient(k);
    for (int along = old_len - 1; along < new_len; ++along)
      for (int across = 0; across < transverse; ++across)
        out.terms.push_back({k,
                             {site_at(along, across),
                              site_at((along + 1) % new_len, across)},
                             c, bond_sublayer(along)});
    if (spec.dimension == 2) {
      Boundary tb = spec.boundary[1 - axis];
      for (int along = old_len; along < new_len; ++along)
        for (int across = 0; across < transverse; ++across) {
          if (across + 1 >= transverse && tb == Boundary::open) continue;
          int parity = across % 2;
          int sub = axis == 0 ? 2 + parity : parity;
          out.terms.push_back({k,
                               {site_at(along, across),
                                site_at(along, (across + 1) % transverse)},
                               c, sub});
        }
    }
  }
  for (int along = old_len; along < new_len; ++along)
    for (int across = 0; across < transverse; ++across)
      out.terms.push_back(
          {TermKind::x, {site_at(along, across), -1}, couplings.hx, 0});

  canonicalize(out.terms);
  return {target, out};
}

}  // namespace vartrot
