#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vartrot {

enum class Model { tfim, tfxy };

enum class Boundary { periodic, open };

// Interaction kinds in canonical layer order: bond kinds first, fields last.
enum class TermKind { yy, zz, x };

std::string to_string(Model m);
std::string to_string(Boundary b);
std::string to_string(TermKind k);
Model model_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);
TermKind term_kind_from_string(const std::string& s);

// Rectangular spin lattice. Sites are indexed row-major:
// site(r, c) = r * extents[0] + c, with extents[0] the width (column count).
// For dimension 1 only extents[0] and boundary[0] are meaningful.
struct LatticeSpec {
  int dimension = 1;
  std::array<int, 2> extents{2, 1};
  std::array<Boundary, 2> boundary{Boundary::periodic, Boundary::periodic};

  int site_count() const {
    return dimension == 1 ? extents[0] : extents[0] * extents[1];
  }
  int width() const { return extents[0]; }
  int height() const { return dimension == 1 ? 1 : extents[1]; }
  int site(int row, int col) const { return row * extents[0] + col; }
  std::pair<int, int> coords(int site) const {
    return {site / extents[0], site % extents[0]};
  }

  // Throws std::invalid_argument on unusable geometry. A periodic axis needs
  // extent >= 3, otherwise wrap bonds duplicate interior ones.
  void validate() const;

  bool operator==(const LatticeSpec&) const = default;
};

LatticeSpec chain(int n, Boundary b = Boundary::periodic);
LatticeSpec grid(int width, int height, Boundary bx = Boundary::periodic,
                 Boundary by = Boundary::periodic);

// Coupling strengths. TFIM: H = Jz sum ZZ + hx sum X; TFXY adds Jy sum YY.
// Couplings enter the Hamiltonian with their sign as given; term
// coefficients are exactly these values.
struct CouplingSet {
  Model model = Model::tfim;
  double jz = 1.0;
  double hx = 0.0;
  double jy = 0.0;

  // Number of distinct parameter types per layer (bond kinds + field).
  int interaction_count() const { return model == Model::tfim ? 2 : 3; }
  std::vector<TermKind> kinds() const;
  double coefficient(TermKind k) const;
  void validate() const;
};

// One Pauli term. Bond terms keep their enumeration origin in sites[0]
// (wrap bonds are stored as (last, first), not sorted), fields use sites[0]
// only with sites[1] = -1. sublayer groups terms that commute within a
// canonical layer: 1d bonds by origin-site parity (0 even, 1 odd), 2d
// horizontal bonds by column parity (0, 1) then vertical by row parity
// (2, 3); fields are sublayer 0.
struct Term {
  TermKind kind;
  std::array<int, 2> sites{0, -1};
  double coefficient = 0.0;
  int sublayer = 0;

  int support() const { return sites[1] < 0 ? 1 : 2; }
  bool operator==(const Term&) const = default;
};

struct TermList {
  LatticeSpec lattice;
  Model model = Model::tfim;
  std::vector<Term> terms;
};

// Enumerates all Hamiltonian terms in canonical order: for each kind in
// model order (yy, zz, x), sublayers ascending, origin site row-major
// within a sublayer. This order is also the gate order of one circuit layer.
TermList build_terms(const LatticeSpec& spec, const CouplingSet& couplings);

// Grows a periodic axis by inserted sites: cuts the wrap bonds crossing the
// seam, splices in new lines of sites with their bonds and fields, and
// re-canonicalizes. added_sites counts qubits; for dimension 2 it must be a
// multiple of the transverse extent (whole lines are inserted).
// Result equals build_terms on the enlarged spec.
std::pair<LatticeSpec, TermList> extend_hamiltonian(const LatticeSpec& spec,
                                                    const CouplingSet& couplings,
                                                    int added_sites,
                                                    int axis = 0);

}  // namespace vartrot
