#ifndef RSG_DLO_HPP
#define RSG_DLO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rsg/closure.hpp"
#include "rsg/core_algebra.hpp"
#include "rsg/relational.hpp"
#include "rsg/term.hpp"

namespace rsg {

// Exact relational computation over the two-sorted dense base
// U = (Q × {0}) ∪ (Q × {1}). A relation is a set of atoms; points (q,s) and
// (r,t) match atom (s,t,c) iff q c r. Twelve atoms total.

enum class Cmp : std::uint8_t { lt = 0, eq = 1, gt = 2 };

const char* cmp_glyph(Cmp c);

struct PatternAtom {
  std::uint8_t src_sort = 0;  // 0 or 1
  std::uint8_t dst_sort = 0;
  Cmp cmp = Cmp::lt;

  int index() const { return src_sort * 6 + dst_sort * 3 + static_cast<int>(cmp); }
  static PatternAtom from_index(int i);

  friend bool operator==(const PatternAtom&, const PatternAtom&) = default;
};

inline constexpr int kPatternAtomCount = 12;

struct PatternRelation {
  std::uint16_t atoms = 0;  // bit per atom index

  bool contains(PatternAtom a) const { return (atoms >> a.index()) & 1u; }
  PatternRelation with(PatternAtom a) const { return {static_cast<std::uint16_t>(atoms | (1u << a.index()))}; }
  bool subset_of(PatternRelation o) const { return (atoms & ~o.atoms) == 0; }
  int count() const;
  bool empty() const { return atoms == 0; }

  friend bool operator==(const PatternRelation&, const PatternRelation&) = default;
  bool operator<(PatternRelation o) const { return atoms < o.atoms; }
};

std::string pattern_to_string(PatternRelation r);

// The fixed unit and the two generators:
//   W = {(0,0,<), (1,0,<), (1,0,=)},  a = {(0,0,<)},  b = {(1,0,=)}
PatternRelation pattern_unit();
PatternRelation pattern_a();
PatternRelation pattern_b();

// --- order-constraint satisfiability over a dense linear order -------------

struct OrderConstraint {
  int lhs = 0, rhs = 0;
  Cmp cmp = Cmp::lt;
};

struct OrderConstraintSystem {
  int points = 0;  // named 0..points-1; at most 3 supported
  std::vector<OrderConstraint> constraints;
};

// Level assignments of the weak orders on `points` labeled points
// (1, 3 and 13 of them for 1, 2 and 3 points).
std::vector<std::vector<int>> enumerate_weak_orders(int points);

// Satisfiable in a dense linear order without endpoints. Decided by scanning
// the weak orders; density and unboundedness make every consistent weak order
// realizable at rational positions. Throws on more than 3 points.
bool dlo_sat(const OrderConstraintSystem& sys);

// --- the three operations on pattern relations ------------------------------

// Results are always trimmed to the unit. The middle-point analysis runs over
// all 18 shapes (sort, two comparisons); dlo_sat decides which are realizable.
PatternRelation compose_sym(PatternRelation x, PatternRelation y);
PatternRelation rres_sym(PatternRelation x, PatternRelation y);
PatternRelation lres_sym(PatternRelation x, PatternRelation y);
PatternRelation apply_op_sym(TermOp op, PatternRelation x, PatternRelation y);

PatternRelation eval_term_sym(const Term& t,
                              const std::vector<std::pair<std::string, PatternRelation>>& env);

// --- the built-in witness algebra -------------------------------------------

// Fixed export order and element names.
inline const std::array<const char*, 7> kWitnessNames = {"⊥", "a", "b", "ba", "⊤", "b′", "a′"};

struct WitnessAlgebra {
  FiniteOrderedAlgebra algebra;             // elements in kWitnessNames order
  std::vector<PatternRelation> relations;   // parallel to algebra.elements
  std::vector<ClosedEntry<PatternRelation>> closure;  // discovery order, canonical term names

  PatternRelation relation_of(const std::string& name) const;
};

// Closes {a, b} under the three symbolic operations and exports the abstract
// algebra (≤ is atom-set inclusion). Throws std::logic_error if the closure
// is not exactly the expected seven relations.
WitnessAlgebra build_witness_algebra();

// Cached singleton of the above.
const WitnessAlgebra& witness_algebra();

// --- reference-table verification -------------------------------------------

struct TableCellMismatch {
  TermOp op;
  int row = 0, col = 0;        // positions in the reference header order
  std::string expected;        // reference entry
  std::string row_col;         // recomputed row • col
  std::string col_row;         // recomputed col • row
};

struct TableCheck {
  int row_col_mismatches = 0;
  int col_row_mismatches = 0;
  std::vector<TableCellMismatch> mismatches;     // any cell failing either orientation
  std::vector<TableCellMismatch> discrepancies;  // cells failing both

  bool row_col_ok() const { return row_col_mismatches == 0; }
  bool col_row_ok() const { return col_row_mismatches == 0; }
  bool exactly_one_orientation() const { return row_col_ok() != col_row_ok(); }
};

// Recompute all 3×49 cells from the algebra's tables and compare against the
// embedded reference tables under both orientations: entry(row, col) = row•col
// and entry(row, col) = col•row. The algebra must carry the witness element
// names. Which orientation matches is reported, never assumed.
TableCheck verify_tables(const FiniteOrderedAlgebra& alg);

// Header order of the embedded reference tables, as names.
const std::array<const char*, 7>& reference_header();

// --- grid sampling oracle ----------------------------------------------------

// Instantiate a pattern relation over the finite base
// {0, 1/2, 1, ..., grid_size} × {0,1}: integers plus midpoints, both sorts.
// Point (position index p, sort s) gets base index 2p+s. 3 ≤ grid_size ≤ 15.
Relation sample_pattern(PatternRelation x, int grid_size);

int sample_base_size(int grid_size);

// Context whose unit is the sampled unit pattern, with "a" and "b" named.
RelationalContext sample_context(int grid_size);

}  // namespace rsg

#endif
