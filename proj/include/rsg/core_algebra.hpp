#ifndef RSG_CORE_ALGEBRA_HPP
#define RSG_CORE_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsg/term.hpp"

namespace rsg {

// Finite algebra of signature (≤, ∘, \, /) given by explicit tables.
// Element identity is by name; tables map ordered index pairs to indices.
struct FiniteOrderedAlgebra {
  std::vector<std::string> elements;
  std::vector<std::uint8_t> le_bits;  // m*m, row-major
  std::vector<int> comp_tab, rres_tab, lres_tab;

  int size() const { return static_cast<int>(elements.size()); }

  bool le(int x, int y) const { return le_bits[static_cast<std::size_t>(x) * elements.size() + y] != 0; }
  void set_le(int x, int y, bool v = true) { le_bits[static_cast<std::size_t>(x) * elements.size() + y] = v ? 1 : 0; }

  int comp(int x, int y) const { return comp_tab[static_cast<std::size_t>(x) * elements.size() + y]; }
  int rres(int x, int y) const { return rres_tab[static_cast<std::size_t>(x) * elements.size() + y]; }
  int lres(int x, int y) const { return lres_tab[static_cast<std::size_t>(x) * elements.size() + y]; }
  int apply(TermOp op, int x, int y) const;

  // -1 when absent
  int element_index(const std::string& name) const;

  static FiniteOrderedAlgebra make(std::vector<std::string> elements);
};

// Throws StructuralError: duplicate/empty names, wrong table sizes,
// out-of-range entries.
void check_structure(const FiniteOrderedAlgebra& alg);

struct Violation {
  std::string axiom;         // reflexivity, transitivity, associativity, ...
  std::vector<int> witness;  // element indices
  std::string detail;
};

struct AxiomReport {
  bool passed = true;
  std::uint64_t total_violations = 0;
  std::vector<Violation> violations;  // capped; scan order is lexicographic by index
  std::uint64_t total_warnings = 0;
  std::vector<Violation> warnings;  // antisymmetry only

  void merge(const AxiomReport& other);
};

inline constexpr int kDefaultWitnessCap = 100;

// ≤ must be reflexive and transitive; antisymmetry failures are warnings.
AxiomReport check_order(const FiniteOrderedAlgebra& alg, int witness_cap = kDefaultWitnessCap);

// ∘ associative.
AxiomReport check_semigroup(const FiniteOrderedAlgebra& alg, int witness_cap = kDefaultWitnessCap);

// x ≤ x', y ≤ y'  ⇒  x∘y ≤ x'∘y'.
AxiomReport check_monotonicity(const FiniteOrderedAlgebra& alg, int witness_cap = kDefaultWitnessCap);

// y ≤ x\z  ⇔  x∘y ≤ z  ⇔  x ≤ z/y, for every triple.
AxiomReport check_residuation(const FiniteOrderedAlgebra& alg, int witness_cap = kDefaultWitnessCap);

// All four checks. Structural defects throw; axiom violations are reported.
AxiomReport validate(const FiniteOrderedAlgebra& alg, int witness_cap = kDefaultWitnessCap);

// Same carrier and order, x∘'y = y∘x with the residuals swapped accordingly.
// A residuated semigroup iff the original is.
FiniteOrderedAlgebra opposite(const FiniteOrderedAlgebra& alg);

// Evaluate a term inside the algebra's own tables. Throws on unbound leaves.
int eval_term_abstract(const Term& t, const std::map<std::string, int>& env,
                       const FiniteOrderedAlgebra& alg);

}  // namespace rsg

#endif
