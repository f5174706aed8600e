#ifndef RSG_RELATIONAL_HPP
#define RSG_RELATIONAL_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rsg/core_algebra.hpp"
#include "rsg/errors.hpp"
#include "rsg/term.hpp"

namespace rsg {

inline constexpr int kMaxBasePoints = 64;

// Binary relation over base {0..n-1} as a bit matrix, one word per row.
struct Relation {
  int n = 0;
  std::vector<std::uint64_t> rows;

  Relation() = default;
  explicit Relation(int base_size) : n(base_size), rows(static_cast<std::size_t>(base_size), 0) {}

  bool contains(int i, int j) const { return (rows[static_cast<std::size_t>(i)] >> j) & 1u; }
  void add(int i, int j) { rows[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j; }
  void remove(int i, int j) { rows[static_cast<std::size_t>(i)] &= ~(std::uint64_t{1} << j); }

  bool subset_of(const Relation& other) const;
  bool empty() const;
  int count() const;

  // row-major, the canonical scan order everywhere
  std::vector<std::pair<int, int>> pairs() const;

  friend bool operator==(const Relation&, const Relation&) = default;
  bool operator<(const Relation& other) const;  // (n, rows) lexicographic

  static Relation from_pairs(int base_size, const std::vector<std::pair<int, int>>& ps);
};

Relation rel_union(const Relation& a, const Relation& b);
Relation rel_intersect(const Relation& a, const Relation& b);
Relation identity_relation(int n);

// Unrestricted relational composition (no unit trim).
Relation mat_compose(const Relation& x, const Relation& y);

Relation transitive_closure(const Relation& r);
bool is_transitive(const Relation& r);
bool is_reflexive(const Relation& r);

// points that occur in some pair, ascending
std::vector<int> field_points(const Relation& r);

// Finite base U = {0..n-1} with a transitive unit W whose field is all of U.
// Contexts are immutable after construction.
struct RelationalContext {
  int base_size = 0;
  Relation unit;
  std::vector<std::pair<std::string, Relation>> named;

  RelationalContext(int base_size, Relation unit,
                    std::vector<std::pair<std::string, Relation>> named = {});

  const Relation* find_named(const std::string& name) const;
};

// x∘y = {(u,v) ∈ W : (u,w) ∈ x and (w,v) ∈ y for some w}
Relation compose(const Relation& x, const Relation& y, const RelationalContext& ctx);

// x\y = {(u,v) ∈ W : for every w, (w,u) ∈ x implies (w,v) ∈ y}
Relation rres(const Relation& x, const Relation& y, const RelationalContext& ctx);

// x/y = {(u,v) ∈ W : for every w, (v,w) ∈ y implies (u,w) ∈ x}
Relation lres(const Relation& x, const Relation& y, const RelationalContext& ctx);

Relation apply_op(TermOp op, const Relation& x, const Relation& y, const RelationalContext& ctx);

// Subset of the unit encoded as a bit mask over ctx.unit.pairs().
Relation relation_from_mask(const RelationalContext& ctx, std::uint64_t mask);
std::uint64_t mask_from_relation(const RelationalContext& ctx, const Relation& r);

// (a ≤ a∘a and a∘a ≤ a)  →  a ≤ a∘(b\b)∘a, with ≤ read as ⊆.
bool check_density_implication(const RelationalContext& ctx, const Relation& a, const Relation& b);

// For nonempty a with a = a∘a: return z with (z,z) ∈ a, located by expanding
// a path of a-edges through middle points until a base point repeats.
// Throws PreconditionError naming the failed half (density / transitivity).
int find_reflexive_point(const RelationalContext& ctx, const Relation& a);

struct ClosedMember {
  std::string name;
  TermPtr term;
  Relation value;
  int term_ops = 0;
};

// Least family containing the generators and closed under ∘, \, /.
// New members are named by a shortest witnessing term over the generators,
// ties broken by the canonical term order.
std::vector<ClosedMember> close(const std::vector<std::pair<std::string, Relation>>& generators,
                                const RelationalContext& ctx);

// Read the abstract algebra off a closed family: ≤ is ⊆, tables by applying
// the concrete operations. Throws StructuralError naming the first missing
// result if the family is not closed.
FiniteOrderedAlgebra to_abstract(const std::vector<std::pair<std::string, Relation>>& family,
                                 const RelationalContext& ctx);
FiniteOrderedAlgebra to_abstract(const std::vector<ClosedMember>& family, const RelationalContext& ctx);

Relation eval_term(const Term& t, const std::vector<std::pair<std::string, Relation>>& env,
                   const RelationalContext& ctx);

}  // namespace rsg

#endif
