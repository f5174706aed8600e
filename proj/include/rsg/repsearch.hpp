#ifndef RSG_REPSEARCH_HPP
#define RSG_REPSEARCH_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rsg/core_algebra.hpp"
#include "rsg/relational.hpp"
#include "rsg/term.hpp"

namespace rsg {

// Bounded decision of representability on a finite base: scan all transitive
// full-field units up to the base bound and all generator images inside each
// unit. The target must be generated by the chosen generators; images of the
// remaining elements are forced by their defining terms.

struct SearchProblem {
  FiniteOrderedAlgebra target;
  std::vector<int> generators;    // element indices, scan order
  std::vector<TermPtr> terms;     // defining term per element (index-aligned)
  int max_base = 3;
  bool square_mode = false;

  // Target elements x, y with x ≤ x∘x and x ≰ x∘(y\y)∘x, when they exist.
  // On a reflexive unit every y\y contains the identity, so x's image would
  // be forced below the image of x∘(y\y)∘x and no assignment can work; units
  // like that are rejected without scanning.
  std::optional<std::pair<int, int>> reflexive_cut;
};

// Validates that every element has a defining term over the generators and
// that each term evaluates to its element inside the target.
SearchProblem make_search_problem(const FiniteOrderedAlgebra& target,
                                  const std::vector<std::string>& generator_names,
                                  const std::vector<std::pair<std::string, TermPtr>>& defining_terms,
                                  int max_base, bool square_mode);

// Every element is its own generator (leaf terms). Fallback for algebras with
// no known generating set.
SearchProblem identity_search_problem(const FiniteOrderedAlgebra& target, int max_base,
                                      bool square_mode);

// The built-in witness algebra with generators scanned in order b, a and
// b-only defining terms where possible, so most pruning happens before the
// second generator is touched: ⊥=b∘b, ⊤=(b∘b)\b, ba=b∘a, b′=b\b, a′=((b∘b)\b)∘a.
SearchProblem witness_search_problem(int max_base, bool square_mode);

// All transitive relations with field exactly {0..k-1} for each k ≤ n, one
// representative per isomorphism class (minimal adjacency encoding over all
// base permutations), ordered by k then by encoding. Square mode yields the
// single full relation per k. Exhaustive enumeration supports n ≤ 4.
std::vector<RelationalContext> enumerate_units(int n, bool square_mode);

// Naive filters over all 2^(k*k) relations, used to cross-check the
// enumerator. k ≤ 4.
std::uint64_t count_labeled_transitive(int k);
std::uint64_t count_labeled_full_field_transitive(int k);

// Canonical classes of transitive full-field units with at most `max_pairs`
// pairs, over every base size that can carry them (full field forces
// base ≤ 2*max_pairs).
std::vector<RelationalContext> enumerate_units_by_pair_count(int max_pairs);

struct SearchCounters {
  std::uint64_t units_examined = 0;
  std::uint64_t assignments_examined = 0;  // complete generator tuples evaluated
  std::uint64_t reflexive_cuts = 0;

  SearchCounters& operator+=(const SearchCounters& o);
};

struct FoundRepresentation {
  RelationalContext ctx;
  std::vector<std::pair<std::string, Relation>> images;  // generators only
  std::uint64_t unit_index = 0;
};

struct RepresentationResult {
  int max_base = 0;
  std::optional<FoundRepresentation> found;
  SearchCounters counters;

  bool is_found() const { return found.has_value(); }
};

struct SearchOptions {
  int jobs = 1;
  bool prune = true;
  std::ostream* progress = nullptr;  // per-unit progress lines when set
};

// Deterministic: first hit in unit order, then in generator-mask order inside
// the unit; verdicts and counters do not depend on the worker count.
RepresentationResult search_representation(const SearchProblem& problem, SearchOptions opts = {});

// Per-unit scan. Evaluates generator images level by level; with pruning,
// partial assignments are rejected as soon as any determined pair violates
// injectivity, order mirroring or a table equation — rejections are always
// ones the full check would also reject. Calls `sink` with the images of all
// elements for every accepted assignment; scanning stops when `sink` returns
// false. Returns the number of complete assignments examined.
std::uint64_t scan_unit_assignments(const RelationalContext& unit_ctx, const SearchProblem& problem,
                                    bool prune,
                                    const std::function<bool(const std::vector<Relation>&)>& sink);

bool unit_rejected_by_reflexive_cut(const RelationalContext& unit_ctx, const SearchProblem& problem);

// Independent soundness check of a found representation: recompute the
// closure of the generator images, compare its size with the target, and
// check that the induced bijection matches the order and all three tables.
AxiomReport verify_representation(const RelationalContext& ctx,
                                  const std::vector<std::pair<std::string, Relation>>& images,
                                  const SearchProblem& problem);

// --- seeded random structures (search experiments and property tests) -------

using Rng = std::mt19937_64;

// Transitive unit with full field on exactly k points.
RelationalContext sample_unit(Rng& rng, int k);

// As above but guaranteeing at least one reflexive base point in the unit.
RelationalContext sample_unit_with_loop(Rng& rng, int k);

std::uint64_t sample_subset_mask(Rng& rng, int bits);

// Largest fixpoint of r ↦ r∘r below the transitive closure of r: a relation
// satisfying a = a∘a (dense and transitive), possibly empty.
Relation dense_transitive_core(const Relation& r, const RelationalContext& ctx);

// Nonempty dense transitive relation inside the unit; requires a unit with a
// reflexive point (sample_unit_with_loop provides one).
Relation sample_dense_transitive(Rng& rng, const RelationalContext& ctx);

}  // namespace rsg

#endif
