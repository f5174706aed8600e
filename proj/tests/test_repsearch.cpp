#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "rsg/core_algebra.hpp"
#include "rsg/dlo.hpp"
#include "rsg/errors.hpp"
#include "rsg/relational.hpp"
#include "rsg/repsearch.hpp"

using namespace rsg;

namespace {

FiniteOrderedAlgebra b2_algebra(RelationalContext& out_ctx) {
  out_ctx = RelationalContext(2, Relation::from_pairs(2, {{0, 1}}));
  auto fam = close({{"g", out_ctx.unit}}, out_ctx);
  return to_abstract(fam, out_ctx);
}

SearchProblem b2_problem(int max_base, bool square = false) {
  RelationalContext ctx(1, Relation::from_pairs(1, {{0, 0}}));
  auto alg = b2_algebra(ctx);
  return make_search_problem(alg, {"g"}, {{"g∘g", tcomp(tvar("g"), tvar("g"))}}, max_base, square);
}

// pruned and unpruned scans must accept exactly the same assignments
void check_scan_agreement(const SearchProblem& p, int max_base) {
  for (const auto& ctx : enumerate_units(max_base, false)) {
    std::set<std::uint64_t> pruned_hits, naive_hits;
    auto key = [&](const std::vector<Relation>& images) {
      std::uint64_t k = 0;
      for (int g : p.generators)
        k = k * 1000003u + mask_from_relation(ctx, images[static_cast<std::size_t>(g)]);
      return k;
    };
    std::uint64_t pruned = scan_unit_assignments(ctx, p, true, [&](const auto& im) {
      pruned_hits.insert(key(im));
      return true;
    });
    std::uint64_t naive = scan_unit_assignments(ctx, p, false, [&](const auto& im) {
      naive_hits.insert(key(im));
      return true;
    });
    CHECK(pruned_hits == naive_hits);
    CHECK(pruned <= naive);
    std::uint64_t bound = 1;
    for (std::size_t g = 0; g < p.generators.size(); ++g) bound *= std::uint64_t{1} << ctx.unit.count();
    CHECK(naive == bound);
  }
}

}  // namespace

TEST_CASE("naive labeled counts cross-check the enumerator") {
  CHECK(count_labeled_transitive(1) == 2);
  CHECK(count_labeled_transitive(2) == 13);
  CHECK(count_labeled_transitive(3) == 171);
  CHECK(count_labeled_transitive(4) == 3994);
  CHECK(count_labeled_full_field_transitive(1) == 1);
  CHECK(count_labeled_full_field_transitive(2) == 10);
  CHECK(count_labeled_full_field_transitive(3) == 137);
  CHECK(count_labeled_full_field_transitive(4) == 3381);
}

TEST_CASE("canonical unit classes per base size") {
  CHECK(enumerate_units(1, false).size() == 1);
  CHECK(enumerate_units(2, false).size() == 1 + 6);
  CHECK(enumerate_units(3, false).size() == 1 + 6 + 31);
  for (const auto& ctx : enumerate_units(3, false)) {
    CHECK(is_transitive(ctx.unit));
    CHECK(static_cast<int>(field_points(ctx.unit).size()) == ctx.base_size);
  }
}

TEST_CASE("orbit sizes of the canonical classes sum to the labeled count") {
  for (int k = 1; k <= 3; ++k) {
    std::uint64_t labeled = 0;
    std::vector<int> perm;
    for (const auto& ctx : enumerate_units(k, false)) {
      if (ctx.base_size != k) continue;
      // count distinct relabelings of this representative
      std::set<std::vector<std::uint64_t>> orbit;
      std::vector<int> p(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = i;
      do {
        Relation r(k);
        for (auto [i, j] : ctx.unit.pairs())
          r.add(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        orbit.insert(r.rows);
      } while (std::next_permutation(p.begin(), p.end()));
      labeled += orbit.size();
    }
    CHECK(labeled == count_labeled_full_field_transitive(k));
  }
}

TEST_CASE("square mode yields one full unit per base size") {
  auto units = enumerate_units(2, true);
  REQUIRE(units.size() == 2);
  CHECK(units[0].unit == Relation::from_pairs(1, {{0, 0}}));
  CHECK(units[1].unit.count() == 4);
  CHECK(enumerate_units(1, true).size() == 1);  // the empty-field unit is excluded by k=1
  for (const auto& u : enumerate_units(4, true)) CHECK(is_reflexive(u.unit));
}

TEST_CASE("units with a bounded pair count cover every viable base size") {
  auto units = enumerate_units_by_pair_count(4);
  CHECK(units.size() == 100);
  std::map<int, int> by_base;
  for (const auto& u : units) {
    CHECK(u.unit.count() <= 4);
    CHECK(is_transitive(u.unit));
    ++by_base[u.base_size];
  }
  CHECK(by_base[1] == 1);
  CHECK(by_base[2] == 6);
  CHECK(by_base[3] == 19);
  CHECK(by_base[4] == 32);
  CHECK(by_base[5] == 26);
  CHECK(by_base[6] == 12);
  CHECK(by_base[7] == 3);
  CHECK(by_base[8] == 1);  // four disjoint arrows
}

TEST_CASE("search problems validate their defining terms") {
  RelationalContext ctx(1, Relation::from_pairs(1, {{0, 0}}));
  auto alg = b2_algebra(ctx);
  CHECK_THROWS_AS(make_search_problem(alg, {"nope"}, {}, 2, false), StructuralError);
  CHECK_THROWS_AS(make_search_problem(alg, {"g"}, {}, 2, false), StructuralError);  // g∘g missing
  CHECK_THROWS_AS(
      make_search_problem(alg, {"g"}, {{"g∘g", trres(tvar("g"), tvar("g"))}}, 2, false),
      StructuralError);  // g\g evaluates to g, not g∘g
  CHECK_NOTHROW(make_search_problem(alg, {"g"}, {{"g∘g", tcomp(tvar("g"), tvar("g"))}}, 2, false));
}

TEST_CASE("the witness problem carries a reflexive cut, the control does not") {
  auto wp = witness_search_problem(2, false);
  REQUIRE(wp.reflexive_cut.has_value());
  // the cut pair really satisfies x ≤ x∘x and x ≰ x∘(y\y)∘x in the target
  auto [x, y] = *wp.reflexive_cut;
  const auto& t = wp.target;
  CHECK(t.le(x, t.comp(x, x)));
  CHECK(!t.le(x, t.comp(t.comp(x, t.rres(y, y)), x)));

  CHECK(!b2_problem(2).reflexive_cut.has_value());
}

TEST_CASE("positive control: the two-element algebra is found on base 2") {
  auto res = search_representation(b2_problem(2));
  REQUIRE(res.is_found());
  CHECK(res.found->ctx.base_size == 2);
  auto report = verify_representation(res.found->ctx, res.found->images, b2_problem(2));
  CHECK(report.passed);
}

TEST_CASE("the witness algebra is not represented on tiny bases") {
  for (int n : {1, 2}) {
    auto res = search_representation(witness_search_problem(n, false));
    CHECK(!res.is_found());
    CHECK(res.counters.units_examined == enumerate_units(n, false).size());
  }
}

TEST_CASE("pruned and naive scans agree on the witness problem") {
  check_scan_agreement(witness_search_problem(2, false), 2);
}

TEST_CASE("pruned and naive scans agree on the positive control") {
  check_scan_agreement(b2_problem(2), 2);
}

TEST_CASE("pruning strictly undercuts the naive bound on the witness problem") {
  auto p = witness_search_problem(2, false);
  for (const auto& ctx : enumerate_units(2, false)) {
    std::uint64_t pruned = scan_unit_assignments(ctx, p, true, [](const auto&) { return true; });
    std::uint64_t naive_bound = (std::uint64_t{1} << ctx.unit.count()) *
                                (std::uint64_t{1} << ctx.unit.count());
    CHECK(pruned < naive_bound);
  }
}

TEST_CASE("pruned and naive scans agree on random closed algebras") {
  std::mt19937_64 rng(20240601);
  int done = 0;
  while (done < 20) {
    int k = 1 + static_cast<int>(rng() % 2);
    auto ctx = sample_unit(rng, k);
    Relation g1 = relation_from_mask(ctx, sample_subset_mask(rng, ctx.unit.count()));
    Relation g2 = relation_from_mask(ctx, sample_subset_mask(rng, ctx.unit.count()));
    std::vector<std::pair<std::string, Relation>> gens = {{"p", g1}};
    if (!(g2 == g1)) gens.emplace_back("q", g2);
    auto fam = close(gens, ctx);
    if (fam.size() > 12) continue;
    auto alg = to_abstract(fam, ctx);
    std::vector<std::string> gen_names;
    std::vector<std::pair<std::string, TermPtr>> terms;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      if (i < gens.size())
        gen_names.push_back(fam[i].name);
      else
        terms.emplace_back(fam[i].name, fam[i].term);
    }
    auto problem = make_search_problem(alg, gen_names, terms, 2, false);
    check_scan_agreement(problem, 2);

    auto pruned_res = search_representation(problem, {.jobs = 1, .prune = true});
    auto naive_res = search_representation(problem, {.jobs = 1, .prune = false});
    CHECK(pruned_res.is_found() == naive_res.is_found());
    if (pruned_res.is_found()) {
      CHECK(pruned_res.found->unit_index == naive_res.found->unit_index);
      CHECK(pruned_res.found->images == naive_res.found->images);
    }
    ++done;
  }
}

TEST_CASE("round-trip: closures of small contexts are re-found at their own base size") {
  std::mt19937_64 rng(987);
  int done = 0;
  while (done < 8) {
    int k = 1 + static_cast<int>(rng() % 3);
    auto ctx = sample_unit(rng, k);
    Relation g1 = relation_from_mask(ctx, sample_subset_mask(rng, ctx.unit.count()));
    Relation g2 = relation_from_mask(ctx, sample_subset_mask(rng, ctx.unit.count()));
    std::vector<std::pair<std::string, Relation>> gens = {{"p", g1}};
    if (!(g2 == g1)) gens.emplace_back("q", g2);
    auto fam = close(gens, ctx);
    if (fam.size() > 10) continue;
    auto alg = to_abstract(fam, ctx);
    std::vector<std::string> gen_names;
    std::vector<std::pair<std::string, TermPtr>> terms;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      if (i < gens.size())
        gen_names.push_back(fam[i].name);
      else
        terms.emplace_back(fam[i].name, fam[i].term);
    }
    auto problem = make_search_problem(alg, gen_names, terms, ctx.base_size, false);
    auto res = search_representation(problem);
    REQUIRE(res.is_found());
    CHECK(verify_representation(res.found->ctx, res.found->images, problem).passed);
    ++done;
  }
}

TEST_CASE("verify_representation rejects duplicated images") {
  auto p = b2_problem(2);
  RelationalContext ctx(2, Relation::from_pairs(2, {{0, 1}}));
  // map both elements to the same relation by choosing h(g) = ∅
  auto report = verify_representation(ctx, {{"g", Relation(2)}}, p);
  CHECK(!report.passed);
}

TEST_CASE("verdicts and counters are independent of the worker count") {
  auto problem = witness_search_problem(3, false);
  auto r1 = search_representation(problem, {.jobs = 1});
  auto r4 = search_representation(problem, {.jobs = 4});
  CHECK(r1.is_found() == r4.is_found());
  CHECK(r1.counters.units_examined == r4.counters.units_examined);
  CHECK(r1.counters.assignments_examined == r4.counters.assignments_examined);
  CHECK(r1.counters.reflexive_cuts == r4.counters.reflexive_cuts);

  auto f1 = search_representation(b2_problem(2), {.jobs = 1});
  auto f3 = search_representation(b2_problem(2), {.jobs = 3});
  REQUIRE(f1.is_found());
  REQUIRE(f3.is_found());
  CHECK(f1.found->unit_index == f3.found->unit_index);
  CHECK(f1.found->images == f3.found->images);
  CHECK(f1.counters.assignments_examined == f3.counters.assignments_examined);
}

TEST_CASE("square mode cuts every unit for the witness problem") {
  auto res = search_representation(witness_search_problem(4, true));
  CHECK(!res.is_found());
  CHECK(res.counters.units_examined == 4);
  CHECK(res.counters.reflexive_cuts == 4);
  CHECK(res.counters.assignments_examined == 0);
}

TEST_CASE("the square cut is empirically conservative") {
  // the full unpruned scan over the 2x2 square unit must accept nothing
  auto p = witness_search_problem(2, true);
  auto units = enumerate_units(2, true);
  std::uint64_t hits = 0;
  scan_unit_assignments(units[1], p, false, [&](const auto&) {
    ++hits;
    return true;
  });
  CHECK(hits == 0);
}

TEST_CASE("samplers produce valid structures") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + static_cast<int>(rng() % 6);
    auto ctx = sample_unit(rng, k);
    CHECK(ctx.base_size == k);
    CHECK(is_transitive(ctx.unit));
    CHECK(static_cast<int>(field_points(ctx.unit).size()) == k);

    auto loop_ctx = sample_unit_with_loop(rng, k);
    bool has_loop = false;
    for (int i = 0; i < k; ++i) has_loop = has_loop || loop_ctx.unit.contains(i, i);
    CHECK(has_loop);

    Relation a = sample_dense_transitive(rng, loop_ctx);
    CHECK(!a.empty());
    CHECK(compose(a, a, loop_ctx) == a);
  }
}
