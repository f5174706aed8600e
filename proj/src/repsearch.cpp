#include "rsg/repsearch.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "rsg/dlo.hpp"

namespace rsg {

SearchCounters& SearchCounters::operator+=(const SearchCounters& o) {
  units_examined += o.units_examined;
  assignments_examined += o.assignments_examined;
  reflexive_cuts += o.reflexive_cuts;
  return *this;
}

namespace {

std::optional<std::pair<int, int>> compute_reflexive_cut(const FiniteOrderedAlgebra& t) {
  int m = t.size();
  for (int x = 0; x < m; ++x) {
    if (!t.le(x, t.comp(x, x))) continue;  // x must be dense
    for (int y = 0; y < m; ++y)
      if (!t.le(x, t.comp(t.comp(x, t.rres(y, y)), x))) return std::pair{x, y};
  }
  return std::nullopt;
}

}  // namespace

SearchProblem make_search_problem(const FiniteOrderedAlgebra& target,
                                  const std::vector<std::string>& generator_names,
                                  const std::vector<std::pair<std::string, TermPtr>>& defining_terms,
                                  int max_base, bool square_mode) {
  check_structure(target);
  SearchProblem p;
  p.target = target;
  p.max_base = max_base;
  p.square_mode = square_mode;

  std::map<std::string, int> env;
  for (const auto& name : generator_names) {
    int idx = target.element_index(name);
    if (idx < 0) throw StructuralError("generator '" + name + "' is not an element of the target");
    if (env.count(name)) throw StructuralError("generator '" + name + "' listed twice");
    env[name] = idx;
    p.generators.push_back(idx);
  }
  if (p.generators.empty()) throw StructuralError("no generators given");

  p.terms.assign(static_cast<std::size_t>(target.size()), nullptr);
  for (const auto& [name, term] : defining_terms) {
    int idx = target.element_index(name);
    if (idx < 0) throw StructuralError("defining term given for unknown element '" + name + "'");
    p.terms[static_cast<std::size_t>(idx)] = term;
  }
  for (int g : p.generators) {
    auto& slot = p.terms[static_cast<std::size_t>(g)];
    if (!slot) slot = tvar(target.elements[static_cast<std::size_t>(g)]);
  }
  for (int e = 0; e < target.size(); ++e) {
    const auto& term = p.terms[static_cast<std::size_t>(e)];
    const std::string& name = target.elements[static_cast<std::size_t>(e)];
    if (!term) throw StructuralError("missing defining term for element '" + name + "'");
    int got = eval_term_abstract(*term, env, target);
    if (got != e)
      throw StructuralError("defining term for '" + name + "' evaluates to '" +
                            target.elements[static_cast<std::size_t>(got)] + "' in the target");
  }
  p.reflexive_cut = compute_reflexive_cut(target);
  return p;
}

SearchProblem identity_search_problem(const FiniteOrderedAlgebra& target, int max_base,
                                      bool square_mode) {
  return make_search_problem(target, target.elements, {}, max_base, square_mode);
}

SearchProblem witness_search_problem(int max_base, bool square_mode) {
  const auto& w = witness_algebra();
  TermPtr a = tvar("a"), b = tvar("b");
  TermPtr bb = tcomp(b, b);
  std::vector<std::pair<std::string, TermPtr>> terms = {
      {"⊥", bb},
      {"⊤", trres(bb, b)},
      {"ba", tcomp(b, a)},
      {"b′", trres(b, b)},
      {"a′", tcomp(trres(bb, b), a)},
  };
  // b first: its assignment already determines ⊥, ⊤ and b′, so the order,
  // distinctness and table constraints among those four prune most b-images
  // before a is ever scanned.
  return make_search_problem(w.algebra, {"b", "a"}, terms, max_base, square_mode);
}

// --- unit enumeration ---------------------------------------------------------

namespace {

bool mask_transitive(std::uint64_t mask, int k) {
  auto row = [&](int i) {
    return (mask >> (i * k)) & ((std::uint64_t{1} << k) - 1);
  };
  for (int i = 0; i < k; ++i) {
    std::uint64_t ri = row(i);
    std::uint64_t r = ri;
    while (r) {
      int j = std::countr_zero(r);
      if (row(j) & ~ri) return false;
      r &= r - 1;
    }
  }
  return true;
}

bool mask_full_field(std::uint64_t mask, int k) {
  std::uint64_t touched = 0;
  for (int i = 0; i < k; ++i) {
    std::uint64_t ri = (mask >> (i * k)) & ((std::uint64_t{1} << k) - 1);
    if (ri) touched |= std::uint64_t{1} << i;
    touched |= ri;
  }
  return touched == (std::uint64_t{1} << k) - 1;
}

void permutations_of(int k, std::vector<std::vector<int>>& out) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

std::uint64_t relabel_mask(std::uint64_t mask, int k, const std::vector<int>& perm) {
  std::uint64_t out = 0;
  std::uint64_t m = mask;
  while (m) {
    int bit = std::countr_zero(m);
    int i = bit / k, j = bit % k;
    out |= std::uint64_t{1} << (perm[static_cast<std::size_t>(i)] * k + perm[static_cast<std::size_t>(j)]);
    m &= m - 1;
  }
  return out;
}

std::uint64_t canonical_mask(std::uint64_t mask, int k, const std::vector<std::vector<int>>& perms) {
  std::uint64_t best = ~std::uint64_t{0};
  for (const auto& perm : perms) best = std::min(best, relabel_mask(mask, k, perm));
  return best;
}

RelationalContext context_from_mask(std::uint64_t mask, int k) {
  Relation unit(k);
  std::uint64_t m = mask;
  while (m) {
    int bit = std::countr_zero(m);
    unit.add(bit / k, bit % k);
    m &= m - 1;
  }
  return RelationalContext(k, unit);
}

}  // namespace

std::vector<RelationalContext> enumerate_units(int n, bool square_mode) {
  if (n < 1) throw PreconditionError("base bound must be at least 1");
  std::vector<RelationalContext> out;
  if (square_mode) {
    if (n > 7) throw PreconditionError("square mode supports base bound up to 7");
    for (int k = 1; k <= n; ++k) {
      Relation unit(k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) unit.add(i, j);
      out.emplace_back(k, unit);
    }
    return out;
  }
  if (n > 4) throw PreconditionError("exhaustive unit enumeration supports base bound up to 4");
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<int>> perms;
    permutations_of(k, perms);
    std::set<std::uint64_t> canon;
    std::uint64_t total = std::uint64_t{1} << (k * k);
    for (std::uint64_t mask = 0; mask < total; ++mask)
      if (mask_full_field(mask, k) && mask_transitive(mask, k))
        canon.insert(canonical_mask(mask, k, perms));
    for (std::uint64_t enc : canon) out.push_back(context_from_mask(enc, k));
  }
  return out;
}

std::uint64_t count_labeled_transitive(int k) {
  if (k < 1 || k > 4) throw PreconditionError("supported for 1..4 points");
  std::uint64_t count = 0;
  std::uint64_t total = std::uint64_t{1} << (k * k);
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (mask_transitive(mask, k)) ++count;
  return count;
}

std::uint64_t count_labeled_full_field_transitive(int k) {
  if (k < 1 || k > 4) throw PreconditionError("supported for 1..4 points");
  std::uint64_t count = 0;
  std::uint64_t total = std::uint64_t{1} << (k * k);
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (mask_full_field(mask, k) && mask_transitive(mask, k)) ++count;
  return count;
}

std::vector<RelationalContext> enumerate_units_by_pair_count(int max_pairs) {
  if (max_pairs < 1 || max_pairs > 6) throw PreconditionError("pair bound supported for 1..6");
  std::vector<RelationalContext> out;
  for (int k = 1; k <= 2 * max_pairs && k <= 8; ++k) {
    std::vector<std::vector<int>> perms;
    permutations_of(k, perms);
    std::set<std::uint64_t> canon;
    int cells = k * k;
    int min_pairs = (k + 1) / 2;  // full field needs at least ceil(k/2) pairs
    for (int sz = min_pairs; sz <= max_pairs && sz <= cells; ++sz) {
      std::vector<int> comb(static_cast<std::size_t>(sz));
      for (int i = 0; i < sz; ++i) comb[static_cast<std::size_t>(i)] = i;
      for (;;) {
        std::uint64_t mask = 0;
        for (int c : comb) mask |= std::uint64_t{1} << c;
        if (mask_full_field(mask, k) && mask_transitive(mask, k))
          canon.insert(canonical_mask(mask, k, perms));
        // next combination
        int i = sz - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == cells - sz + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < sz; ++j)
          comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    for (std::uint64_t enc : canon) out.push_back(context_from_mask(enc, k));
  }
  return out;
}

// --- assignment scan -----------------------------------------------------------

namespace {

struct ScanPlan {
  int m = 0, k = 0;
  std::map<std::string, int> gen_index;            // generator name → element index
  std::vector<int> elem_level;                     // level at which an element is determined
  std::vector<std::vector<int>> new_at;            // elements newly determined per level
  std::vector<std::vector<std::pair<int, int>>> pair_checks_at;    // x < y
  std::vector<std::vector<std::array<int, 4>>> table_checks_at;    // (op, x, y, z)
};

ScanPlan build_plan(const SearchProblem& p) {
  ScanPlan plan;
  plan.m = p.target.size();
  plan.k = static_cast<int>(p.generators.size());
  std::map<std::string, int> gen_level;
  for (int l = 0; l < plan.k; ++l) {
    const std::string& name = p.target.elements[static_cast<std::size_t>(p.generators[static_cast<std::size_t>(l)])];
    gen_level[name] = l;
    plan.gen_index[name] = p.generators[static_cast<std::size_t>(l)];
  }
  plan.elem_level.assign(static_cast<std::size_t>(plan.m), 0);
  plan.new_at.assign(static_cast<std::size_t>(plan.k), {});
  for (int e = 0; e < plan.m; ++e) {
    int level = 0;
    for (const auto& leaf : term_leaves(*p.terms[static_cast<std::size_t>(e)]))
      level = std::max(level, gen_level.at(leaf));
    plan.elem_level[static_cast<std::size_t>(e)] = level;
    plan.new_at[static_cast<std::size_t>(level)].push_back(e);
  }
  plan.pair_checks_at.assign(static_cast<std::size_t>(plan.k), {});
  plan.table_checks_at.assign(static_cast<std::size_t>(plan.k), {});
  for (int x = 0; x < plan.m; ++x)
    for (int y = 0; y < plan.m; ++y) {
      int lvl = std::max(plan.elem_level[static_cast<std::size_t>(x)],
                         plan.elem_level[static_cast<std::size_t>(y)]);
      if (x < y) plan.pair_checks_at[static_cast<std::size_t>(lvl)].emplace_back(x, y);
      for (TermOp op : {TermOp::comp, TermOp::rres, TermOp::lres}) {
        int z = p.target.apply(op, x, y);
        int tlvl = std::max(lvl, plan.elem_level[static_cast<std::size_t>(z)]);
        plan.table_checks_at[static_cast<std::size_t>(tlvl)].push_back(
            {static_cast<int>(op), x, y, z});
      }
    }
  return plan;
}

Relation eval_plan_term(const Term& t, const ScanPlan& plan, const std::vector<Relation>& images,
                        const RelationalContext& ctx) {
  if (t.is_leaf()) return images[static_cast<std::size_t>(plan.gen_index.at(t.leaf))];
  return apply_op(t.op, eval_plan_term(*t.lhs, plan, images, ctx),
                  eval_plan_term(*t.rhs, plan, images, ctx), ctx);
}

bool run_level_checks(const ScanPlan& plan, const SearchProblem& p,
                      const std::vector<Relation>& images, const RelationalContext& ctx,
                      int level) {
  for (auto [x, y] : plan.pair_checks_at[static_cast<std::size_t>(level)]) {
    const Relation& ix = images[static_cast<std::size_t>(x)];
    const Relation& iy = images[static_cast<std::size_t>(y)];
    if (ix == iy) return false;  // distinct elements must get distinct images
    if (ix.subset_of(iy) != p.target.le(x, y)) return false;
    if (iy.subset_of(ix) != p.target.le(y, x)) return false;
  }
  for (const auto& [op, x, y, z] : plan.table_checks_at[static_cast<std::size_t>(level)])
    if (apply_op(static_cast<TermOp>(op), images[static_cast<std::size_t>(x)],
                 images[static_cast<std::size_t>(y)], ctx) != images[static_cast<std::size_t>(z)])
      return false;
  return true;
}

}  // namespace

bool unit_rejected_by_reflexive_cut(const RelationalContext& unit_ctx, const SearchProblem& problem) {
  return problem.reflexive_cut.has_value() && is_reflexive(unit_ctx.unit);
}

std::uint64_t scan_unit_assignments(const RelationalContext& unit_ctx, const SearchProblem& problem,
                                    bool prune,
                                    const std::function<bool(const std::vector<Relation>&)>& sink) {
  ScanPlan plan = build_plan(problem);
  int wsize = unit_ctx.unit.count();
  if (wsize > 62) throw PreconditionError("unit too large to scan all image subsets");
  std::uint64_t examined = 0;
  std::vector<Relation> images(static_cast<std::size_t>(plan.m));
  bool stop = false;

  auto rec = [&](auto&& self, int level) -> void {
    std::uint64_t total = std::uint64_t{1} << wsize;
    for (std::uint64_t mask = 0; mask < total && !stop; ++mask) {
      images[static_cast<std::size_t>(problem.generators[static_cast<std::size_t>(level)])] =
          relation_from_mask(unit_ctx, mask);
      for (int e : plan.new_at[static_cast<std::size_t>(level)])
        images[static_cast<std::size_t>(e)] =
            eval_plan_term(*problem.terms[static_cast<std::size_t>(e)], plan, images, unit_ctx);
      bool last = level == plan.k - 1;
      if (last) ++examined;
      bool ok = true;
      if (prune) {
        ok = run_level_checks(plan, problem, images, unit_ctx, level);
      } else if (last) {
        for (int l = 0; l < plan.k && ok; ++l)
          ok = run_level_checks(plan, problem, images, unit_ctx, l);
      }
      if (!ok) continue;
      if (last) {
        if (!sink(images)) stop = true;
      } else {
        self(self, level + 1);
      }
    }
  };
  rec(rec, 0);
  return examined;
}

// --- search driver --------------------------------------------------------------

RepresentationResult search_representation(const SearchProblem& problem, SearchOptions opts) {
  auto units = enumerate_units(problem.max_base, problem.square_mode);
  const std::size_t n_units = units.size();
  const std::uint64_t kNone = ~std::uint64_t{0};

  struct UnitOutcome {
    SearchCounters counters;
    std::optional<FoundRepresentation> found;
  };
  std::vector<UnitOutcome> outcomes(n_units);
  std::atomic<std::uint64_t> best_found{kNone};
  std::atomic<std::uint64_t> units_done{0};
  std::mutex io_mutex;

  int jobs = std::max(1, opts.jobs);
  auto work = [&](int worker) {
    for (std::size_t idx = static_cast<std::size_t>(worker); idx < n_units;
         idx += static_cast<std::size_t>(jobs)) {
      if (idx > best_found.load(std::memory_order_relaxed)) continue;
      const RelationalContext& ctx = units[idx];
      UnitOutcome& out = outcomes[idx];
      out.counters.units_examined = 1;
      if (unit_rejected_by_reflexive_cut(ctx, problem)) {
        out.counters.reflexive_cuts = 1;
      } else {
        std::optional<std::vector<Relation>> hit;
        out.counters.assignments_examined =
            scan_unit_assignments(ctx, problem, opts.prune, [&](const std::vector<Relation>& images) {
              hit = images;
              return false;  // first accepted assignment per unit
            });
        if (hit) {
          std::vector<std::pair<std::string, Relation>> gen_images;
          for (int g : problem.generators)
            gen_images.emplace_back(problem.target.elements[static_cast<std::size_t>(g)],
                                    (*hit)[static_cast<std::size_t>(g)]);
          out.found = FoundRepresentation{ctx, std::move(gen_images), idx};
          std::uint64_t cur = best_found.load();
          while (idx < cur && !best_found.compare_exchange_weak(cur, idx)) {
          }
        }
      }
      std::uint64_t done = units_done.fetch_add(1) + 1;
      if (opts.progress) {
        std::lock_guard<std::mutex> lock(io_mutex);
        *opts.progress << "  unit " << done << "/" << n_units << " (base "
                       << ctx.base_size << ", |W|=" << ctx.unit.count() << ")\n";
      }
    }
  };

  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 1; w < jobs; ++w) threads.emplace_back(work, w);
    work(0);
    for (auto& t : threads) t.join();
  }

  RepresentationResult result;
  result.max_base = problem.max_base;
  std::uint64_t best = best_found.load();
  for (std::size_t idx = 0; idx < n_units; ++idx) {
    if (best != kNone && idx > best) break;
    result.counters += outcomes[idx].counters;
    if (idx == best) result.found = outcomes[idx].found;
  }
  return result;
}

AxiomReport verify_representation(const RelationalContext& ctx,
                                  const std::vector<std::pair<std::string, Relation>>& images,
                                  const SearchProblem& problem) {
  AxiomReport report;
  auto fail = [&report](const std::string& axiom, const std::string& detail) {
    report.passed = false;
    ++report.total_violations;
    report.violations.push_back({axiom, {}, detail});
  };
  const FiniteOrderedAlgebra& t = problem.target;
  int m = t.size();
  try {
    auto family = close(images, ctx);
    if (static_cast<int>(family.size()) != m)
      fail("closure-size", "closure of the images has " + std::to_string(family.size()) +
                               " members, target has " + std::to_string(m));

    std::vector<Relation> img(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e)
      img[static_cast<std::size_t>(e)] =
          eval_term(*problem.terms[static_cast<std::size_t>(e)], images, ctx);

    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y)
        if (img[static_cast<std::size_t>(x)] == img[static_cast<std::size_t>(y)])
          fail("injectivity", t.elements[static_cast<std::size_t>(x)] + " and " +
                                  t.elements[static_cast<std::size_t>(y)] +
                                  " share one image relation");

    for (int e = 0; e < m; ++e) {
      bool in_family = false;
      for (const auto& member : family)
        in_family = in_family || member.value == img[static_cast<std::size_t>(e)];
      if (!in_family)
        fail("closure-membership",
             "image of " + t.elements[static_cast<std::size_t>(e)] + " is not in the closure");
    }

    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        bool mirrored = img[static_cast<std::size_t>(x)].subset_of(img[static_cast<std::size_t>(y)]);
        if (mirrored != t.le(x, y))
          fail("order", "≤ between " + t.elements[static_cast<std::size_t>(x)] + " and " +
                            t.elements[static_cast<std::size_t>(y)] + " is not mirrored");
        for (TermOp op : {TermOp::comp, TermOp::rres, TermOp::lres}) {
          Relation lhs = apply_op(op, img[static_cast<std::size_t>(x)],
                                  img[static_cast<std::size_t>(y)], ctx);
          int z = t.apply(op, x, y);
          if (!(lhs == img[static_cast<std::size_t>(z)]))
            fail(std::string("table-") + term_op_glyph(op),
                 t.elements[static_cast<std::size_t>(x)] + term_op_glyph(op) +
                     t.elements[static_cast<std::size_t>(y)] + " is not mirrored");
        }
      }
  } catch (const Error& e) {
    fail("structural", e.what());
  }
  return report;
}

// --- seeded random structures ----------------------------------------------------

std::uint64_t sample_subset_mask(Rng& rng, int bits) {
  if (bits < 0 || bits > 63) throw PreconditionError("subset mask supports up to 63 bits");
  if (bits == 0) return 0;
  return rng() & ((std::uint64_t{1} << bits) - 1);
}

namespace {

RelationalContext sample_unit_impl(Rng& rng, int k, bool force_loop) {
  if (k < 1 || k > 8) throw PreconditionError("unit sampling supports 1..8 points");
  if (k == 1) {
    Relation unit(1);
    unit.add(0, 0);
    return RelationalContext(1, unit);
  }
  for (int attempt = 0; attempt < 512; ++attempt) {
    int threshold = std::min<int>(90, 25 + attempt / 4);
    Relation seed(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (static_cast<int>(rng() % 100) < threshold) seed.add(i, j);
    if (force_loop) {
      int z = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
      seed.add(z, z);
    }
    Relation unit = transitive_closure(seed);
    if (static_cast<int>(field_points(unit).size()) == k) return RelationalContext(k, unit);
  }
  // Dense draws above make this unreachable; keep a deterministic fallback.
  Relation unit(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) unit.add(i, j);
  return RelationalContext(k, unit);
}

}  // namespace

RelationalContext sample_unit(Rng& rng, int k) { return sample_unit_impl(rng, k, false); }

RelationalContext sample_unit_with_loop(Rng& rng, int k) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    RelationalContext ctx = sample_unit_impl(rng, k, true);
    for (int i = 0; i < k; ++i)
      if (ctx.unit.contains(i, i)) return ctx;
  }
  throw std::logic_error("loop forcing failed");
}

Relation dense_transitive_core(const Relation& r, const RelationalContext& ctx) {
  Relation t = rel_intersect(transitive_closure(r), ctx.unit);
  for (;;) {
    Relation next = compose(t, t, ctx);
    if (next == t) return t;
    t = next;
  }
}

Relation sample_dense_transitive(Rng& rng, const RelationalContext& ctx) {
  std::vector<int> loops;
  for (int i = 0; i < ctx.base_size; ++i)
    if (ctx.unit.contains(i, i)) loops.push_back(i);
  if (loops.empty())
    throw PreconditionError("unit has no reflexive point; no nonempty dense transitive subset");
  int z = loops[static_cast<std::size_t>(rng() % loops.size())];
  Relation seed = relation_from_mask(ctx, sample_subset_mask(rng, std::min(48, ctx.unit.count())));
  seed.add(z, z);
  return dense_transitive_core(seed, ctx);
}

}  // namespace rsg
