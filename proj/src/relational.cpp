#include "rsg/relational.hpp"

#include <algorithm>
#include <bit>

#include "rsg/closure.hpp"

namespace rsg {

bool Relation::subset_of(const Relation& other) const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i] & ~other.rows[i]) return false;
  return true;
}

bool Relation::empty() const {
  for (auto r : rows)
    if (r) return false;
  return true;
}

int Relation::count() const {
  int c = 0;
  for (auto r : rows) c += std::popcount(r);
  return c;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    std::uint64_t row = rows[static_cast<std::size_t>(i)];
    while (row) {
      int j = std::countr_zero(row);
      out.emplace_back(i, j);
      row &= row - 1;
    }
  }
  return out;
}

bool Relation::operator<(const Relation& other) const {
  if (n != other.n) return n < other.n;
  return rows < other.rows;
}

Relation Relation::from_pairs(int base_size, const std::vector<std::pair<int, int>>& ps) {
  Relation r(base_size);
  for (auto [i, j] : ps) {
    if (i < 0 || i >= base_size || j < 0 || j >= base_size)
      throw StructuralError("pair outside base");
    r.add(i, j);
  }
  return r;
}

Relation rel_union(const Relation& a, const Relation& b) {
  Relation r = a;
  for (std::size_t i = 0; i < r.rows.size(); ++i) r.rows[i] |= b.rows[i];
  return r;
}

Relation rel_intersect(const Relation& a, const Relation& b) {
  Relation r = a;
  for (std::size_t i = 0; i < r.rows.size(); ++i) r.rows[i] &= b.rows[i];
  return r;
}

Relation identity_relation(int n) {
  Relation r(n);
  for (int i = 0; i < n; ++i) r.add(i, i);
  return r;
}

Relation mat_compose(const Relation& x, const Relation& y) {
  Relation out(x.n);
  for (int u = 0; u < x.n; ++u) {
    std::uint64_t row = x.rows[static_cast<std::size_t>(u)];
    std::uint64_t acc = 0;
    while (row) {
      int w = std::countr_zero(row);
      acc |= y.rows[static_cast<std::size_t>(w)];
      row &= row - 1;
    }
    out.rows[static_cast<std::size_t>(u)] = acc;
  }
  return out;
}

Relation transitive_closure(const Relation& r) {
  Relation out = r;
  // Warshall on single-word rows
  for (int w = 0; w < r.n; ++w) {
    std::uint64_t wrow = out.rows[static_cast<std::size_t>(w)];
    for (int u = 0; u < r.n; ++u)
      if (out.contains(u, w)) out.rows[static_cast<std::size_t>(u)] |= wrow;
  }
  return out;
}

bool is_transitive(const Relation& r) {
  return mat_compose(r, r).subset_of(r);
}

bool is_reflexive(const Relation& r) {
  for (int i = 0; i < r.n; ++i)
    if (!r.contains(i, i)) return false;
  return true;
}

std::vector<int> field_points(const Relation& r) {
  std::uint64_t seen = 0;
  for (int i = 0; i < r.n; ++i) {
    if (r.rows[static_cast<std::size_t>(i)]) seen |= std::uint64_t{1} << i;
    seen |= r.rows[static_cast<std::size_t>(i)];
  }
  std::vector<int> out;
  for (int i = 0; i < r.n; ++i)
    if ((seen >> i) & 1u) out.push_back(i);
  return out;
}

RelationalContext::RelationalContext(int base_size_, Relation unit_,
                                     std::vector<std::pair<std::string, Relation>> named_)
    : base_size(base_size_), unit(std::move(unit_)), named(std::move(named_)) {
  if (base_size < 1 || base_size > kMaxBasePoints)
    throw StructuralError("base size must be between 1 and 64");
  if (unit.n != base_size) throw StructuralError("unit base size mismatch");
  if (!is_transitive(unit)) throw StructuralError("unit is not transitive");
  if (static_cast<int>(field_points(unit).size()) != base_size)
    throw StructuralError("unit does not have full field: isolated base point");
  for (const auto& [name, rel] : named) {
    if (rel.n != base_size) throw StructuralError("relation '" + name + "' base size mismatch");
    if (!rel.subset_of(unit)) throw StructuralError("relation '" + name + "' is not inside the unit");
  }
}

const Relation* RelationalContext::find_named(const std::string& name) const {
  for (const auto& [n, r] : named)
    if (n == name) return &r;
  return nullptr;
}

static void require_inside_unit(const Relation& x, const RelationalContext& ctx, const char* who) {
  if (x.n != ctx.base_size) throw StructuralError(std::string(who) + ": operand base size mismatch");
  if (!x.subset_of(ctx.unit)) throw StructuralError(std::string(who) + ": operand not inside the unit");
}

Relation compose(const Relation& x, const Relation& y, const RelationalContext& ctx) {
  require_inside_unit(x, ctx, "compose");
  require_inside_unit(y, ctx, "compose");
  Relation out = mat_compose(x, y);
  return rel_intersect(out, ctx.unit);
}

// Column masks: col(u) = {w : (w,u) ∈ x}.
static std::vector<std::uint64_t> column_masks(const Relation& x) {
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(x.n), 0);
  for (int w = 0; w < x.n; ++w) {
    std::uint64_t row = x.rows[static_cast<std::size_t>(w)];
    while (row) {
      int u = std::countr_zero(row);
      cols[static_cast<std::size_t>(u)] |= std::uint64_t{1} << w;
      row &= row - 1;
    }
  }
  return cols;
}

Relation rres(const Relation& x, const Relation& y, const RelationalContext& ctx) {
  require_inside_unit(x, ctx, "rres");
  require_inside_unit(y, ctx, "rres");
  auto cx = column_masks(x);
  auto cy = column_masks(y);
  Relation out(ctx.base_size);
  // (u,v) qualifies iff every w with (w,u) ∈ x also has (w,v) ∈ y.
  for (int u = 0; u < ctx.base_size; ++u) {
    std::uint64_t wrow = ctx.unit.rows[static_cast<std::size_t>(u)];
    std::uint64_t acc = 0;
    while (wrow) {
      int v = std::countr_zero(wrow);
      if ((cx[static_cast<std::size_t>(u)] & ~cy[static_cast<std::size_t>(v)]) == 0)
        acc |= std::uint64_t{1} << v;
      wrow &= wrow - 1;
    }
    out.rows[static_cast<std::size_t>(u)] = acc;
  }
  return out;
}

Relation lres(const Relation& x, const Relation& y, const RelationalContext& ctx) {
  require_inside_unit(x, ctx, "lres");
  require_inside_unit(y, ctx, "lres");
  Relation out(ctx.base_size);
  // (u,v) qualifies iff every w with (v,w) ∈ y also has (u,w) ∈ x.
  for (int u = 0; u < ctx.base_size; ++u) {
    std::uint64_t wrow = ctx.unit.rows[static_cast<std::size_t>(u)];
    std::uint64_t acc = 0;
    while (wrow) {
      int v = std::countr_zero(wrow);
      if ((y.rows[static_cast<std::size_t>(v)] & ~x.rows[static_cast<std::size_t>(u)]) == 0)
        acc |= std::uint64_t{1} << v;
      wrow &= wrow - 1;
    }
    out.rows[static_cast<std::size_t>(u)] = acc;
  }
  return out;
}

Relation apply_op(TermOp op, const Relation& x, const Relation& y, const RelationalContext& ctx) {
  switch (op) {
    case TermOp::comp: return compose(x, y, ctx);
    case TermOp::rres: return rres(x, y, ctx);
    case TermOp::lres: return lres(x, y, ctx);
  }
  throw std::logic_error("bad TermOp");
}

Relation relation_from_mask(const RelationalContext& ctx, std::uint64_t mask) {
  Relation r(ctx.base_size);
  auto ps = ctx.unit.pairs();
  for (std::size_t i = 0; i < ps.size(); ++i)
    if ((mask >> i) & 1u) r.add(ps[i].first, ps[i].second);
  return r;
}

std::uint64_t mask_from_relation(const RelationalContext& ctx, const Relation& r) {
  std::uint64_t mask = 0;
  auto ps = ctx.unit.pairs();
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (r.contains(ps[i].first, ps[i].second)) mask |= std::uint64_t{1} << i;
  return mask;
}

bool check_density_implication(const RelationalContext& ctx, const Relation& a, const Relation& b) {
  require_inside_unit(a, ctx, "check_density_implication");
  require_inside_unit(b, ctx, "check_density_implication");
  Relation aa = compose(a, a, ctx);
  if (!(a.subset_of(aa) && aa.subset_of(a))) return true;  // antecedent fails
  Relation consequent = compose(compose(a, rres(b, b, ctx), ctx), a, ctx);
  return a.subset_of(consequent);
}

int find_reflexive_point(const RelationalContext& ctx, const Relation& a) {
  require_inside_unit(a, ctx, "find_reflexive_point");
  if (a.empty()) throw PreconditionError("find_reflexive_point: relation is empty");
  Relation aa = compose(a, a, ctx);
  bool dense = a.subset_of(aa);
  bool transitive = aa.subset_of(a);
  if (!dense || !transitive) {
    std::string what = "find_reflexive_point: precondition a = a∘a failed:";
    if (!dense) what += " density (a ⊈ a∘a)";
    if (!transitive) what += " transitivity (a∘a ⊈ a)";
    throw PreconditionError(what);
  }

  // Expand the leftmost edge through its least middle point until some base
  // point repeats; the segment between two occurrences is an a-path, so
  // transitivity yields a loop there.
  std::vector<int> path = {a.pairs().front().first, a.pairs().front().second};
  for (;;) {
    std::vector<int> seen_at(static_cast<std::size_t>(ctx.base_size), -1);
    for (std::size_t i = 0; i < path.size(); ++i) {
      int p = path[static_cast<std::size_t>(i)];
      if (seen_at[static_cast<std::size_t>(p)] >= 0) {
        if (!a.contains(p, p)) throw std::logic_error("path repeat without a loop");
        return p;
      }
      seen_at[static_cast<std::size_t>(p)] = static_cast<int>(i);
    }
    int u = path[0], v = path[1];
    int w = -1;
    for (int cand = 0; cand < ctx.base_size; ++cand)
      if (a.contains(u, cand) && a.contains(cand, v)) {
        w = cand;
        break;
      }
    if (w < 0) throw std::logic_error("dense relation without a middle point");
    path.insert(path.begin() + 1, w);
  }
}

std::vector<ClosedMember> close(const std::vector<std::pair<std::string, Relation>>& generators,
                                const RelationalContext& ctx) {
  for (const auto& [name, rel] : generators) require_inside_unit(rel, ctx, "close");
  auto fam = close_family(generators, [&ctx](TermOp op, const Relation& a, const Relation& b) {
    return apply_op(op, a, b, ctx);
  });
  std::vector<ClosedMember> out;
  out.reserve(fam.size());
  for (auto& e : fam) out.push_back({std::move(e.name), std::move(e.term), std::move(e.value), e.term_ops});
  return out;
}

FiniteOrderedAlgebra to_abstract(const std::vector<std::pair<std::string, Relation>>& family,
                                 const RelationalContext& ctx) {
  if (family.empty()) throw StructuralError("to_abstract: empty family");
  std::vector<std::string> names;
  for (const auto& [name, rel] : family) {
    require_inside_unit(rel, ctx, "to_abstract");
    names.push_back(name);
  }
  auto alg = FiniteOrderedAlgebra::make(names);
  int m = alg.size();
  auto index_of = [&](const Relation& r) {
    for (int i = 0; i < m; ++i)
      if (family[static_cast<std::size_t>(i)].second == r) return i;
    return -1;
  };
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      const Relation& rx = family[static_cast<std::size_t>(x)].second;
      const Relation& ry = family[static_cast<std::size_t>(y)].second;
      alg.set_le(x, y, rx.subset_of(ry));
      for (TermOp op : {TermOp::comp, TermOp::rres, TermOp::lres}) {
        Relation r = apply_op(op, rx, ry, ctx);
        int idx = index_of(r);
        if (idx < 0)
          throw StructuralError("family not closed: " + names[static_cast<std::size_t>(x)] +
                                term_op_glyph(op) + names[static_cast<std::size_t>(y)] +
                                " is not in the family");
        std::size_t flat = static_cast<std::size_t>(x) * static_cast<std::size_t>(m) + y;
        (op == TermOp::comp ? alg.comp_tab : op == TermOp::rres ? alg.rres_tab : alg.lres_tab)[flat] = idx;
      }
    }
  check_structure(alg);
  return alg;
}

FiniteOrderedAlgebra to_abstract(const std::vector<ClosedMember>& family,
                                 const RelationalContext& ctx) {
  std::vector<std::pair<std::string, Relation>> plain;
  plain.reserve(family.size());
  for (const auto& m : family) plain.emplace_back(m.name, m.value);
  return to_abstract(plain, ctx);
}

Relation eval_term(const Term& t, const std::vector<std::pair<std::string, Relation>>& env,
                   const RelationalContext& ctx) {
  if (t.is_leaf()) {
    for (const auto& [name, rel] : env)
      if (name == t.leaf) return rel;
    throw StructuralError("unbound name in term: " + t.leaf);
  }
  return apply_op(t.op, eval_term(*t.lhs, env, ctx), eval_term(*t.rhs, env, ctx), ctx);
}

}  // namespace rsg
