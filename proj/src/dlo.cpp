#include "rsg/dlo.hpp"

#include <bit>
#include <map>
#include <stdexcept>

#include "rsg/closure.hpp"
#include "rsg/errors.hpp"

namespace rsg {

const char* cmp_glyph(Cmp c) {
  switch (c) {
    case Cmp::lt: return "<";
    case Cmp::eq: return "=";
    case Cmp::gt: return ">";
  }
  throw std::logic_error("bad Cmp");
}

PatternAtom PatternAtom::from_index(int i) {
  return {static_cast<std::uint8_t>(i / 6), static_cast<std::uint8_t>((i / 3) % 2),
          static_cast<Cmp>(i % 3)};
}

int PatternRelation::count() const { return std::popcount(atoms); }

std::string pattern_to_string(PatternRelation r) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < kPatternAtomCount; ++i) {
    if (!((r.atoms >> i) & 1u)) continue;
    PatternAtom a = PatternAtom::from_index(i);
    if (!first) out += ", ";
    first = false;
    out += "(" + std::to_string(a.src_sort) + "," + std::to_string(a.dst_sort) + "," +
           cmp_glyph(a.cmp) + ")";
  }
  return out + "}";
}

PatternRelation pattern_unit() {
  return PatternRelation{}
      .with({0, 0, Cmp::lt})
      .with({1, 0, Cmp::lt})
      .with({1, 0, Cmp::eq});
}

PatternRelation pattern_a() { return PatternRelation{}.with({0, 0, Cmp::lt}); }
PatternRelation pattern_b() { return PatternRelation{}.with({1, 0, Cmp::eq}); }

// --- dense-linear-order satisfiability ---------------------------------------

std::vector<std::vector<int>> enumerate_weak_orders(int points) {
  if (points < 1 || points > 3) throw PreconditionError("weak orders supported for 1..3 points");
  // Ordered set partitions: every surjection {points} -> {0..levels-1}.
  std::vector<std::vector<int>> out;
  std::vector<int> lvl(static_cast<std::size_t>(points), 0);
  for (int total = 1; total <= points; ++total) {
    // enumerate functions, keep those hitting exactly {0..total-1}
    int combos = 1;
    for (int i = 0; i < points; ++i) combos *= total;
    for (int code = 0; code < combos; ++code) {
      int c = code;
      int hit = 0;
      for (int i = 0; i < points; ++i) {
        lvl[static_cast<std::size_t>(i)] = c % total;
        hit |= 1 << (c % total);
        c /= total;
      }
      if (hit == (1 << total) - 1) out.push_back(lvl);
    }
  }
  return out;
}

bool dlo_sat(const OrderConstraintSystem& sys) {
  if (sys.points < 0 || sys.points > 3)
    throw PreconditionError("dlo_sat supports at most 3 points");
  for (const auto& c : sys.constraints)
    if (c.lhs < 0 || c.lhs >= sys.points || c.rhs < 0 || c.rhs >= sys.points)
      throw StructuralError("constraint names a point outside the system");
  if (sys.points == 0) return sys.constraints.empty();
  for (const auto& lvl : enumerate_weak_orders(sys.points)) {
    bool ok = true;
    for (const auto& c : sys.constraints) {
      int l = lvl[static_cast<std::size_t>(c.lhs)], r = lvl[static_cast<std::size_t>(c.rhs)];
      Cmp actual = l < r ? Cmp::lt : l == r ? Cmp::eq : Cmp::gt;
      if (actual != c.cmp) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// --- symbolic operations ------------------------------------------------------

// Point names inside the little constraint systems: u=0, w=1, v=2.
namespace {
constexpr int kU = 0, kW = 1, kV = 2;

bool triple_sat(OrderConstraint c1, OrderConstraint c2, OrderConstraint c3) {
  OrderConstraintSystem sys;
  sys.points = 3;
  sys.constraints = {c1, c2, c3};
  return dlo_sat(sys);
}
}  // namespace

PatternRelation compose_sym(PatternRelation x, PatternRelation y) {
  PatternRelation out;
  for (int i = 0; i < kPatternAtomCount; ++i) {
    PatternAtom atom = PatternAtom::from_index(i);
    if (!pattern_unit().contains(atom)) continue;
    bool witnessed = false;
    for (int m = 0; m < 2 && !witnessed; ++m)
      for (int c1 = 0; c1 < 3 && !witnessed; ++c1) {
        if (!x.contains({atom.src_sort, static_cast<std::uint8_t>(m), static_cast<Cmp>(c1)}))
          continue;
        for (int c2 = 0; c2 < 3 && !witnessed; ++c2) {
          if (!y.contains({static_cast<std::uint8_t>(m), atom.dst_sort, static_cast<Cmp>(c2)}))
            continue;
          // u c1 w, w c2 v, u cmp v — a middle point of any sort exists at
          // every consistent position (density, no endpoints)
          if (triple_sat({kU, kW, static_cast<Cmp>(c1)}, {kW, kV, static_cast<Cmp>(c2)},
                         {kU, kV, atom.cmp}))
            witnessed = true;
        }
      }
    if (witnessed) out = out.with(atom);
  }
  return out;
}

PatternRelation rres_sym(PatternRelation x, PatternRelation y) {
  PatternRelation out;
  for (int i = 0; i < kPatternAtomCount; ++i) {
    PatternAtom atom = PatternAtom::from_index(i);
    if (!pattern_unit().contains(atom)) continue;
    bool holds = true;
    for (int m = 0; m < 2 && holds; ++m)
      for (int c1 = 0; c1 < 3 && holds; ++c1)
        for (int c2 = 0; c2 < 3 && holds; ++c2) {
          // w c1 u, w c2 v, u cmp v
          if (!triple_sat({kW, kU, static_cast<Cmp>(c1)}, {kW, kV, static_cast<Cmp>(c2)},
                          {kU, kV, atom.cmp}))
            continue;
          bool in_x = x.contains({static_cast<std::uint8_t>(m), atom.src_sort, static_cast<Cmp>(c1)});
          bool in_y = y.contains({static_cast<std::uint8_t>(m), atom.dst_sort, static_cast<Cmp>(c2)});
          if (in_x && !in_y) holds = false;
        }
    if (holds) out = out.with(atom);
  }
  return out;
}

PatternRelation lres_sym(PatternRelation x, PatternRelation y) {
  PatternRelation out;
  for (int i = 0; i < kPatternAtomCount; ++i) {
    PatternAtom atom = PatternAtom::from_index(i);
    if (!pattern_unit().contains(atom)) continue;
    bool holds = true;
    for (int m = 0; m < 2 && holds; ++m)
      for (int c1 = 0; c1 < 3 && holds; ++c1)
        for (int c2 = 0; c2 < 3 && holds; ++c2) {
          // v c1 w, u c2 w, u cmp v
          if (!triple_sat({kV, kW, static_cast<Cmp>(c1)}, {kU, kW, static_cast<Cmp>(c2)},
                          {kU, kV, atom.cmp}))
            continue;
          bool in_y = y.contains({atom.dst_sort, static_cast<std::uint8_t>(m), static_cast<Cmp>(c1)});
          bool in_x = x.contains({atom.src_sort, static_cast<std::uint8_t>(m), static_cast<Cmp>(c2)});
          if (in_y && !in_x) holds = false;
        }
    if (holds) out = out.with(atom);
  }
  return out;
}

PatternRelation apply_op_sym(TermOp op, PatternRelation x, PatternRelation y) {
  switch (op) {
    case TermOp::comp: return compose_sym(x, y);
    case TermOp::rres: return rres_sym(x, y);
    case TermOp::lres: return lres_sym(x, y);
  }
  throw std::logic_error("bad TermOp");
}

PatternRelation eval_term_sym(const Term& t,
                              const std::vector<std::pair<std::string, PatternRelation>>& env) {
  if (t.is_leaf()) {
    for (const auto& [name, rel] : env)
      if (name == t.leaf) return rel;
    throw StructuralError("unbound name in term: " + t.leaf);
  }
  return apply_op_sym(t.op, eval_term_sym(*t.lhs, env), eval_term_sym(*t.rhs, env));
}

// --- witness algebra ----------------------------------------------------------

PatternRelation WitnessAlgebra::relation_of(const std::string& name) const {
  int idx = algebra.element_index(name);
  if (idx < 0) throw StructuralError("no witness element named " + name);
  return relations[static_cast<std::size_t>(idx)];
}

WitnessAlgebra build_witness_algebra() {
  const PatternRelation a = pattern_a();
  const PatternRelation b = pattern_b();
  auto closure = close_family<PatternRelation>(
      {{"a", a}, {"b", b}}, [](TermOp op, PatternRelation x, PatternRelation y) {
        return apply_op_sym(op, x, y);
      });

  const PatternRelation bot{};
  const PatternRelation top = pattern_unit();
  const PatternRelation ba = PatternRelation{}.with({1, 0, Cmp::lt});
  const PatternRelation a_prime{static_cast<std::uint16_t>(a.atoms | ba.atoms)};
  const PatternRelation b_prime{static_cast<std::uint16_t>(b.atoms | ba.atoms)};
  const std::array<PatternRelation, 7> expected = {bot, a, b, ba, top, b_prime, a_prime};

  if (closure.size() != expected.size())
    throw std::logic_error("witness closure does not have seven elements");
  for (PatternRelation want : expected) {
    bool present = false;
    for (const auto& e : closure) present = present || e.value == want;
    if (!present) throw std::logic_error("witness closure misses an expected relation");
  }

  WitnessAlgebra out;
  std::vector<std::string> names(kWitnessNames.begin(), kWitnessNames.end());
  out.algebra = FiniteOrderedAlgebra::make(names);
  out.relations.assign(expected.begin(), expected.end());
  out.closure = std::move(closure);

  auto index_of = [&](PatternRelation r) {
    for (int i = 0; i < 7; ++i)
      if (expected[static_cast<std::size_t>(i)] == r) return i;
    throw std::logic_error("witness operation left the seven-element family");
  };
  for (int x = 0; x < 7; ++x)
    for (int y = 0; y < 7; ++y) {
      PatternRelation rx = expected[static_cast<std::size_t>(x)];
      PatternRelation ry = expected[static_cast<std::size_t>(y)];
      out.algebra.set_le(x, y, rx.subset_of(ry));
      std::size_t flat = static_cast<std::size_t>(x) * 7 + y;
      out.algebra.comp_tab[flat] = index_of(compose_sym(rx, ry));
      out.algebra.rres_tab[flat] = index_of(rres_sym(rx, ry));
      out.algebra.lres_tab[flat] = index_of(lres_sym(rx, ry));
    }
  check_structure(out.algebra);
  return out;
}

const WitnessAlgebra& witness_algebra() {
  static const WitnessAlgebra instance = build_witness_algebra();
  return instance;
}

// --- reference tables ---------------------------------------------------------

const std::array<const char*, 7>& reference_header() {
  static const std::array<const char*, 7> header = {"a", "b", "⊥", "ba", "⊤", "b′", "a′"};
  return header;
}

namespace {

// Hand-recorded operation tables for the built-in algebra, row and column
// order as in reference_header(). Orientation is deliberately not assumed;
// verify_tables discovers it.
const char* kRefComp[7][7] = {
    {"a", "ba", "⊥", "ba", "a′", "ba", "a′"},
    {"⊥", "⊥", "⊥", "⊥", "⊥", "⊥", "⊥"},
    {"⊥", "⊥", "⊥", "⊥", "⊥", "⊥", "⊥"},
    {"⊥", "⊥", "⊥", "⊥", "⊥", "⊥", "⊥"},
    {"a", "ba", "⊥", "ba", "a′", "ba", "a′"},
    {"⊥", "⊥", "⊥", "⊥", "⊥", "⊥", "⊥"},
    {"a", "ba", "⊥", "ba", "a′", "ba", "a′"},
};

const char* kRefRres[7][7] = {
    {"⊤", "b′", "⊤", "b′", "b′", "b′", "b′"},
    {"b′", "b′", "⊤", "b′", "b′", "b′", "b′"},
    {"b′", "b′", "⊤", "b′", "b′", "b′", "b′"},
    {"b′", "⊤", "⊤", "⊤", "b′", "⊤", "b′"},
    {"⊤", "⊤", "⊤", "⊤", "⊤", "⊤", "⊤"},
    {"b′", "⊤", "⊤", "⊤", "b′", "⊤", "b′"},
    {"⊤", "⊤", "⊤", "⊤", "⊤", "⊤", "⊤"},
};

const char* kRefLres[7][7] = {
    {"a", "⊥", "⊥", "b′", "⊤", "b′", "⊤"},
    {"⊤", "⊤", "⊤", "⊤", "⊤", "⊤", "⊤"},
    {"⊤", "⊤", "⊤", "⊤", "⊤", "⊤", "⊤"},
    {"⊤", "⊤", "⊤", "⊤", "⊤", "⊤", "⊤"},
    {"a", "⊥", "⊥", "b′", "⊤", "b′", "⊤"},
    {"⊤", "⊤", "⊤", "⊤", "⊤", "⊤", "⊤"},
    {"a", "⊥", "⊥", "b′", "⊤", "b′", "⊤"},
};

}  // namespace

TableCheck verify_tables(const FiniteOrderedAlgebra& alg) {
  const auto& header = reference_header();
  std::array<int, 7> idx{};
  for (int i = 0; i < 7; ++i) {
    idx[static_cast<std::size_t>(i)] = alg.element_index(header[static_cast<std::size_t>(i)]);
    if (idx[static_cast<std::size_t>(i)] < 0)
      throw StructuralError(std::string("verify_tables: algebra has no element named ") +
                            header[static_cast<std::size_t>(i)]);
  }
  TableCheck check;
  const struct {
    TermOp op;
    const char* (*tab)[7];
  } tables[3] = {{TermOp::comp, kRefComp}, {TermOp::rres, kRefRres}, {TermOp::lres, kRefLres}};
  for (const auto& t : tables)
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 7; ++c) {
        std::string expected = t.tab[r][c];
        int er = idx[static_cast<std::size_t>(r)], ec = idx[static_cast<std::size_t>(c)];
        std::string row_col = alg.elements[static_cast<std::size_t>(alg.apply(t.op, er, ec))];
        std::string col_row = alg.elements[static_cast<std::size_t>(alg.apply(t.op, ec, er))];
        bool rc_ok = row_col == expected, cr_ok = col_row == expected;
        if (!rc_ok) ++check.row_col_mismatches;
        if (!cr_ok) ++check.col_row_mismatches;
        if (!rc_ok || !cr_ok) check.mismatches.push_back({t.op, r, c, expected, row_col, col_row});
        if (!rc_ok && !cr_ok) check.discrepancies.push_back({t.op, r, c, expected, row_col, col_row});
      }
  return check;
}

// --- grid sampling -------------------------------------------------------------

int sample_base_size(int grid_size) { return (2 * grid_size + 1) * 2; }

static void require_grid(int grid_size) {
  if (grid_size < 3 || grid_size > 15)
    throw PreconditionError("grid size must be between 3 and 15");
}

Relation sample_pattern(PatternRelation x, int grid_size) {
  require_grid(grid_size);
  int positions = 2 * grid_size + 1;  // integers and midpoints
  Relation out(sample_base_size(grid_size));
  for (int p = 0; p < positions; ++p)
    for (int q = 0; q < positions; ++q) {
      Cmp c = p < q ? Cmp::lt : p == q ? Cmp::eq : Cmp::gt;
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
          if (x.contains({static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(t), c}))
            out.add(2 * p + s, 2 * q + t);
    }
  return out;
}

RelationalContext sample_context(int grid_size) {
  require_grid(grid_size);
  return RelationalContext(sample_base_size(grid_size), sample_pattern(pattern_unit(), grid_size),
                           {{"a", sample_pattern(pattern_a(), grid_size)},
                            {"b", sample_pattern(pattern_b(), grid_size)}});
}

}  // namespace rsg
