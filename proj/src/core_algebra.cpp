#include "rsg/core_algebra.hpp"

#include <set>
#include <sstream>

#include "rsg/errors.hpp"

namespace rsg {

int FiniteOrderedAlgebra::apply(TermOp op, int x, int y) const {
  switch (op) {
    case TermOp::comp: return comp(x, y);
    case TermOp::rres: return rres(x, y);
    case TermOp::lres: return lres(x, y);
  }
  throw std::logic_error("bad TermOp");
}

int FiniteOrderedAlgebra::element_index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (elements[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

FiniteOrderedAlgebra FiniteOrderedAlgebra::make(std::vector<std::string> elements) {
  FiniteOrderedAlgebra alg;
  std::size_t m = elements.size();
  alg.elements = std::move(elements);
  alg.le_bits.assign(m * m, 0);
  alg.comp_tab.assign(m * m, 0);
  alg.rres_tab.assign(m * m, 0);
  alg.lres_tab.assign(m * m, 0);
  return alg;
}

void check_structure(const FiniteOrderedAlgebra& alg) {
  std::size_t m = alg.elements.size();
  if (m == 0) throw StructuralError("algebra must have at least one element");
  std::set<std::string> seen;
  for (const auto& name : alg.elements) {
    if (name.empty()) throw StructuralError("empty element name");
    if (!seen.insert(name).second) throw StructuralError("duplicate element name: " + name);
  }
  if (alg.le_bits.size() != m * m) throw StructuralError("le relation has wrong size");
  for (auto [tab, label] : {std::pair{&alg.comp_tab, "comp"}, {&alg.rres_tab, "rres"},
                            {&alg.lres_tab, "lres"}}) {
    if (tab->size() != m * m)
      throw StructuralError(std::string(label) + " table is not total over the carrier");
    for (int v : *tab)
      if (v < 0 || v >= static_cast<int>(m))
        throw StructuralError(std::string(label) + " table entry out of range");
  }
}

void AxiomReport::merge(const AxiomReport& other) {
  passed = passed && other.passed;
  total_violations += other.total_violations;
  total_warnings += other.total_warnings;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

namespace {

// Exhaustive but capped recording; total counts keep running past the cap.
struct Recorder {
  AxiomReport report;
  int cap;

  explicit Recorder(int witness_cap) : cap(witness_cap) {}

  void violation(std::string axiom, std::vector<int> witness, std::string detail = {}) {
    report.passed = false;
    ++report.total_violations;
    if (static_cast<int>(report.violations.size()) < cap)
      report.violations.push_back({std::move(axiom), std::move(witness), std::move(detail)});
  }

  void warning(std::string axiom, std::vector<int> witness, std::string detail = {}) {
    ++report.total_warnings;
    if (static_cast<int>(report.warnings.size()) < cap)
      report.warnings.push_back({std::move(axiom), std::move(witness), std::move(detail)});
  }
};

std::string name_of(const FiniteOrderedAlgebra& alg, int i) {
  return alg.elements[static_cast<std::size_t>(i)];
}

}  // namespace

AxiomReport check_order(const FiniteOrderedAlgebra& alg, int witness_cap) {
  check_structure(alg);
  Recorder rec(witness_cap);
  int m = alg.size();
  for (int x = 0; x < m; ++x)
    if (!alg.le(x, x)) rec.violation("reflexivity", {x}, name_of(alg, x) + " ≤ " + name_of(alg, x) + " missing");
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      if (!alg.le(x, y)) continue;
      for (int z = 0; z < m; ++z)
        if (alg.le(y, z) && !alg.le(x, z))
          rec.violation("transitivity", {x, y, z},
                        name_of(alg, x) + " ≤ " + name_of(alg, y) + " ≤ " + name_of(alg, z) +
                            " but not " + name_of(alg, x) + " ≤ " + name_of(alg, z));
    }
  for (int x = 0; x < m; ++x)
    for (int y = x + 1; y < m; ++y)
      if (alg.le(x, y) && alg.le(y, x))
        rec.warning("antisymmetry", {x, y},
                    name_of(alg, x) + " and " + name_of(alg, y) + " are order-equivalent");
  return rec.report;
}

AxiomReport check_semigroup(const FiniteOrderedAlgebra& alg, int witness_cap) {
  check_structure(alg);
  Recorder rec(witness_cap);
  int m = alg.size();
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int z = 0; z < m; ++z) {
        int left = alg.comp(alg.comp(x, y), z);
        int right = alg.comp(x, alg.comp(y, z));
        if (left != right)
          rec.violation("associativity", {x, y, z},
                        "(" + name_of(alg, x) + "∘" + name_of(alg, y) + ")∘" + name_of(alg, z) +
                            " = " + name_of(alg, left) + " but " + name_of(alg, x) + "∘(" +
                            name_of(alg, y) + "∘" + name_of(alg, z) + ") = " + name_of(alg, right));
      }
  return rec.report;
}

AxiomReport check_monotonicity(const FiniteOrderedAlgebra& alg, int witness_cap) {
  check_structure(alg);
  Recorder rec(witness_cap);
  int m = alg.size();
  for (int x = 0; x < m; ++x)
    for (int x2 = 0; x2 < m; ++x2) {
      if (!alg.le(x, x2)) continue;
      for (int y = 0; y < m; ++y)
        for (int y2 = 0; y2 < m; ++y2) {
          if (!alg.le(y, y2)) continue;
          if (!alg.le(alg.comp(x, y), alg.comp(x2, y2)))
            rec.violation("monotonicity", {x, x2, y, y2},
                          name_of(alg, x) + " ≤ " + name_of(alg, x2) + ", " + name_of(alg, y) +
                              " ≤ " + name_of(alg, y2) + " but " + name_of(alg, alg.comp(x, y)) +
                              " ≰ " + name_of(alg, alg.comp(x2, y2)));
        }
    }
  return rec.report;
}

AxiomReport check_residuation(const FiniteOrderedAlgebra& alg, int witness_cap) {
  check_structure(alg);
  Recorder rec(witness_cap);
  int m = alg.size();
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int z = 0; z < m; ++z) {
        bool via_rres = alg.le(y, alg.rres(x, z));
        bool via_comp = alg.le(alg.comp(x, y), z);
        bool via_lres = alg.le(x, alg.lres(z, y));
        if (via_rres != via_comp || via_comp != via_lres) {
          std::ostringstream detail;
          detail << "y≤x\\z=" << via_rres << "  x∘y≤z=" << via_comp << "  x≤z/y=" << via_lres;
          rec.violation("residuation", {x, y, z}, detail.str());
        }
      }
  return rec.report;
}

AxiomReport validate(const FiniteOrderedAlgebra& alg, int witness_cap) {
  check_structure(alg);
  AxiomReport report = check_order(alg, witness_cap);
  report.merge(check_semigroup(alg, witness_cap));
  report.merge(check_monotonicity(alg, witness_cap));
  report.merge(check_residuation(alg, witness_cap));
  return report;
}

FiniteOrderedAlgebra opposite(const FiniteOrderedAlgebra& alg) {
  FiniteOrderedAlgebra op = alg;
  int m = alg.size();
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      std::size_t idx = static_cast<std::size_t>(x) * static_cast<std::size_t>(m) + y;
      op.comp_tab[idx] = alg.comp(y, x);
      op.rres_tab[idx] = alg.lres(y, x);  // x \' y  =  y / x
      op.lres_tab[idx] = alg.rres(y, x);  // x /' y  =  y \ x
    }
  return op;
}

int eval_term_abstract(const Term& t, const std::map<std::string, int>& env,
                       const FiniteOrderedAlgebra& alg) {
  if (t.is_leaf()) {
    auto it = env.find(t.leaf);
    if (it == env.end()) throw StructuralError("unbound name in term: " + t.leaf);
    return it->second;
  }
  return alg.apply(t.op, eval_term_abstract(*t.lhs, env, alg), eval_term_abstract(*t.rhs, env, alg));
}

}  // namespace rsg
