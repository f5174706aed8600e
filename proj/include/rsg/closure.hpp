#ifndef RSG_CLOSURE_HPP
#define RSG_CLOSURE_HPP

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rsg/errors.hpp"
#include "rsg/term.hpp"

namespace rsg {

template <class V>
struct ClosedEntry {
  std::string name;
  TermPtr term;
  V value;
  int term_ops = 0;
};

namespace detail {

inline std::string render_operand(const std::string& name, bool is_compound) {
  return is_compound ? "(" + name + ")" : name;
}

}  // namespace detail

// Least family containing the generators and closed under the three binary
// operations supplied by `apply` (V apply(TermOp, const V&, const V&)).
//
// Witnessing terms are enumerated by operator count; within one size class
// every producing pair is seen, and each new value keeps the smallest
// rendered term under the canonical order (∘ < \ < /, then byte order).
// V needs operator< and operator==.
template <class V, class Apply>
std::vector<ClosedEntry<V>> close_family(const std::vector<std::pair<std::string, V>>& generators,
                                         Apply&& apply) {
  std::vector<ClosedEntry<V>> fam;
  std::map<V, int> index;
  for (const auto& [name, value] : generators) {
    if (index.count(value))
      throw StructuralError("duplicate generator relation: '" + name + "' equals '" +
                            fam[index[value]].name + "'");
    index.emplace(value, static_cast<int>(fam.size()));
    fam.push_back({name, tvar(name), value, 0});
  }

  std::map<int, std::vector<int>> by_ops;  // family indices grouped by term size
  for (int i = 0; i < static_cast<int>(fam.size()); ++i)
    by_ops[fam[static_cast<std::size_t>(i)].term_ops].push_back(i);

  constexpr TermOp kOps[3] = {TermOp::comp, TermOp::rres, TermOp::lres};

  // Process term sizes in ascending order of the sums the family can actually
  // form; every (member, member, op) triple is evaluated exactly once, at the
  // size of its combined term.
  int last = 0;
  for (;;) {
    int size = -1;
    for (const auto& [sa, ia] : by_ops)
      for (const auto& [sb, ib] : by_ops) {
        if (sa > (1 << 28) || sb > (1 << 28)) throw StructuralError("closure term size overflow");
        int s = sa + sb + 1;
        if (s > last && (size < 0 || s < size)) size = s;
      }
    if (size < 0) break;

    struct Candidate {
      std::string name, key;
      TermPtr term;
    };
    std::map<V, Candidate> fresh;
    for (const auto& [sa, lefts] : by_ops) {
      int sb = size - 1 - sa;
      auto rit = by_ops.find(sb);
      if (rit == by_ops.end()) continue;
      for (int i : lefts) {
        const auto& a = fam[static_cast<std::size_t>(i)];
        for (int j : rit->second) {
          const auto& b = fam[static_cast<std::size_t>(j)];
          for (TermOp op : kOps) {
            V v = apply(op, a.value, b.value);
            if (index.count(v)) continue;
            std::string name = detail::render_operand(a.name, a.term_ops > 0) + term_op_glyph(op) +
                               detail::render_operand(b.name, b.term_ops > 0);
            std::string key = term_sort_key(name);
            auto it = fresh.find(v);
            if (it == fresh.end() || key < it->second.key)
              fresh[v] = {std::move(name), std::move(key), tapp(op, a.term, b.term)};
          }
        }
      }
    }
    std::vector<std::pair<std::string, V>> ordered;  // new members sorted by key
    for (auto& [value, cand] : fresh) ordered.emplace_back(cand.key, value);
    std::sort(ordered.begin(), ordered.end());
    for (auto& [key, value] : ordered) {
      auto& cand = fresh.at(value);
      index.emplace(value, static_cast<int>(fam.size()));
      fam.push_back({cand.name, cand.term, value, size});
      by_ops[size].push_back(static_cast<int>(fam.size()) - 1);
    }
    last = size;
  }
  return fam;
}

}  // namespace rsg

#endif
