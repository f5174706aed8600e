#ifndef RSG_TERM_HPP
#define RSG_TERM_HPP

#include <memory>
#include <string>
#include <vector>

namespace rsg {

enum class TermOp { comp, rres, lres };

const char* term_op_glyph(TermOp op);  // "∘", "\", "/"

// Expression tree over named generators with the three binary connectives.
// Immutable; shared subtrees are fine.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  std::string leaf;  // generator name; empty for interior nodes
  TermOp op = TermOp::comp;
  TermPtr lhs, rhs;

  bool is_leaf() const { return lhs == nullptr; }
};

TermPtr tvar(std::string name);
TermPtr tapp(TermOp op, TermPtr lhs, TermPtr rhs);

inline TermPtr tcomp(TermPtr a, TermPtr b) { return tapp(TermOp::comp, std::move(a), std::move(b)); }
inline TermPtr trres(TermPtr a, TermPtr b) { return tapp(TermOp::rres, std::move(a), std::move(b)); }
inline TermPtr tlres(TermPtr a, TermPtr b) { return tapp(TermOp::lres, std::move(a), std::move(b)); }

// Outermost parentheses dropped: b∘b, (b∘b)\b, ((b∘b)\b)∘a.
std::string term_to_string(const Term& t);

int term_op_count(const Term& t);

// Distinct leaf names, in first-occurrence order.
std::vector<std::string> term_leaves(const Term& t);

// Key for the canonical term order: connectives rank ∘ < \ < / ahead of
// ordinary byte order. Compare keys of equal-size terms with plain string <.
std::string term_sort_key(const std::string& rendered);

}  // namespace rsg

#endif
