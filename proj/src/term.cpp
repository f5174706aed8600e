#include "rsg/term.hpp"

#include <stdexcept>

namespace rsg {

const char* term_op_glyph(TermOp op) {
  switch (op) {
    case TermOp::comp: return "∘";
    case TermOp::rres: return "\\";
    case TermOp::lres: return "/";
  }
  throw std::logic_error("bad TermOp");
}

TermPtr tvar(std::string name) {
  auto t = std::make_shared<Term>();
  t->leaf = std::move(name);
  return t;
}

TermPtr tapp(TermOp op, TermPtr lhs, TermPtr rhs) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->lhs = std::move(lhs);
  t->rhs = std::move(rhs);
  return t;
}

static void render(const Term& t, bool parenthesize, std::string& out) {
  if (t.is_leaf()) {
    out += t.leaf;
    return;
  }
  if (parenthesize) out += '(';
  render(*t.lhs, !t.lhs->is_leaf(), out);
  out += term_op_glyph(t.op);
  render(*t.rhs, !t.rhs->is_leaf(), out);
  if (parenthesize) out += ')';
}

std::string term_to_string(const Term& t) {
  std::string out;
  render(t, false, out);
  return out;
}

int term_op_count(const Term& t) {
  if (t.is_leaf()) return 0;
  return 1 + term_op_count(*t.lhs) + term_op_count(*t.rhs);
}

static void collect_leaves(const Term& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    for (const auto& s : out)
      if (s == t.leaf) return;
    out.push_back(t.leaf);
    return;
  }
  collect_leaves(*t.lhs, out);
  collect_leaves(*t.rhs, out);
}

std::vector<std::string> term_leaves(const Term& t) {
  std::vector<std::string> out;
  collect_leaves(t, out);
  return out;
}

std::string term_sort_key(const std::string& rendered) {
  // ∘ (U+2218, bytes e2 88 98) → 0x01, \ → 0x02, / → 0x03
  std::string key;
  key.reserve(rendered.size());
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    if (i + 2 < rendered.size() && static_cast<unsigned char>(rendered[i]) == 0xe2 &&
        static_cast<unsigned char>(rendered[i + 1]) == 0x88 &&
        static_cast<unsigned char>(rendered[i + 2]) == 0x98) {
      key += '\x01';
      i += 2;
    } else if (rendered[i] == '\\') {
      key += '\x02';
    } else if (rendered[i] == '/') {
      key += '\x03';
    } else {
      key += rendered[i];
    }
  }
  return key;
}

}  // namespace rsg
