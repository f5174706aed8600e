#ifndef RSG_FORMATS_HPP
#define RSG_FORMATS_HPP

#include <iosfwd>
#include <string>

#include "rsg/core_algebra.hpp"
#include "rsg/relational.hpp"

namespace rsg {

// Line-oriented text formats; '#' starts a comment, tokens are
// whitespace-separated.
//
// Algebra file:
//   elements <name>...
//   le <x> <y>                 (full relation, reflexive pairs included)
//   comp|rres|lres <x> <y> <z> (x•y = z; one line per ordered pair per table)
//
// Relational structure file:
//   base <n>
//   unit <i> <j>
//   rel <name> <i> <j>
// A named relation exists iff it has at least one rel line, so the empty
// relation cannot be named in a file.

FiniteOrderedAlgebra parse_algebra_file(std::istream& in, const std::string& source = "<input>");
void write_algebra_file(std::ostream& out, const FiniteOrderedAlgebra& alg);

RelationalContext parse_rel_file(std::istream& in, const std::string& source = "<input>");
void write_rel_file(std::ostream& out, const RelationalContext& ctx);

// Reads a file, or the built-in witness algebra for "builtin:paper".
FiniteOrderedAlgebra load_algebra(const std::string& path);

RelationalContext load_rel_context(const std::string& path);

}  // namespace rsg

#endif
