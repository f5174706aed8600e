#ifndef RSG_ERRORS_HPP
#define RSG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rsg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed data: non-total tables, pairs outside the unit, bad bases.
struct StructuralError : Error {
  using Error::Error;
};

// Errors while reading the text formats; carries a line number when known.
struct ParseError : Error {
  using Error::Error;
};

// A library operation was called outside its stated precondition.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace rsg

#endif
