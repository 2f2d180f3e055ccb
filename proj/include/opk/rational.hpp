#pragma once

// Exact rational scalars. Every linear-algebra value in this library is an
// mpq_class; floating point is never used.

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace opk {

using Rat = mpq_class;

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Parses "p", "-p" or "p/q".
inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

}  // namespace opk
