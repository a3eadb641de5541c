#pragma once

#include <gmpxx.h>
#include <string>
#include <stdexcept>

namespace hcspver {

// Exact rational arithmetic. All states, trace values and expression
// constants are rationals; there is no floating-point mode.
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rational& r) { return r.get_str(); }

// Accepts "p", "-p", "p/q" and decimal strings like "0.25".
Rational rat_parse(const std::string& s);

Rational rat_pow(const Rational& base, long exp);

inline double rat_double(const Rational& r) { return r.get_d(); }

} // namespace hcspver
