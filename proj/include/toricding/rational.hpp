#ifndef TORICDING_RATIONAL_HPP
#define TORICDING_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

namespace toric {

// Exact rational scalar used throughout the combinatorial core. Floating
// point only enters in the functional evaluation layer.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

using VecQ = std::vector<Rational>;
using MatQ = std::vector<VecQ>;
using VecZ = std::vector<long long>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Canonical "p" or "p/q" form with q > 0 and gcd(p,q) = 1.
std::string rational_to_string(const Rational& q);

/// Accepts "p", "p/q" and plain decimals ("0.25" -> 1/4).
Rational parse_rational(const std::string& text);

VecQ to_rational(const VecZ& v);
std::vector<double> to_double(const VecQ& v);

}  // namespace toric

#endif
