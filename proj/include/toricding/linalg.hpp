#ifndef TORICDING_LINALG_HPP
#define TORICDING_LINALG_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "toricding/rational.hpp"

namespace toric {

// Small dense exact linear algebra. Dimensions here are tiny (n <= 5), so
// plain Gaussian elimination with first-nonzero pivoting is all we need.

inline Rational dot(const VecQ& a, const VecQ& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline VecQ sub(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline VecQ add(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline VecQ scale(const VecQ& a, const Rational& s) {
    VecQ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

Rational determinant(MatQ m);

std::size_t rank(MatQ m);

/// Solves m*x = rhs. Returns nullopt when m is singular.
std::optional<VecQ> solve_linear(MatQ m, VecQ rhs);

/// Generalized cross product: the vector orthogonal to the n-1 rows of
/// `rows` (each of length n), with cofactor signs. Zero vector iff the rows
/// are linearly dependent.
VecQ cross_generalized(const MatQ& rows, std::size_t n);

/// Divides an integer vector by the gcd of its entries (gcd of empty/zero
/// set is 1). Sign is preserved.
VecZ primitive(VecZ v);

}  // namespace toric

#endif
